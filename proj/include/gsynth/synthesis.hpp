#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gsynth/gaussian.hpp"
#include "gsynth/structure.hpp"

namespace gsynth {

/// A linear quantum system H = x^T G x / 2, L = C x that targets the pure
/// state with graph matrix `graph`. G and C were built from the free
/// parameters R, Gamma and P.
struct Realization {
  GraphMatrix graph;
  RealMatrix R;       // N x N, diagonal for constrained designs (rad/s)
  RealMatrix Gamma;   // N x N antisymmetric
  ComplexMatrix P;    // N x K
  RealMatrix G;       // 2N x 2N symmetric
  ComplexMatrix C;    // K x 2N

  std::size_t modes() const noexcept { return graph.modes(); }
  std::size_t channels() const noexcept { return static_cast<std::size_t>(C.rows()); }
};

class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(Certificate certificate)
      : Error(ErrorKind::Infeasible, "infeasible: " + certificate.reason),
        certificate_(std::move(certificate)) {}

  const Certificate& certificate() const noexcept { return certificate_; }

 private:
  Certificate certificate_;
};

/// Diagonal frequency assignment R = P^T R~ P with block-local R~ of
/// 0 (Lambda), diag(0, 1) (Pi), diag(1, -1) (Phi in the first slot) and
/// diag(j, -j) for the j-th block (1-based, j >= 2).
RealMatrix build_R(const BlockDecomposition& dec, double tol = kDefaultTol);

/// Gamma = X R Y, after checking -Z R Z = R.
RealMatrix build_Gamma(const GraphMatrix& z, const RealMatrix& r,
                       double tol = kDefaultTol);

RealMatrix build_G(const RealMatrix& x, const RealMatrix& y, const RealMatrix& r,
                   const RealMatrix& gamma);

/// C = P^T [-Z, I].
ComplexMatrix build_C(const GraphMatrix& z, const ComplexMatrix& p);

/// Q = -iRY + Y^{-1} Gamma.
ComplexMatrix krylov_generator(const GraphMatrix& z, const RealMatrix& r,
                               const RealMatrix& gamma);

/// G and C from caller-supplied R, Gamma, P (no constraint enforcement).
Realization assemble(const GraphMatrix& z, RealMatrix r, RealMatrix gamma,
                     ComplexMatrix p);

struct SynthesisOptions {
  double tol = kDefaultTol;
  unsigned seed = 0;
};

/// Diagonal passive Hamiltonian, single channel. Throws InfeasibleError.
Realization synthesize(const GraphMatrix& z, const SynthesisOptions& opts = {});

struct ConstraintReport {
  bool passive_diagonal = false;   // G = diag(d, d)
  bool single_channel = false;     // K = 1
  bool rank_condition = false;     // rank [P, QP, ...] = N
  int krylov_rank = 0;
  std::vector<std::string> violations;

  bool all_pass() const noexcept {
    return passive_diagonal && single_channel && rank_condition;
  }
};

ConstraintReport verify_constraints(const Realization& r, double tol = kDefaultTol);

}  // namespace gsynth
