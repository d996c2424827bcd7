#pragma once

// Dense real/complex matrix substrate for systems with at most 64
// quadratures. Everything here is a pure function of its inputs.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gsynth/error.hpp"

namespace gsynth {

using cplx = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

/// Relative tolerance for structural zero/equality tests.
inline constexpr double kDefaultTol = 1e-9;
/// A is Hurwitz iff its spectral abscissa is below -kHurwitzMargin.
inline constexpr double kHurwitzMargin = 1e-12;

double max_norm(const RealMatrix& m);
double max_norm(const ComplexMatrix& m);

void require_finite(const RealMatrix& m, const char* what);
void require_finite(const ComplexMatrix& m, const char* what);
void require_square(Eigen::Index rows, Eigen::Index cols, const char* what);

struct EigenDecomposition {
  ComplexVector values;
  ComplexMatrix vectors;  // unit-norm columns, largest entry real and positive
};

EigenDecomposition eig(const ComplexMatrix& a);

/// Largest real part over the spectrum of a.
double spectral_abscissa(const RealMatrix& a);

/// Number of singular values above tol * max(1, sigma_max).
int rank_tol(const ComplexMatrix& m, double tol = kDefaultTol);

/// Rank of the Krylov matrix [p, q p, ..., q^{n-1} p]. Columns are built
/// from q / rho(q) and normalised, which leaves the rank unchanged but keeps
/// the test meaningful when the spectrum of q spans several magnitudes.
int controllability_rank(const ComplexMatrix& q, const ComplexMatrix& p,
                         double tol = kDefaultTol);

/// Solves A V + V A^T + D = 0 for Hurwitz A through the Kronecker identity
/// (I (x) A + A (x) I) vec(V) = -vec(D). Throws NotHurwitz otherwise.
RealMatrix solve_lyapunov(const RealMatrix& a, const RealMatrix& d);

/// Residual max-norm of A V + V A^T + D.
double lyapunov_residual(const RealMatrix& a, const RealMatrix& v,
                         const RealMatrix& d);

/// e^{A t} by scaling and squaring with a diagonal Pade approximant.
RealMatrix expm(const RealMatrix& a, double t = 1.0);

/// Kronecker sum I (x) A + A (x) I, assembled with OpenMP.
RealMatrix kronecker_sum(const RealMatrix& a);

namespace serial {
RealMatrix kronecker_sum(const RealMatrix& a);
}  // namespace serial

/// A permutation of {0..n-1}. As a matrix, P(i, image[i]) = 1, so
/// (P M P^T)(i, j) = M(image[i], image[j]).
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<std::size_t> image);

  static Permutation identity(std::size_t n);

  std::size_t size() const noexcept { return image_.size(); }
  std::size_t operator[](std::size_t i) const { return image_[i]; }
  std::span<const std::size_t> image() const noexcept { return image_; }

  Permutation inverse() const;
  /// (this * other) as matrices.
  Permutation compose(const Permutation& other) const;
  RealMatrix matrix() const;

  /// P M P^T.
  template <typename Derived>
  auto conjugate(const Eigen::MatrixBase<Derived>& m) const {
    using Plain = typename Derived::PlainObject;
    Plain out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        out(i, j) = m(static_cast<Eigen::Index>(image_[i]),
                      static_cast<Eigen::Index>(image_[j]));
    return out;
  }

  bool operator==(const Permutation&) const = default;

 private:
  std::vector<std::size_t> image_;
};

}  // namespace gsynth
