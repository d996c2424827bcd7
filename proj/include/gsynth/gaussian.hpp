#pragma once

// Gaussian-state data model. Conventions: hbar = 1, vacuum covariance I/2,
// quadratures ordered (q_1..q_N, p_1..p_N), natural logarithm in the
// negativity.

#include <cstddef>
#include <vector>

#include "gsynth/numerics.hpp"

namespace gsynth {

/// Sigma_N = [[0, I], [-I, 0]].
RealMatrix symplectic_form(std::size_t modes);

/// A 2N x 2N real symmetric covariance matrix. Construction checks shape,
/// finiteness and symmetry (then symmetrises); physicality is a separate
/// query because intermediate trajectories may be checked at looser bounds.
class CovarianceMatrix {
 public:
  explicit CovarianceMatrix(RealMatrix v, double tol = kDefaultTol);

  static CovarianceMatrix vacuum(std::size_t modes);

  std::size_t modes() const noexcept { return modes_; }
  const RealMatrix& matrix() const noexcept { return v_; }

  RealMatrix qq() const;
  RealMatrix qp() const;
  RealMatrix pp() const;

  /// Smallest eigenvalue of the Hermitian matrix V + (i/2) Sigma.
  double uncertainty_margin() const;
  bool is_physical(double tol = kDefaultTol) const;
  /// det(V) = 2^{-2N} within tol, relative.
  bool is_pure(double tol = kDefaultTol) const;

 private:
  std::size_t modes_ = 0;
  RealMatrix v_;
};

/// Z = X + iY with X, Y real symmetric and Y positive definite.
class GraphMatrix {
 public:
  GraphMatrix(RealMatrix x, RealMatrix y, double tol = kDefaultTol);
  explicit GraphMatrix(const ComplexMatrix& z, double tol = kDefaultTol);

  std::size_t modes() const noexcept { return static_cast<std::size_t>(x_.rows()); }
  const RealMatrix& x() const noexcept { return x_; }
  const RealMatrix& y() const noexcept { return y_; }
  ComplexMatrix z() const;

 private:
  RealMatrix x_;
  RealMatrix y_;
};

GraphMatrix factor_covariance(const CovarianceMatrix& v, double tol = kDefaultTol);
CovarianceMatrix graph_to_covariance(const GraphMatrix& z);

/// 1 / (2^N sqrt(det V)).
double purity(const CovarianceMatrix& v);

/// Symplectic eigenvalues nu_1 <= ... <= nu_N, the moduli of the spectrum of
/// i Sigma V with conjugate pairs merged.
RealVector symplectic_eigenvalues(const RealMatrix& v);

/// Flips the sign of p_mode: T V T with T = diag(1.., -1 at p_mode, ..1).
RealMatrix partial_transpose(const RealMatrix& v, std::size_t mode);

/// Logarithmic negativity of a two-mode state across the 1|1 split.
double log_negativity(const CovarianceMatrix& v);

/// Restriction to the listed modes, keeping (q..., p...) ordering.
CovarianceMatrix reduced_state(const CovarianceMatrix& v,
                               const std::vector<std::size_t>& modes);

/// Converts between (q1, p1, q2, p2, ...) and (q1..qN, p1..pN) orderings.
RealMatrix interleaved_to_block(const RealMatrix& v);
RealMatrix block_to_interleaved(const RealMatrix& v);

}  // namespace gsynth
