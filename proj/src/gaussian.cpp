#include "gsynth/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace gsynth {

namespace {

void require_symmetric(const RealMatrix& m, double tol, ErrorKind kind,
                       const char* what) {
  const double scale = std::max(1.0, max_norm(m));
  if (max_norm(RealMatrix(m - m.transpose())) > tol * scale)
    throw Error(kind, std::string(what) + ": matrix is not symmetric");
}

Eigen::Index to_index(std::size_t n) { return static_cast<Eigen::Index>(n); }

}  // namespace

RealMatrix symplectic_form(std::size_t modes) {
  const Eigen::Index n = to_index(modes);
  RealMatrix s = RealMatrix::Zero(2 * n, 2 * n);
  s.topRightCorner(n, n).setIdentity();
  s.bottomLeftCorner(n, n) = -RealMatrix::Identity(n, n);
  return s;
}

CovarianceMatrix::CovarianceMatrix(RealMatrix v, double tol) {
  if (v.rows() != v.cols() || v.rows() == 0 || v.rows() % 2 != 0)
    throw Error(ErrorKind::Dimension,
                "CovarianceMatrix: expected a 2N x 2N matrix, got " +
                    std::to_string(v.rows()) + "x" + std::to_string(v.cols()));
  require_finite(v, "CovarianceMatrix");
  require_symmetric(v, tol, ErrorKind::InvalidCovariance, "CovarianceMatrix");
  v_ = 0.5 * (v + v.transpose());
  modes_ = static_cast<std::size_t>(v_.rows() / 2);
}

CovarianceMatrix CovarianceMatrix::vacuum(std::size_t modes) {
  const Eigen::Index n = 2 * to_index(modes);
  return CovarianceMatrix(0.5 * RealMatrix::Identity(n, n));
}

RealMatrix CovarianceMatrix::qq() const {
  const Eigen::Index n = to_index(modes_);
  return v_.topLeftCorner(n, n);
}

RealMatrix CovarianceMatrix::qp() const {
  const Eigen::Index n = to_index(modes_);
  return v_.topRightCorner(n, n);
}

RealMatrix CovarianceMatrix::pp() const {
  const Eigen::Index n = to_index(modes_);
  return v_.bottomRightCorner(n, n);
}

double CovarianceMatrix::uncertainty_margin() const {
  const ComplexMatrix h =
      v_.cast<cplx>() + cplx(0.0, 0.5) * symplectic_form(modes_).cast<cplx>();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool CovarianceMatrix::is_physical(double tol) const {
  return uncertainty_margin() >= -tol;
}

bool CovarianceMatrix::is_pure(double tol) const {
  const double det = v_.determinant();
  const double target = std::ldexp(1.0, -2 * static_cast<int>(modes_));
  return std::abs(det - target) <= tol * target;
}

GraphMatrix::GraphMatrix(RealMatrix x, RealMatrix y, double tol)
    : x_(std::move(x)), y_(std::move(y)) {
  if (x_.rows() != x_.cols() || y_.rows() != y_.cols() ||
      x_.rows() != y_.rows() || x_.rows() == 0)
    throw Error(ErrorKind::Dimension, "GraphMatrix: X and Y must be N x N");
  require_finite(x_, "GraphMatrix");
  require_finite(y_, "GraphMatrix");
  require_symmetric(x_, tol, ErrorKind::InvalidGraph, "GraphMatrix (X)");
  require_symmetric(y_, tol, ErrorKind::InvalidGraph, "GraphMatrix (Y)");
  x_ = 0.5 * (x_ + x_.transpose()).eval();
  y_ = 0.5 * (y_ + y_.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(y_, Eigen::EigenvaluesOnly);
  if (!(solver.eigenvalues().minCoeff() > 1e-12))
    throw Error(ErrorKind::InvalidGraph,
                "GraphMatrix: imaginary part is not positive definite");
}

GraphMatrix::GraphMatrix(const ComplexMatrix& z, double tol)
    : GraphMatrix(z.real(), z.imag(), tol) {}

ComplexMatrix GraphMatrix::z() const {
  ComplexMatrix out(x_.rows(), x_.cols());
  out.real() = x_;
  out.imag() = y_;
  return out;
}

GraphMatrix factor_covariance(const CovarianceMatrix& v, double tol) {
  if (!v.is_pure(tol))
    throw Error(ErrorKind::NotPure,
                "factor_covariance: det(V) differs from 2^{-2N}; the state is not pure");
  const RealMatrix two_qq = 2.0 * v.qq();
  const Eigen::LLT<RealMatrix> llt(two_qq);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorKind::DegenerateCovariance,
                "factor_covariance: position block is singular");
  const Eigen::Index n = two_qq.rows();
  const RealMatrix y = llt.solve(RealMatrix::Identity(n, n));
  const RealMatrix x = y * (2.0 * v.qp());
  return GraphMatrix(x, y, std::max(tol, 1e-8));
}

CovarianceMatrix graph_to_covariance(const GraphMatrix& z) {
  const Eigen::Index n = z.x().rows();
  const Eigen::LLT<RealMatrix> llt(z.y());
  const RealMatrix yinv = llt.solve(RealMatrix::Identity(n, n));
  const RealMatrix& x = z.x();
  RealMatrix v(2 * n, 2 * n);
  v.topLeftCorner(n, n) = yinv;
  v.topRightCorner(n, n) = yinv * x;
  v.bottomLeftCorner(n, n) = x * yinv;
  v.bottomRightCorner(n, n) = x * yinv * x + z.y();
  return CovarianceMatrix(0.5 * v, 1e-8);
}

double purity(const CovarianceMatrix& v) {
  const double det = v.matrix().determinant();
  if (!(det > 0.0))
    throw Error(ErrorKind::InvalidCovariance,
                "purity: covariance determinant is not positive");
  return 1.0 / (std::ldexp(1.0, static_cast<int>(v.modes())) * std::sqrt(det));
}

RealVector symplectic_eigenvalues(const RealMatrix& v) {
  require_square(v.rows(), v.cols(), "symplectic_eigenvalues");
  if (v.rows() % 2 != 0)
    throw Error(ErrorKind::Dimension, "symplectic_eigenvalues: odd dimension");
  const auto modes = static_cast<std::size_t>(v.rows() / 2);
  const ComplexMatrix m =
      cplx(0.0, 1.0) * (symplectic_form(modes) * v).cast<cplx>();
  const ComplexVector ev = eig(m).values;
  std::vector<double> moduli(static_cast<std::size_t>(ev.size()));
  for (Eigen::Index k = 0; k < ev.size(); ++k)
    moduli[static_cast<std::size_t>(k)] = std::abs(ev(k));
  std::sort(moduli.begin(), moduli.end());
  // The spectrum is {+nu_j, -nu_j}; after sorting moduli the pairs are adjacent.
  RealVector nu(static_cast<Eigen::Index>(modes));
  for (std::size_t j = 0; j < modes; ++j)
    nu(static_cast<Eigen::Index>(j)) = 0.5 * (moduli[2 * j] + moduli[2 * j + 1]);
  return nu;
}

RealMatrix partial_transpose(const RealMatrix& v, std::size_t mode) {
  const Eigen::Index n = v.rows() / 2;
  if (to_index(mode) >= n)
    throw Error(ErrorKind::IndexOutOfRange, "partial_transpose: mode out of range");
  RealMatrix out = v;
  const Eigen::Index p = n + to_index(mode);
  out.row(p) *= -1.0;
  out.col(p) *= -1.0;
  return out;
}

double log_negativity(const CovarianceMatrix& v) {
  if (v.modes() != 2)
    throw Error(ErrorKind::UnsupportedBipartition,
                "log_negativity: only two-mode states are supported, got " +
                    std::to_string(v.modes()) + " modes");
  const RealVector nu = symplectic_eigenvalues(partial_transpose(v.matrix(), 1));
  double e = 0.0;
  for (Eigen::Index j = 0; j < nu.size(); ++j)
    e += std::max(0.0, -std::log(2.0 * nu(j)));
  return e;
}

CovarianceMatrix reduced_state(const CovarianceMatrix& v,
                               const std::vector<std::size_t>& modes) {
  const std::size_t n = v.modes();
  std::vector<bool> used(n, false);
  for (std::size_t m : modes) {
    if (m >= n)
      throw Error(ErrorKind::IndexOutOfRange,
                  "reduced_state: mode " + std::to_string(m) + " out of range");
    if (used[m])
      throw Error(ErrorKind::IndexOutOfRange,
                  "reduced_state: mode " + std::to_string(m) + " listed twice");
    used[m] = true;
  }
  const Eigen::Index k = to_index(modes.size());
  std::vector<Eigen::Index> idx;
  idx.reserve(2 * modes.size());
  for (std::size_t m : modes) idx.push_back(to_index(m));
  for (std::size_t m : modes) idx.push_back(to_index(n + m));
  RealMatrix out(2 * k, 2 * k);
  for (Eigen::Index i = 0; i < 2 * k; ++i)
    for (Eigen::Index j = 0; j < 2 * k; ++j)
      out(i, j) = v.matrix()(idx[static_cast<std::size_t>(i)],
                             idx[static_cast<std::size_t>(j)]);
  return CovarianceMatrix(out);
}

RealMatrix interleaved_to_block(const RealMatrix& v) {
  const Eigen::Index n = v.rows() / 2;
  auto src = [n](Eigen::Index i) { return i < n ? 2 * i : 2 * (i - n) + 1; };
  RealMatrix out(v.rows(), v.cols());
  for (Eigen::Index i = 0; i < v.rows(); ++i)
    for (Eigen::Index j = 0; j < v.cols(); ++j) out(i, j) = v(src(i), src(j));
  return out;
}

RealMatrix block_to_interleaved(const RealMatrix& v) {
  const Eigen::Index n = v.rows() / 2;
  auto src = [n](Eigen::Index i) { return i % 2 == 0 ? i / 2 : n + i / 2; };
  RealMatrix out(v.rows(), v.cols());
  for (Eigen::Index i = 0; i < v.rows(); ++i)
    for (Eigen::Index j = 0; j < v.cols(); ++j) out(i, j) = v(src(i), src(j));
  return out;
}

}  // namespace gsynth
