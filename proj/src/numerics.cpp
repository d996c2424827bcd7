#include "gsynth/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace gsynth {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::NonFinite: return "non-finite";
    case ErrorKind::NotHurwitz: return "not-hurwitz";
    case ErrorKind::NotPure: return "not-pure";
    case ErrorKind::DegenerateCovariance: return "degenerate-covariance";
    case ErrorKind::InvalidCovariance: return "invalid-covariance";
    case ErrorKind::InvalidGraph: return "invalid-graph";
    case ErrorKind::UnsupportedBipartition: return "unsupported-bipartition";
    case ErrorKind::IndexOutOfRange: return "index-out-of-range";
    case ErrorKind::NoCyclicVector: return "no-cyclic-vector";
    case ErrorKind::SynthesisPrecondition: return "synthesis-precondition";
    case ErrorKind::InvalidR: return "invalid-r";
    case ErrorKind::Infeasible: return "infeasible";
    case ErrorKind::ConstructionBug: return "construction-bug";
    case ErrorKind::Parse: return "parse";
  }
  return "unknown";
}

double max_norm(const RealMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double max_norm(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void require_finite(const RealMatrix& m, const char* what) {
  if (!m.allFinite())
    throw Error(ErrorKind::NonFinite, std::string(what) + ": non-finite entry");
}

void require_finite(const ComplexMatrix& m, const char* what) {
  if (!m.real().allFinite() || !m.imag().allFinite())
    throw Error(ErrorKind::NonFinite, std::string(what) + ": non-finite entry");
}

void require_square(Eigen::Index rows, Eigen::Index cols, const char* what) {
  if (rows != cols || rows == 0)
    throw Error(ErrorKind::Dimension,
                std::string(what) + ": expected a non-empty square matrix, got " +
                    std::to_string(rows) + "x" + std::to_string(cols));
}

EigenDecomposition eig(const ComplexMatrix& a) {
  require_square(a.rows(), a.cols(), "eig");
  require_finite(a, "eig");
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(a, true);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::Dimension, "eig: QR iteration did not converge");
  EigenDecomposition out{solver.eigenvalues(), solver.eigenvectors()};
  for (Eigen::Index k = 0; k < out.vectors.cols(); ++k) {
    auto v = out.vectors.col(k);
    const double n = v.norm();
    if (!(n > 0.0)) continue;
    v /= n;
    // First entry of (near) maximal modulus is made real and positive.
    const double biggest = v.cwiseAbs().maxCoeff();
    Eigen::Index pivot = 0;
    while (std::abs(v(pivot)) < (1.0 - 1e-8) * biggest) ++pivot;
    v *= std::conj(v(pivot)) / std::abs(v(pivot));
  }
  return out;
}

double spectral_abscissa(const RealMatrix& a) {
  require_square(a.rows(), a.cols(), "spectral_abscissa");
  Eigen::EigenSolver<RealMatrix> solver(a, false);
  return solver.eigenvalues().real().maxCoeff();
}

int rank_tol(const ComplexMatrix& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const auto& s = svd.singularValues();
  const double cutoff = tol * std::max(1.0, s.size() ? s(0) : 0.0);
  return static_cast<int>((s.array() > cutoff).count());
}

int controllability_rank(const ComplexMatrix& q, const ComplexMatrix& p,
                         double tol) {
  require_square(q.rows(), q.cols(), "controllability_rank");
  if (p.rows() != q.rows())
    throw Error(ErrorKind::Dimension, "controllability_rank: row mismatch");
  const Eigen::Index n = q.rows();
  const Eigen::Index k = p.cols();
  const double rho = eig(q).values.cwiseAbs().maxCoeff();
  const ComplexMatrix qs = rho > 0.0 ? ComplexMatrix(q / rho) : q;

  ComplexMatrix krylov(n, n * k);
  ComplexMatrix block = p;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index c = 0; c < k; ++c) {
      const double norm = block.col(c).norm();
      krylov.col(j * k + c) = norm > 0.0 ? ComplexVector(block.col(c) / norm)
                                         : ComplexVector(block.col(c));
    }
    block = qs * block;
  }
  return rank_tol(krylov, tol);
}

RealMatrix kronecker_sum(const RealMatrix& a) {
  const Eigen::Index n = a.rows();
  const Eigen::Index nn = n * n;
  RealMatrix k = RealMatrix::Zero(nn, nn);
  // vec is column-major: vec(V)[i + n j] = V(i, j).
  // (I (x) A) vec(V) = vec(A V); (A (x) I) vec(V) = vec(V A^T).
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index row = i + n * j;
      for (Eigen::Index l = 0; l < n; ++l) {
        k(row, l + n * j) += a(i, l);
        k(row, i + n * l) += a(j, l);
      }
    }
  }
  return k;
}

namespace serial {

RealMatrix kronecker_sum(const RealMatrix& a) {
  const Eigen::Index n = a.rows();
  const RealMatrix eye = RealMatrix::Identity(n, n);
  const Eigen::Index nn = n * n;
  RealMatrix k(nn, nn);
  for (Eigen::Index p = 0; p < n; ++p)
    for (Eigen::Index q = 0; q < n; ++q)
      k.block(p * n, q * n, n, n) = eye(p, q) * a + a(p, q) * eye;
  return k;
}

}  // namespace serial

double lyapunov_residual(const RealMatrix& a, const RealMatrix& v,
                         const RealMatrix& d) {
  return max_norm(RealMatrix(a * v + v * a.transpose() + d));
}

RealMatrix solve_lyapunov(const RealMatrix& a, const RealMatrix& d) {
  require_square(a.rows(), a.cols(), "solve_lyapunov");
  require_square(d.rows(), d.cols(), "solve_lyapunov");
  if (a.rows() != d.rows())
    throw Error(ErrorKind::Dimension, "solve_lyapunov: A and D differ in size");
  require_finite(a, "solve_lyapunov");
  require_finite(d, "solve_lyapunov");
  const double abscissa = spectral_abscissa(a);
  if (!(abscissa < -kHurwitzMargin))
    throw Error(ErrorKind::NotHurwitz,
                "solve_lyapunov: drift matrix is not Hurwitz (spectral abscissa " +
                    std::to_string(abscissa) + ")");

  const Eigen::Index n = a.rows();
  const RealMatrix k = kronecker_sum(a);
  const Eigen::PartialPivLU<RealMatrix> lu(k);
  const Eigen::Map<const RealVector> rhs(d.data(), n * n);
  RealVector x = lu.solve(-rhs);
  // One step of iterative refinement.
  const RealVector r = -rhs - k * x;
  x += lu.solve(r);

  RealMatrix v = Eigen::Map<const RealMatrix>(x.data(), n, n);
  return 0.5 * (v + v.transpose());
}

namespace {

// Pade coefficients and the norm bounds below which each degree reaches
// unit roundoff (double precision).
constexpr std::array<double, 4> kPade3 = {120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5 = {30240.0, 15120.0, 3360.0,
                                          420.0,   30.0,    1.0};
constexpr std::array<double, 8> kPade7 = {17297280.0, 8648640.0, 1995840.0,
                                          277200.0,   25200.0,   1512.0,
                                          56.0,       1.0};
constexpr std::array<double, 10> kPade9 = {
    17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
    2162160.0,     110880.0,     3960.0,       90.0,        1.0};
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0,  129060195264000.0,   10559470521600.0,
    670442572800.0,      33522128640.0,       1323241920.0,
    40840800.0,          960960.0,            16380.0,
    182.0,               1.0};
constexpr std::array<double, 5> kTheta = {1.495585217958292e-2,
                                          2.539398330063230e-1,
                                          9.504178996162932e-1,
                                          2.097847961257068e0,
                                          5.371920351148152e0};

template <std::size_t M>
RealMatrix pade_low(const RealMatrix& a, const std::array<double, M>& b) {
  const Eigen::Index n = a.rows();
  const RealMatrix eye = RealMatrix::Identity(n, n);
  const RealMatrix a2 = a * a;
  RealMatrix even = b[0] * eye;
  RealMatrix odd = b[1] * eye;
  RealMatrix power = eye;
  for (std::size_t k = 2; k < M; k += 2) {
    power = power * a2;
    even += b[k] * power;
    if (k + 1 < M) odd += b[k + 1] * power;
  }
  const RealMatrix u = a * odd;
  return (even - u).partialPivLu().solve(even + u);
}

RealMatrix pade13(const RealMatrix& a) {
  const auto& b = kPade13;
  const Eigen::Index n = a.rows();
  const RealMatrix eye = RealMatrix::Identity(n, n);
  const RealMatrix a2 = a * a;
  const RealMatrix a4 = a2 * a2;
  const RealMatrix a6 = a4 * a2;
  const RealMatrix u =
      a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 +
           b[5] * a4 + b[3] * a2 + b[1] * eye);
  const RealMatrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) +
                       b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * eye;
  return (v - u).partialPivLu().solve(v + u);
}

}  // namespace

RealMatrix expm(const RealMatrix& a, double t) {
  require_square(a.rows(), a.cols(), "expm");
  require_finite(a, "expm");
  const RealMatrix at = a * t;
  const double norm1 = at.cwiseAbs().colwise().sum().maxCoeff();
  if (norm1 <= kTheta[0]) return pade_low(at, kPade3);
  if (norm1 <= kTheta[1]) return pade_low(at, kPade5);
  if (norm1 <= kTheta[2]) return pade_low(at, kPade7);
  if (norm1 <= kTheta[3]) return pade_low(at, kPade9);

  int squarings = 0;
  if (norm1 > kTheta[4])
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / kTheta[4])));
  RealMatrix e = pade13(at / std::ldexp(1.0, squarings));
  for (int s = 0; s < squarings; ++s) e = e * e;
  return e;
}

Permutation::Permutation(std::vector<std::size_t> image) : image_(std::move(image)) {
  std::vector<bool> seen(image_.size(), false);
  for (std::size_t v : image_) {
    if (v >= image_.size() || seen[v])
      throw Error(ErrorKind::Dimension, "Permutation: image is not a bijection");
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::size_t> image(n);
  std::iota(image.begin(), image.end(), std::size_t{0});
  return Permutation(std::move(image));
}

Permutation Permutation::inverse() const {
  std::vector<std::size_t> inv(image_.size());
  for (std::size_t i = 0; i < image_.size(); ++i) inv[image_[i]] = i;
  return Permutation(std::move(inv));
}

Permutation Permutation::compose(const Permutation& other) const {
  if (other.size() != size())
    throw Error(ErrorKind::Dimension, "Permutation::compose: size mismatch");
  // (P1 P2)(i, k) = 1 iff k = image2[image1[i]].
  std::vector<std::size_t> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = other.image_[image_[i]];
  return Permutation(std::move(out));
}

RealMatrix Permutation::matrix() const {
  const auto n = static_cast<Eigen::Index>(size());
  RealMatrix p = RealMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    p(i, static_cast<Eigen::Index>(image_[static_cast<std::size_t>(i)])) = 1.0;
  return p;
}

}  // namespace gsynth
