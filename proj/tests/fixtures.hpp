#pragma once

// States and systems used across the test suites: the two-mode squeezed
// family, the sqrt(6)/2 entangled pair, the three-mode cluster state with its
// two-channel realization, and the eight-mode product of four entangled pairs.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "gsynth/dynamics.hpp"
#include "gsynth/gaussian.hpp"
#include "gsynth/noise.hpp"
#include "gsynth/structure.hpp"
#include "gsynth/synthesis.hpp"

namespace fixtures {

using namespace gsynth;

inline const cplx I(0.0, 1.0);
inline const double kR6 = std::sqrt(6.0) / 2.0;

inline RealMatrix diag(std::initializer_list<double> d) {
  RealVector v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index k = 0;
  for (double x : d) v(k++) = x;
  return v.asDiagonal();
}

inline RealMatrix tms_covariance_matrix(double alpha) {
  const double c = std::cosh(2 * alpha), s = std::sinh(2 * alpha);
  RealMatrix v(4, 4);
  v << c, s, 0, 0,
       s, c, 0, 0,
       0, 0, c, -s,
       0, 0, -s, c;
  return 0.5 * v;
}

inline GraphMatrix tms_graph(double alpha) {
  const double c = std::cosh(2 * alpha), s = std::sinh(2 * alpha);
  RealMatrix y(2, 2);
  y << c, -s, -s, c;
  return GraphMatrix(RealMatrix::Zero(2, 2), y);
}

/// P = i (cosh a + sinh a) / sqrt(2) (1, 1)^T.
inline ComplexMatrix tms_reference_P(double alpha) {
  return ComplexMatrix::Constant(2, 1, I * (std::cosh(alpha) + std::sinh(alpha)) / std::sqrt(2.0));
}

inline RealMatrix pair_covariance_matrix() {
  RealMatrix v(4, 4);
  v << kR6, -1, 0, 0.5,
       -1, kR6, 0.5, 0,
       0, 0.5, kR6, 1,
       0.5, 0, 1, kR6;
  return v;
}

inline GraphMatrix pair_graph() {
  RealMatrix x(2, 2), y(2, 2);
  x << 1, kR6, kR6, 1;
  y << kR6, 1, 1, kR6;
  return GraphMatrix(x, y);
}

inline ComplexMatrix pair_reference_P() {
  ComplexMatrix p(2, 1);
  p << 0.0, 1.0;
  return p;
}

/// Three-mode linear cluster: X = path adjacency, Y = e^{-2 alpha} I.
inline GraphMatrix cluster_graph(double alpha) {
  RealMatrix x(3, 3);
  x << 0, 1, 0,
       1, 0, 1,
       0, 1, 0;
  return GraphMatrix(x, std::exp(-2 * alpha) * RealMatrix::Identity(3, 3));
}

/// The two-channel realization with R = I and a 3x2 coupling matrix.
inline Realization cluster_realization(double alpha) {
  RealMatrix gamma(3, 3);
  gamma << 0, 1, 0,
           -1, 0, 1,
           0, -1, 0;
  gamma *= std::exp(-2 * alpha);
  ComplexMatrix p(3, 2);
  p << 1, 0,
       0, 0,
       0, 1;
  return assemble(cluster_graph(alpha), RealMatrix::Identity(3, 3), gamma, p);
}

inline RealMatrix eight_mode_covariance_matrix() {
  const Eigen::Index n = 8;
  RealMatrix v = RealMatrix::Zero(2 * n, 2 * n);
  for (Eigen::Index g = 0; g < 4; ++g) {
    const Eigen::Index a = 2 * g, b = 2 * g + 1;
    v(a, a) = v(b, b) = kR6;
    v(a, b) = v(b, a) = -1;
    v(n + a, n + a) = v(n + b, n + b) = kR6;
    v(n + a, n + b) = v(n + b, n + a) = 1;
    v(a, n + b) = v(n + b, a) = 0.5;
    v(b, n + a) = v(n + a, b) = 0.5;
  }
  return v;
}

inline GraphMatrix eight_mode_graph() {
  RealMatrix x = RealMatrix::Zero(8, 8), y = RealMatrix::Zero(8, 8);
  for (Eigen::Index g = 0; g < 4; ++g) {
    const Eigen::Index a = 2 * g, b = 2 * g + 1;
    x(a, a) = x(b, b) = 1;
    x(a, b) = x(b, a) = kR6;
    y(a, a) = y(b, b) = kR6;
    y(a, b) = y(b, a) = 1;
  }
  return GraphMatrix(x, y);
}

/// Four-decimal steady state of the two-mode squeezed system (alpha = 0.7) under
/// thermal baths gamma = 0.01, nbar = 10 on both modes.
inline RealMatrix tms_thermal_reference() {
  RealMatrix v(4, 4);
  v << 1.1943, 0.9169, -0.0047, -0.0464,
       0.9169, 1.1943, 0.0464, 0.0047,
       -0.0047, 0.0464, 1.1896, -0.9638,
       -0.0464, 0.0047, -0.9638, 1.1896;
  return v;
}

inline RealMatrix pair_thermal_reference() {
  RealMatrix v(4, 4);
  v << 1.7298, -1.2921, -0.0439, 0.4866,
       -1.2921, 1.4780, 0.6209, 0.0270,
       -0.0439, 0.6209, 1.5698, 1.0281,
       0.4866, 0.0270, 1.0281, 1.2790;
  return v;
}

// ---- random generators (seeded) -------------------------------------------

/// Phi block: z11 with Im > 0 and z12 = +-sqrt(z11^2 + 1).
inline ComplexMatrix random_phi_block(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> re(-2.0, 2.0), im(0.2, 2.5);
  std::bernoulli_distribution flip(0.5);
  const cplx a(re(rng), im(rng));
  cplx b = std::sqrt(a * a + 1.0);
  if (flip(rng)) b = -b;
  ComplexMatrix m(2, 2);
  m << a, b, b, a;
  return m;
}

inline cplx random_upper_half_plane(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> re(-2.0, 2.0), im(0.2, 2.5);
  return {re(rng), im(rng)};
}

inline std::vector<std::size_t> random_permutation(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

/// Feasible graph: `pairs` random Phi blocks, optionally one Lambda scalar,
/// relabelled by a random permutation.
inline GraphMatrix random_feasible_graph(std::mt19937_64& rng, int pairs, bool with_scalar) {
  const Eigen::Index n = 2 * pairs + (with_scalar ? 1 : 0);
  ComplexMatrix z = ComplexMatrix::Zero(n, n);
  Eigen::Index at = 0;
  if (with_scalar) z(at++, 0) = random_upper_half_plane(rng);
  for (int k = 0; k < pairs; ++k, at += 2) z.block(at, at, 2, 2) = random_phi_block(rng);
  const Permutation perm(random_permutation(static_cast<std::size_t>(n), rng));
  return GraphMatrix(perm.conjugate(z));
}

inline ComplexMatrix random_complex(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = cplx(g(rng), g(rng));
  return m;
}

inline RealMatrix random_real(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  RealMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = g(rng);
  return m;
}

/// Random valid graph matrix: symmetric X, Y = M M^T + 0.5 I.
inline GraphMatrix random_graph(Eigen::Index n, std::mt19937_64& rng) {
  const RealMatrix a = random_real(n, n, rng);
  const RealMatrix m = random_real(n, n, rng);
  return GraphMatrix(0.5 * (a + a.transpose()), m * m.transpose() + 0.5 * RealMatrix::Identity(n, n));
}

/// Stable random drift: shift a random matrix left of its spectral abscissa.
inline RealMatrix random_hurwitz(Eigen::Index n, std::mt19937_64& rng) {
  RealMatrix a = random_real(n, n, rng);
  const double shift = spectral_abscissa(a) + 0.5;
  a -= shift * RealMatrix::Identity(n, n);
  return a;
}

}  // namespace fixtures
