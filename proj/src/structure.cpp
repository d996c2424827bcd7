#include "gsynth/structure.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <queue>
#include <random>

#include <Eigen/Eigenvalues>

namespace gsynth {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

bool is_symmetric(const ComplexMatrix& b, double tol) {
  return max_norm(ComplexMatrix(b - b.transpose())) <=
         tol * std::max(1.0, max_norm(b));
}

bool is_two_by_two(const ComplexMatrix& b) { return b.rows() == 2 && b.cols() == 2; }

const cplx kI(0.0, 1.0);

std::string join(const std::vector<std::size_t>& modes) {
  std::string s;
  for (std::size_t m : modes) s += (s.empty() ? "" : ",") + std::to_string(m);
  return s;
}

}  // namespace

const char* to_string(BlockKind kind) noexcept {
  switch (kind) {
    case BlockKind::Lambda: return "Lambda";
    case BlockKind::Pi: return "Pi";
    case BlockKind::XiPhi: return "XiPhi";
  }
  return "unknown";
}

ComplexMatrix BlockDecomposition::block_diagonal() const {
  Eigen::Index n = 0;
  for (const auto& b : blocks) n += b.entries.rows();
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  Eigen::Index at = 0;
  for (const auto& b : blocks) {
    out.block(at, at, b.entries.rows(), b.entries.cols()) = b.entries;
    at += b.entries.rows();
  }
  return out;
}

bool phi_membership(const ComplexMatrix& b, double tol) {
  if (!is_two_by_two(b) || !is_symmetric(b, tol)) return false;
  const double scale = std::max(1.0, max_norm(b));
  const cplx a = b(0, 0);
  const cplx c = b(0, 1);
  return std::abs(b(0, 0) - b(1, 1)) <= tol * scale &&
         std::abs(c * c - a * a - 1.0) <= tol * scale * scale &&
         a.imag() > tol;
}

bool xi_membership(const ComplexMatrix& b, double tol) {
  if (!is_two_by_two(b) || !is_symmetric(b, tol)) return false;
  const double scale = std::max(1.0, max_norm(b));
  const RealMatrix im = 0.5 * (b.imag() + b.imag().transpose());
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(im, Eigen::EigenvaluesOnly);
  if (!(solver.eigenvalues().minCoeff() > tol)) return false;
  ComplexMatrix flipped = b;
  flipped.row(1) *= -1.0;
  const ComplexMatrix sq = flipped * flipped + ComplexMatrix::Identity(2, 2);
  return max_norm(sq) <= tol * scale * scale;
}

bool non_derogatory(const ComplexMatrix& a, double tol) {
  require_square(a.rows(), a.cols(), "non_derogatory");
  const Eigen::Index n = a.rows();
  const ComplexVector lambda = eig(a).values;
  const ComplexMatrix eye = ComplexMatrix::Identity(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    if (rank_tol(a - lambda(k) * eye, tol) < n - 1) return false;
  }
  return true;
}

bool is_cyclic_vector(const ComplexMatrix& q, const ComplexVector& p, double tol) {
  return controllability_rank(q, p, tol) == q.rows();
}

ComplexVector find_cyclic_vector(const ComplexMatrix& q, double tol, unsigned seed) {
  require_square(q.rows(), q.cols(), "find_cyclic_vector");
  if (!non_derogatory(q, tol))
    throw Error(ErrorKind::NoCyclicVector,
                "find_cyclic_vector: matrix is derogatory, no cyclic vector exists");
  const Eigen::Index n = q.rows();
  auto accept = [&](ComplexVector p) -> std::optional<ComplexVector> {
    const double norm = p.norm();
    if (!(norm > 0.0)) return std::nullopt;
    p /= norm;
    if (is_cyclic_vector(q, p, tol)) return p;
    return std::nullopt;
  };

  const auto decomposition = eig(q);
  if (auto p = accept(decomposition.vectors * ComplexVector::Ones(n))) return *p;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (auto p = accept(ComplexVector::Unit(n, j))) return *p;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  for (int attempt = 0; attempt < 64; ++attempt) {
    ComplexVector p(n);
    for (Eigen::Index j = 0; j < n; ++j) p(j) = cplx(gauss(rng), gauss(rng));
    if (auto accepted = accept(p)) return *accepted;
  }
  throw Error(ErrorKind::NoCyclicVector,
              "find_cyclic_vector: no candidate passed the rank test");
}

std::vector<std::vector<std::size_t>> support_components(const ComplexMatrix& z,
                                                         double tol) {
  require_square(z.rows(), z.cols(), "support_components");
  const auto n = static_cast<std::size_t>(z.rows());
  const double threshold = tol * max_norm(z);
  std::vector<bool> visited(n, false);
  std::vector<std::vector<std::size_t>> components;
  for (std::size_t start = 0; start < n; ++start) {
    if (visited[start]) continue;
    std::vector<std::size_t> component;
    std::queue<std::size_t> frontier;
    frontier.push(start);
    visited[start] = true;
    while (!frontier.empty()) {
      const std::size_t j = frontier.front();
      frontier.pop();
      component.push_back(j);
      for (std::size_t k = 0; k < n; ++k) {
        if (visited[k] || k == j) continue;
        if (std::abs(z(idx(j), idx(k))) > threshold ||
            std::abs(z(idx(k), idx(j))) > threshold) {
          visited[k] = true;
          frontier.push(k);
        }
      }
    }
    std::sort(component.begin(), component.end());
    components.push_back(std::move(component));
  }
  return components;
}

BlockDecomposition decompose(const GraphMatrix& graph, double tol) {
  const ComplexMatrix z = graph.z();
  const std::size_t n = graph.modes();

  BlockDecomposition out;
  out.permutation = Permutation::identity(n);
  out.components = support_components(z, tol);

  auto fail = [&](Infeasibility why, std::string reason) {
    out.certificate = Certificate{false, why, std::move(reason)};
    return out;
  };

  std::vector<std::size_t> i_scalars;
  std::vector<std::size_t> other_scalars;
  std::vector<std::vector<std::size_t>> pairs;
  for (const auto& c : out.components) {
    if (c.size() > 2)
      return fail(Infeasibility::OversizedComponent,
                  "component size " + std::to_string(c.size()) + " (modes " +
                      join(c) + ")");
    if (c.size() == 2) {
      ComplexMatrix b(2, 2);
      b << z(idx(c[0]), idx(c[0])), z(idx(c[0]), idx(c[1])),
          z(idx(c[1]), idx(c[0])), z(idx(c[1]), idx(c[1]));
      if (!phi_membership(b, tol))
        return fail(Infeasibility::NonPhiComponent,
                    "non-Phi 2x2 component (modes " + std::to_string(c[0]) + "," +
                        std::to_string(c[1]) + ")");
      pairs.push_back(c);
    } else {
      const cplx value = z(idx(c[0]), idx(c[0]));
      (std::abs(value - kI) <= tol ? i_scalars : other_scalars).push_back(c[0]);
    }
  }
  if (other_scalars.size() > 1)
    return fail(Infeasibility::MultipleNonIScalars,
                "more than one non-i scalar (" + std::to_string(other_scalars.size()) +
                    " found)");

  auto scalar_block = [&](BlockKind kind, std::size_t m) {
    ComplexMatrix e(1, 1);
    e(0, 0) = z(idx(m), idx(m));
    return Block{kind, e, {m}};
  };
  auto pair_block = [&](BlockKind kind, std::size_t a, std::size_t b) {
    ComplexMatrix e(2, 2);
    e << z(idx(a), idx(a)), z(idx(a), idx(b)), z(idx(b), idx(a)), z(idx(b), idx(b));
    return Block{kind, e, {a, b}};
  };

  std::size_t next_i = 0;
  if (n % 2 == 1) {
    // Odd N: exactly one scalar is left over and it lies in Lambda.
    if (!other_scalars.empty()) {
      out.blocks.push_back(scalar_block(BlockKind::Lambda, other_scalars.front()));
    } else {
      out.blocks.push_back(scalar_block(BlockKind::Lambda, i_scalars[next_i++]));
    }
  } else if (!other_scalars.empty()) {
    // Even N: the non-i scalar pairs with an i scalar into a Pi block.
    out.blocks.push_back(
        pair_block(BlockKind::Pi, other_scalars.front(), i_scalars[next_i++]));
  }
  for (const auto& p : pairs) out.blocks.push_back(pair_block(BlockKind::XiPhi, p[0], p[1]));
  for (; next_i + 1 < i_scalars.size(); next_i += 2)
    out.blocks.push_back(
        pair_block(BlockKind::XiPhi, i_scalars[next_i], i_scalars[next_i + 1]));

  std::vector<std::size_t> image;
  image.reserve(n);
  for (const auto& b : out.blocks) image.insert(image.end(), b.modes.begin(), b.modes.end());
  out.permutation = Permutation(std::move(image));
  out.certificate = Certificate{true, Infeasibility::None,
                                std::to_string(out.blocks.size()) + " blocks"};
  return out;
}

}  // namespace gsynth
