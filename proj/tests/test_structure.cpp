#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "gsynth/structure.hpp"
#include "oracles.hpp"

using namespace gsynth;
using fixtures::I;

namespace {

ComplexMatrix sym2(cplx a, cplx b, cplx d) {
  ComplexMatrix m(2, 2);
  m << a, b, b, d;
  return m;
}

ComplexMatrix companion_s3_plus_s() {
  // s^3 + s: last column holds -(c0, c1, c2) = (0, -1, 0).
  ComplexMatrix c = ComplexMatrix::Zero(3, 3);
  c(1, 0) = 1.0;
  c(2, 1) = 1.0;
  c(1, 2) = -1.0;
  return c;
}

// Feasibility by exhaustion: try every ordering of the modes and every way of
// cutting it into consecutive chunks of size 1 or 2, and accept if the chunks
// are decoupled, every pair has equal diagonals with b^2 = a^2 + 1 and
// Im a > 0, and at most one single is different from i.
bool feasible_by_enumeration(const ComplexMatrix& z, double tol) {
  const auto n = static_cast<std::size_t>(z.rows());
  const double zero = tol * z.cwiseAbs().maxCoeff();
  auto at = [&](std::size_t r, std::size_t c) {
    return z(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  };
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  do {
    // Each bitmask marks where a 2-chunk starts.
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      std::vector<std::vector<std::size_t>> chunks;
      bool shape_ok = true;
      for (std::size_t i = 0; i < n;) {
        if (mask & (1u << i)) {
          if (i + 1 >= n) { shape_ok = false; break; }
          chunks.push_back({perm[i], perm[i + 1]});
          i += 2;
        } else {
          chunks.push_back({perm[i]});
          i += 1;
        }
      }
      if (!shape_ok) continue;
      bool ok = true;
      int non_i = 0;
      for (std::size_t c = 0; c < chunks.size() && ok; ++c) {
        for (std::size_t d = 0; d < chunks.size() && ok; ++d) {
          if (c == d) continue;
          for (auto r : chunks[c])
            for (auto s : chunks[d])
              if (std::abs(at(r, s)) > zero) ok = false;
        }
        if (!ok) break;
        if (chunks[c].size() == 1) {
          if (std::abs(at(chunks[c][0], chunks[c][0]) - I) > tol) ++non_i;
        } else {
          const cplx a = at(chunks[c][0], chunks[c][0]);
          const cplx d = at(chunks[c][1], chunks[c][1]);
          const cplx b = at(chunks[c][0], chunks[c][1]);
          const bool pair_ok = std::abs(a - d) <= tol * 10 &&
                               std::abs(b * b - a * a - 1.0) <= tol * 100 &&
                               a.imag() > 0;
          if (!pair_ok) ok = false;
        }
      }
      if (ok && non_i <= 1) return true;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

// Random graph built from components of prescribed kinds, relabelled.
GraphMatrix random_structured_graph(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> kind(0, 5);
  ComplexMatrix z = ComplexMatrix::Zero(static_cast<Eigen::Index>(n),
                                        static_cast<Eigen::Index>(n));
  Eigen::Index at = 0;
  while (at < static_cast<Eigen::Index>(n)) {
    const Eigen::Index left = static_cast<Eigen::Index>(n) - at;
    const int k = kind(rng);
    if (k <= 1 || left == 1) {
      z(at, at) = k == 0 ? I : fixtures::random_upper_half_plane(rng);
      at += 1;
    } else if (k <= 3 || left == 2) {
      if (k == 2) {
        z.block(at, at, 2, 2) = fixtures::random_phi_block(rng);
      } else {
        z.block(at, at, 2, 2) = fixtures::random_graph(2, rng).z();
      }
      at += 2;
    } else {
      const Eigen::Index size = std::min<Eigen::Index>(3, left);
      z.block(at, at, size, size) = fixtures::random_graph(size, rng).z();
      at += size;
    }
  }
  const Permutation p(fixtures::random_permutation(n, rng));
  return GraphMatrix(p.conjugate(z));
}

std::map<BlockKind, int> kind_counts(const BlockDecomposition& d) {
  std::map<BlockKind, int> m;
  for (const auto& b : d.blocks) ++m[b.kind];
  return m;
}

}  // namespace

TEST_SUITE("structure") {

TEST_CASE("phi membership examples") {
  CHECK(phi_membership(sym2(I, 0.0, I)));
  CHECK(phi_membership(sym2(std::sqrt(2.0) * I, I, std::sqrt(2.0) * I)));
  CHECK_FALSE(phi_membership(sym2(-I, 0.0, -I)));   // Im a < 0
  CHECK_FALSE(phi_membership(sym2(I, 0.5, I)));     // b^2 != a^2 + 1
  CHECK_FALSE(phi_membership(sym2(I, 0.0, 2.0 * I)));
  CHECK_FALSE(phi_membership(ComplexMatrix::Identity(3, 3)));
  CHECK(phi_membership(fixtures::tms_graph(0.7).z()));
  CHECK(phi_membership(fixtures::pair_graph().z()));
}

TEST_CASE("xi membership examples") {
  CHECK(xi_membership(sym2(I, 0.0, I)));
  CHECK_FALSE(xi_membership(sym2(I, 0.0, -I)));
  CHECK(xi_membership(fixtures::pair_graph().z()));
  CHECK_FALSE(xi_membership(sym2(2.0 * I, 0.0, 2.0 * I)));
  CHECK_FALSE(xi_membership(sym2(2.0 * I, 0.0, I)));
}

TEST_CASE("the only square root of -I with positive definite imaginary part is iI") {
  std::mt19937_64 rng(59);
  std::bernoulli_distribution coin(0.5);
  int passed = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Eigen::Index n = 1 + trial % 4;
    ComplexMatrix a;
    if (trial % 3 == 0) {
      a = I * ComplexMatrix::Identity(n, n);
    } else {
      // Similarity transforms of diag(+-i): all square roots of -I.
      ComplexVector d(n);
      for (Eigen::Index k = 0; k < n; ++k) d(k) = coin(rng) ? I : -I;
      const ComplexMatrix f = fixtures::random_complex(n, n, rng);
      a = f * d.asDiagonal() * f.inverse();
    }
    const RealMatrix im = 0.5 * (a.imag() + a.imag().transpose());
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(im);
    const bool pd = es.eigenvalues().minCoeff() > 0.0;
    const bool sym = max_norm(ComplexMatrix(a - a.transpose())) < 1e-9 * std::max(1.0, max_norm(a));
    if (pd && sym && max_norm(ComplexMatrix(a * a + ComplexMatrix::Identity(n, n))) <= 1e-12) {
      ++passed;
      CHECK(max_norm(ComplexMatrix(a - I * ComplexMatrix::Identity(n, n))) <= 1e-9);
    }
  }
  CHECK(passed >= 100);
}

TEST_CASE("diag(1,-1) B has eigenvalues +-i for every Phi block") {
  std::mt19937_64 rng(63);
  for (int trial = 0; trial < 200; ++trial) {
    ComplexMatrix b = fixtures::random_phi_block(rng);
    b.row(1) *= -1.0;
    const ComplexVector ev = eig(b).values;
    const double hi = std::max(ev(0).imag(), ev(1).imag());
    const double lo = std::min(ev(0).imag(), ev(1).imag());
    CHECK(std::abs(ev(0).real()) < 1e-9);
    CHECK(std::abs(ev(1).real()) < 1e-9);
    CHECK(hi == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(lo == doctest::Approx(-1.0).epsilon(1e-9));
  }
}

TEST_CASE("random Phi blocks are Phi, Xi and satisfy the flip-square identity") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 1000; ++trial) {
    const ComplexMatrix b = fixtures::random_phi_block(rng);
    REQUIRE(phi_membership(b));
    CHECK(xi_membership(b));
    ComplexMatrix flipped = b;
    flipped.row(1) *= -1.0;
    const ComplexMatrix sq = flipped * flipped + ComplexMatrix::Identity(2, 2);
    CHECK(max_norm(sq) < 1e-12 * std::max(1.0, max_norm(b) * max_norm(b)));
    // Imaginary part is positive definite.
    const RealMatrix im = b.imag();
    CHECK(im.determinant() > 0.0);
    CHECK(im(0, 0) > 0.0);
  }
}

TEST_CASE("Xi and Phi membership agree on random symmetric 2x2 blocks") {
  std::mt19937_64 rng(67);
  std::uniform_int_distribution<int> pick(0, 3);
  std::normal_distribution<double> tiny(0.0, 1e-3);
  for (int trial = 0; trial < 2000; ++trial) {
    ComplexMatrix b;
    switch (pick(rng)) {
      case 0: b = fixtures::random_phi_block(rng); break;
      case 1: b = sym2(I, 0.0, I); break;
      case 2: {
        const ComplexMatrix c = fixtures::random_complex(2, 2, rng);
        b = 0.5 * (c + c.transpose());
        break;
      }
      default: {
        b = fixtures::random_phi_block(rng);
        b(0, 1) += tiny(rng);
        b(1, 0) = b(0, 1);
      }
    }
    CHECK(xi_membership(b) == phi_membership(b));
  }
}

TEST_CASE("non_derogatory examples") {
  CHECK_FALSE(non_derogatory(I * ComplexMatrix::Identity(2, 2)));
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = I;
  d(1, 1) = -I;
  CHECK(non_derogatory(d));
  CHECK(non_derogatory(companion_s3_plus_s()));
  // A single Jordan block is non-derogatory despite the repeated eigenvalue.
  ComplexMatrix j = ComplexMatrix::Zero(3, 3);
  j(0, 1) = 1.0;
  j(1, 2) = 1.0;
  CHECK(non_derogatory(j));
}

TEST_CASE("non_derogatory is invariant under similarity") {
  std::mt19937_64 rng(65);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 2 + trial % 4;
    ComplexMatrix a;
    if (trial % 2 == 0) {
      a = fixtures::random_complex(n, n, rng);
    } else {
      // Repeated eigenvalue in two separate Jordan blocks: derogatory.
      ComplexVector d = fixtures::random_complex(n, 1, rng);
      d(1) = d(0);
      a = d.asDiagonal();
    }
    const ComplexMatrix f = fixtures::random_complex(n, n, rng);
    const ComplexMatrix similar = f * a * f.inverse();
    CHECK(non_derogatory(similar, 1e-7) == non_derogatory(a, 1e-7));
    CHECK(non_derogatory(a, 1e-7) == (trial % 2 == 0));
  }
}

TEST_CASE("a cyclic vector is found exactly when the matrix is non-derogatory") {
  std::mt19937_64 rng(69);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 2 + trial % 4;
    ComplexVector d = fixtures::random_complex(n, 1, rng);
    if (trial % 2 == 1) d(n - 1) = d(0);
    const ComplexMatrix f = fixtures::random_complex(n, n, rng);
    const ComplexMatrix q = f * d.asDiagonal() * f.inverse();
    bool found = true;
    try {
      const ComplexVector p = find_cyclic_vector(q, 1e-7, static_cast<unsigned>(trial));
      CHECK(is_cyclic_vector(q, p, 1e-7));
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NoCyclicVector);
      found = false;
    }
    CHECK(found == non_derogatory(q, 1e-7));
    CHECK(found == (trial % 2 == 0));
  }
}

TEST_CASE("cyclic vector examples") {
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = I;
  d(1, 1) = -I;
  CHECK(is_cyclic_vector(d, ComplexVector::Ones(2)));
  const ComplexMatrix q = -fixtures::diag({1, -1}).cast<cplx>() * fixtures::pair_graph().z();
  CHECK(is_cyclic_vector(q, fixtures::pair_reference_P().col(0)));
  ComplexMatrix c(2, 2);
  c << 0, -1, 1, 0;
  CHECK(is_cyclic_vector(c, ComplexVector::Unit(2, 0)));
}

TEST_CASE("cyclic vectors") {
  const ComplexMatrix c = companion_s3_plus_s();
  CHECK(is_cyclic_vector(c, ComplexVector::Unit(3, 0)));
  CHECK_FALSE(is_cyclic_vector(ComplexMatrix::Identity(3, 3), ComplexVector::Ones(3)));
  const ComplexVector p = find_cyclic_vector(c);
  CHECK(p.norm() == doctest::Approx(1.0));
  CHECK(oracles::krylov_rank_direct(c, p, 1e-9) == 3);

  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = 2 + trial % 6;
    const ComplexMatrix q = fixtures::random_complex(n, n, rng);
    const ComplexVector v = find_cyclic_vector(q, kDefaultTol, 7);
    CHECK(is_cyclic_vector(q, v));
  }
  try {
    find_cyclic_vector(I * ComplexMatrix::Identity(2, 2));
    FAIL("expected NoCyclicVector");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoCyclicVector);
  }
}

TEST_CASE("support components") {
  const auto comps = support_components(fixtures::eight_mode_graph().z());
  REQUIRE(comps.size() == 4);
  for (std::size_t g = 0; g < 4; ++g)
    CHECK(comps[g] == std::vector<std::size_t>{2 * g, 2 * g + 1});
  const auto cluster = support_components(fixtures::cluster_graph(0.3).z());
  REQUIRE(cluster.size() == 1);
  CHECK(cluster[0].size() == 3);
}

TEST_CASE("decompose: feasible examples") {
  SUBCASE("iI, three modes") {
    const auto d = decompose(GraphMatrix(RealMatrix::Zero(3, 3), RealMatrix::Identity(3, 3)));
    CHECK(d.certificate.feasible);
    REQUIRE(d.blocks.size() == 2);
    CHECK(d.blocks[0].kind == BlockKind::Lambda);
    CHECK(d.blocks[1].kind == BlockKind::XiPhi);
  }
  SUBCASE("two-mode squeezed state is one Phi block") {
    const auto d = decompose(fixtures::tms_graph(0.7));
    CHECK(d.certificate.feasible);
    REQUIRE(d.blocks.size() == 1);
    CHECK(d.blocks[0].kind == BlockKind::XiPhi);
  }
  SUBCASE("non-i scalar with an i scalar makes a Pi block") {
    ComplexMatrix z = ComplexMatrix::Zero(2, 2);
    z(0, 0) = I;
    z(1, 1) = cplx(0.3, 2.0);
    const auto d = decompose(GraphMatrix(z));
    CHECK(d.certificate.feasible);
    REQUIRE(d.blocks.size() == 1);
    CHECK(d.blocks[0].kind == BlockKind::Pi);
    CHECK(d.blocks[0].modes == std::vector<std::size_t>{1, 0});
  }
  SUBCASE("eight-mode product") {
    const GraphMatrix g = fixtures::eight_mode_graph();
    const auto d = decompose(g);
    CHECK(d.certificate.feasible);
    CHECK(d.blocks.size() == 4);
    CHECK(max_norm(ComplexMatrix(d.permutation.conjugate(g.z()) - d.block_diagonal())) == 0.0);
  }
}

TEST_CASE("decompose: infeasible examples carry a reason") {
  const auto cluster = decompose(fixtures::cluster_graph(0.3));
  CHECK_FALSE(cluster.certificate.feasible);
  CHECK(cluster.certificate.failure == Infeasibility::OversizedComponent);
  CHECK(cluster.certificate.reason.find("component size 3") != std::string::npos);

  ComplexMatrix two = ComplexMatrix::Zero(2, 2);
  two(0, 0) = 2.0 * I;
  two(1, 1) = cplx(1.0, 1.0);
  const auto scalars = decompose(GraphMatrix(two));
  CHECK_FALSE(scalars.certificate.feasible);
  CHECK(scalars.certificate.failure == Infeasibility::MultipleNonIScalars);

  ComplexMatrix coupled(2, 2);
  coupled << 2.0 * I, 0.5, 0.5, 2.0 * I;
  const auto non_phi = decompose(GraphMatrix(coupled));
  CHECK_FALSE(non_phi.certificate.feasible);
  CHECK(non_phi.certificate.failure == Infeasibility::NonPhiComponent);
}

TEST_CASE("decompose agrees with exhaustive search on small graphs") {
  std::mt19937_64 rng(73);
  int feasible = 0, infeasible = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 5);
    const GraphMatrix g = random_structured_graph(rng, n);
    const bool got = decompose(g).certificate.feasible;
    CHECK(got == feasible_by_enumeration(g.z(), 1e-9));
    (got ? feasible : infeasible) += 1;
  }
  CHECK(feasible > 30);
  CHECK(infeasible > 30);
}

TEST_CASE("decompose output is consistent on random feasible graphs") {
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 200; ++trial) {
    const int pairs = 1 + trial % 4;
    const bool scalar = trial % 2 == 1;
    const GraphMatrix g = fixtures::random_feasible_graph(rng, pairs, scalar);
    const auto d = decompose(g);
    REQUIRE(d.certificate.feasible);
    CHECK(d.blocks.size() == static_cast<std::size_t>((g.modes() + 1) / 2));
    CHECK(max_norm(ComplexMatrix(d.permutation.conjugate(g.z()) - d.block_diagonal())) == 0.0);
    for (std::size_t k = 0; k < d.blocks.size(); ++k) {
      const auto& b = d.blocks[k];
      if (b.kind == BlockKind::XiPhi) CHECK(xi_membership(b.entries));
      if (b.kind == BlockKind::Lambda) {
        CHECK(k == 0);
        CHECK(b.entries(0, 0).imag() > 0.0);
      }
    }
    if (g.modes() <= 6) CHECK(oracles::blockable_by_enumeration(g.z(), 1e-12));
  }
}

TEST_CASE("feasibility is invariant under relabelling") {
  std::mt19937_64 rng(83);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 5);
    const GraphMatrix g = random_structured_graph(rng, n);
    const Permutation p(fixtures::random_permutation(n, rng));
    const GraphMatrix relabelled(p.conjugate(g.z()));
    const auto a = decompose(g), b = decompose(relabelled);
    CHECK(a.certificate.feasible == b.certificate.feasible);
    if (a.certificate.feasible) CHECK(kind_counts(a) == kind_counts(b));
  }
}

}  // TEST_SUITE
