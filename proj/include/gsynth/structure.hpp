#pragma once

// Block characterization of Gaussian graph matrices that admit a diagonal
// passive Hamiltonian with a single dissipative channel.
//
// A graph matrix qualifies iff it is permutation-similar to
// diag(Z_1, ..., Z_m), m = floor((N+1)/2), where Z_1 is a scalar with
// positive imaginary part (Lambda), diag(z, i) (Pi) or a Phi block, and the
// remaining blocks are Phi blocks [[a, b], [b, a]] with b^2 = a^2 + 1 and
// Im(a) > 0.

#include <cstddef>
#include <string>
#include <vector>

#include "gsynth/gaussian.hpp"
#include "gsynth/numerics.hpp"

namespace gsynth {

enum class BlockKind { Lambda, Pi, XiPhi };

const char* to_string(BlockKind kind) noexcept;

struct Block {
  BlockKind kind;
  ComplexMatrix entries;              // 1x1 or 2x2
  std::vector<std::size_t> modes;     // original mode indices, block order
};

enum class Infeasibility {
  None,
  OversizedComponent,
  NonPhiComponent,
  MultipleNonIScalars,
};

struct Certificate {
  bool feasible = false;
  Infeasibility failure = Infeasibility::None;
  std::string reason;
};

struct BlockDecomposition {
  Permutation permutation;
  std::vector<Block> blocks;
  /// Connected components of the off-diagonal support graph, each sorted.
  std::vector<std::vector<std::size_t>> components;
  Certificate certificate;

  /// diag(blocks) as an N x N matrix.
  ComplexMatrix block_diagonal() const;
};

/// [[a, b], [b, a]] with b^2 = a^2 + 1 and Im(a) > 0.
bool phi_membership(const ComplexMatrix& b, double tol = kDefaultTol);

/// Symmetric, Im(B) positive definite and (diag(1, -1) B)^2 = -I.
bool xi_membership(const ComplexMatrix& b, double tol = kDefaultTol);

/// rank(A - lambda I) = n - 1 at every eigenvalue lambda.
bool non_derogatory(const ComplexMatrix& a, double tol = kDefaultTol);

bool is_cyclic_vector(const ComplexMatrix& q, const ComplexVector& p,
                      double tol = kDefaultTol);

/// A unit-norm p with rank [p, Qp, ..., Q^{n-1}p] = n. Tries the eigenbasis
/// sum first, then the standard basis, then seeded random vectors. Throws
/// NoCyclicVector when q is derogatory.
ComplexVector find_cyclic_vector(const ComplexMatrix& q, double tol = kDefaultTol,
                                 unsigned seed = 0);

/// Connected components of the graph with an edge jk iff
/// |Z_jk| > tol * max|Z|, in order of their smallest index.
std::vector<std::vector<std::size_t>> support_components(const ComplexMatrix& z,
                                                         double tol = kDefaultTol);

BlockDecomposition decompose(const GraphMatrix& z, double tol = kDefaultTol);

}  // namespace gsynth
