#include "gsynth/synthesis.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>

namespace gsynth {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

RealMatrix y_inverse(const RealMatrix& y) {
  const Eigen::LLT<RealMatrix> llt(y);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorKind::InvalidGraph, "Y is not positive definite");
  return llt.solve(RealMatrix::Identity(y.rows(), y.cols()));
}

const cplx kI(0.0, 1.0);

}  // namespace

RealMatrix build_R(const BlockDecomposition& dec, double tol) {
  if (!dec.certificate.feasible)
    throw Error(ErrorKind::SynthesisPrecondition,
                "build_R: decomposition is infeasible (" + dec.certificate.reason + ")");
  const std::size_t n = dec.permutation.size();
  RealVector local = RealVector::Zero(idx(n));
  Eigen::Index at = 0;
  for (std::size_t j = 0; j < dec.blocks.size(); ++j) {
    const Block& b = dec.blocks[j];
    const auto slot = static_cast<double>(j + 1);
    switch (b.kind) {
      case BlockKind::Lambda:
        local(at) = 0.0;
        break;
      case BlockKind::Pi:
        local(at) = 0.0;
        local(at + 1) = 1.0;
        break;
      case BlockKind::XiPhi:
        local(at) = slot;
        local(at + 1) = -slot;
        break;
    }
    at += b.entries.rows();
  }

  const RealMatrix r_local = local.asDiagonal();
  const ComplexMatrix z_local = dec.block_diagonal();
  const ComplexMatrix check =
      z_local * r_local.cast<cplx>() * z_local + r_local.cast<cplx>();
  const double scale =
      std::max(1.0, max_norm(z_local) * max_norm(z_local) * max_norm(r_local));
  if (max_norm(check) > tol * scale)
    throw Error(ErrorKind::InvalidR, "build_R: -Z~ R~ Z~ = R~ does not hold");

  RealMatrix r = RealMatrix::Zero(idx(n), idx(n));
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Index m = idx(dec.permutation[i]);
    r(m, m) = local(idx(i));
  }
  return r;
}

RealMatrix build_Gamma(const GraphMatrix& z, const RealMatrix& r, double tol) {
  const ComplexMatrix zc = z.z();
  const ComplexMatrix rc = r.cast<cplx>();
  const double scale =
      std::max(1.0, max_norm(zc) * max_norm(zc) * max_norm(r));
  if (max_norm(ComplexMatrix(zc * rc * zc + rc)) > tol * scale)
    throw Error(ErrorKind::InvalidR, "build_Gamma: -Z R Z = R does not hold");
  const RealMatrix gamma = z.x() * r * z.y();
  if (max_norm(RealMatrix(gamma + gamma.transpose())) > tol * scale)
    throw Error(ErrorKind::InvalidR, "build_Gamma: X R Y is not antisymmetric");
  return 0.5 * (gamma - gamma.transpose());
}

RealMatrix build_G(const RealMatrix& x, const RealMatrix& y, const RealMatrix& r,
                   const RealMatrix& gamma) {
  const Eigen::Index n = x.rows();
  if (y.rows() != n || r.rows() != n || gamma.rows() != n || x.cols() != n ||
      y.cols() != n || r.cols() != n || gamma.cols() != n)
    throw Error(ErrorKind::Dimension, "build_G: X, Y, R, Gamma must all be N x N");
  const RealMatrix yinv = y_inverse(y);
  RealMatrix g(2 * n, 2 * n);
  g.topLeftCorner(n, n) = x * r * x + y * r * y - gamma * yinv * x -
                          x * yinv * gamma.transpose();
  g.topRightCorner(n, n) = -x * r + gamma * yinv;
  g.bottomLeftCorner(n, n) = -r * x + yinv * gamma.transpose();
  g.bottomRightCorner(n, n) = r;
  return g;
}

ComplexMatrix build_C(const GraphMatrix& z, const ComplexMatrix& p) {
  const Eigen::Index n = idx(z.modes());
  if (p.rows() != n)
    throw Error(ErrorKind::Dimension, "build_C: P must have N rows");
  ComplexMatrix block(n, 2 * n);
  block.leftCols(n) = -z.z();
  block.rightCols(n) = ComplexMatrix::Identity(n, n);
  return p.transpose() * block;
}

ComplexMatrix krylov_generator(const GraphMatrix& z, const RealMatrix& r,
                               const RealMatrix& gamma) {
  return -kI * (r * z.y()).cast<cplx>() + (y_inverse(z.y()) * gamma).cast<cplx>();
}

Realization assemble(const GraphMatrix& z, RealMatrix r, RealMatrix gamma,
                     ComplexMatrix p) {
  RealMatrix g = build_G(z.x(), z.y(), r, gamma);
  g = 0.5 * (g + g.transpose()).eval();
  ComplexMatrix c = build_C(z, p);
  return Realization{z, std::move(r), std::move(gamma), std::move(p), std::move(g),
                     std::move(c)};
}

Realization synthesize(const GraphMatrix& z, const SynthesisOptions& opts) {
  const BlockDecomposition dec = decompose(z, opts.tol);
  if (!dec.certificate.feasible) throw InfeasibleError(dec.certificate);
  RealMatrix r = build_R(dec, opts.tol);
  RealMatrix gamma = build_Gamma(z, r, opts.tol);
  // With Gamma = XRY the generator -iRY + Y^{-1} Gamma reduces to -RZ.
  const ComplexMatrix q = -r.cast<cplx>() * z.z();
  const ComplexVector p = find_cyclic_vector(q, opts.tol, opts.seed);
  Realization out = assemble(z, std::move(r), std::move(gamma), ComplexMatrix(p));
  // The general G agrees with diag(R, R) only to rounding; store the exact
  // passive form once the agreement is confirmed.
  const Eigen::Index n = idx(z.modes());
  RealMatrix passive = RealMatrix::Zero(2 * n, 2 * n);
  passive.topLeftCorner(n, n) = out.R;
  passive.bottomRightCorner(n, n) = out.R;
  const double zscale = std::max(1.0, max_norm(z.z()));
  if (max_norm(RealMatrix(out.G - passive)) >
      opts.tol * zscale * zscale * std::max(1.0, max_norm(out.R)))
    throw Error(ErrorKind::ConstructionBug,
                "synthesize: Hamiltonian does not reduce to diag(R, R)");
  out.G = passive;
  return out;
}

ConstraintReport verify_constraints(const Realization& r, double tol) {
  ConstraintReport report;
  const Eigen::Index n = idx(r.modes());
  const double scale = std::max(1.0, max_norm(r.G));

  RealMatrix off = r.G;
  off.diagonal().setZero();
  const bool diagonal = max_norm(off) <= tol * scale;
  bool paired = true;
  for (Eigen::Index j = 0; j < n; ++j)
    paired = paired && std::abs(r.G(j, j) - r.G(n + j, n + j)) <= tol * scale;
  report.passive_diagonal = diagonal && paired;
  if (!diagonal) report.violations.emplace_back("G has off-diagonal couplings");
  if (diagonal && !paired)
    report.violations.emplace_back("G is diagonal but q and p frequencies differ");

  report.single_channel = r.channels() == 1;
  if (!report.single_channel)
    report.violations.emplace_back("K = " + std::to_string(r.channels()) +
                                   " dissipative channels (expected 1)");

  const ComplexMatrix q = krylov_generator(r.graph, r.R, r.Gamma);
  report.krylov_rank = controllability_rank(q, r.P, tol);
  report.rank_condition = report.krylov_rank == n;
  if (!report.rank_condition)
    report.violations.emplace_back("rank condition fails: rank " +
                                   std::to_string(report.krylov_rank) + " < " +
                                   std::to_string(n));
  return report;
}

}  // namespace gsynth
