#include "gsynth/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace gsynth {

namespace {

const cplx kI(0.0, 1.0);

void check_times(const std::vector<double>& times) {
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!(times[k] >= 0.0) || !std::isfinite(times[k]))
      throw Error(ErrorKind::Dimension, "evolve: times must be finite and non-negative");
    if (k > 0 && times[k] < times[k - 1])
      throw Error(ErrorKind::Dimension, "evolve: times must be ascending");
  }
}

void check_initial(const MomentSystem& ms, const RealMatrix& v0, const RealVector& mean0) {
  if (v0.rows() != ms.A.rows() || mean0.size() != ms.A.rows())
    throw Error(ErrorKind::Dimension, "evolve: initial moments do not match the system size");
}

struct Sample {
  RealVector mean;
  RealMatrix cov;
};

Sample closed_form(const RealMatrix& a, const RealMatrix& v0, const RealMatrix& vss,
                   const RealVector& mean0, double t) {
  const RealMatrix e = expm(a, t);
  RealMatrix v = e * (v0 - vss) * e.transpose() + vss;
  return {e * mean0, 0.5 * (v + v.transpose())};
}

}  // namespace

MomentSystem build_moment_system(const RealMatrix& g, const ComplexMatrix& c) {
  if (g.rows() != g.cols() || g.rows() == 0 || g.rows() % 2 != 0)
    throw Error(ErrorKind::Dimension, "build_moment_system: G must be 2N x 2N");
  if (c.cols() != g.rows())
    throw Error(ErrorKind::Dimension,
                "build_moment_system: C has " + std::to_string(c.cols()) +
                    " columns, expected " + std::to_string(g.rows()));
  require_finite(g, "build_moment_system");
  require_finite(c, "build_moment_system");
  const auto modes = static_cast<std::size_t>(g.rows() / 2);
  const Eigen::Index n2 = g.rows();
  const RealMatrix sigma = symplectic_form(modes);

  const ComplexMatrix cc = c.adjoint() * c;
  RealMatrix a = sigma * (g + cc.imag());

  ComplexMatrix stacked(n2, 2 * c.rows());
  stacked.leftCols(c.rows()) = -c.adjoint();
  stacked.rightCols(c.rows()) = c.transpose();
  const ComplexMatrix b = kI * sigma.cast<cplx>() * stacked;
  const ComplexMatrix d = 0.5 * b * b.adjoint();
  const double scale = std::max(1.0, max_norm(d));
  if (max_norm(RealMatrix(d.imag())) > 1e-12 * scale)
    throw Error(ErrorKind::ConstructionBug,
                "build_moment_system: diffusion matrix has an imaginary part");
  RealMatrix dr = d.real();
  dr = 0.5 * (dr + dr.transpose()).eval();
  return MomentSystem{std::move(a), std::move(dr), c};
}

bool is_hurwitz(const RealMatrix& a) { return spectral_abscissa(a) < -kHurwitzMargin; }

CovarianceMatrix steady_state(const MomentSystem& ms) {
  CovarianceMatrix v(solve_lyapunov(ms.A, ms.D));
  if (!v.is_physical(1e-9 * std::max(1.0, max_norm(v.matrix()))))
    throw Error(ErrorKind::InvalidCovariance,
                "steady_state: solution violates the uncertainty relation");
  return v;
}

Trajectory integrate_rk4(const MomentSystem& ms, const RealMatrix& v0,
                         const RealVector& mean0, const std::vector<double>& times) {
  check_times(times);
  check_initial(ms, v0, mean0);
  const RealMatrix& a = ms.A;
  const RealMatrix at = a.transpose();
  const double a_norm = std::max(max_norm(a) * static_cast<double>(a.rows()), 1e-300);
  const double max_step = 1e-3 / a_norm;

  auto rhs_v = [&](const RealMatrix& v) -> RealMatrix { return a * v + v * at + ms.D; };
  auto rhs_m = [&](const RealVector& m) -> RealVector { return a * m; };

  Trajectory out;
  RealMatrix v = v0;
  RealVector m = mean0;
  double t = 0.0;
  for (double target : times) {
    const double span = target - t;
    if (span > 0.0) {
      const auto steps = static_cast<long>(std::ceil(span / max_step));
      const double h = span / static_cast<double>(steps);
      for (long s = 0; s < steps; ++s) {
        const RealMatrix k1 = rhs_v(v);
        const RealMatrix k2 = rhs_v(v + 0.5 * h * k1);
        const RealMatrix k3 = rhs_v(v + 0.5 * h * k2);
        const RealMatrix k4 = rhs_v(v + h * k3);
        v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        const RealVector m1 = rhs_m(m);
        const RealVector m2 = rhs_m(m + 0.5 * h * m1);
        const RealVector m3 = rhs_m(m + 0.5 * h * m2);
        const RealVector m4 = rhs_m(m + h * m3);
        m += (h / 6.0) * (m1 + 2.0 * m2 + 2.0 * m3 + m4);
      }
      v = 0.5 * (v + v.transpose()).eval();
      t = target;
    }
    out.times.push_back(target);
    out.means.push_back(m);
    out.covariances.push_back(v);
  }
  return out;
}

Trajectory evolve(const MomentSystem& ms, const CovarianceMatrix& v0,
                  const RealVector& mean0, const std::vector<double>& times,
                  const EvolveOptions& opts) {
  check_times(times);
  check_initial(ms, v0.matrix(), mean0);
  if (opts.force_integrator || !is_hurwitz(ms.A))
    return integrate_rk4(ms, v0.matrix(), mean0, times);

  const RealMatrix vss = solve_lyapunov(ms.A, ms.D);
  const auto count = static_cast<long>(times.size());
  Trajectory out;
  out.times = times;
  out.means.resize(times.size());
  out.covariances.resize(times.size());
#pragma omp parallel for schedule(dynamic)
  for (long k = 0; k < count; ++k) {
    const auto i = static_cast<std::size_t>(k);
    Sample s = closed_form(ms.A, v0.matrix(), vss, mean0, times[i]);
    out.means[i] = std::move(s.mean);
    out.covariances[i] = std::move(s.cov);
  }
  return out;
}

namespace serial {

Trajectory evolve(const MomentSystem& ms, const CovarianceMatrix& v0,
                  const RealVector& mean0, const std::vector<double>& times) {
  check_times(times);
  check_initial(ms, v0.matrix(), mean0);
  const RealMatrix vss = solve_lyapunov(ms.A, ms.D);
  Trajectory out;
  for (double t : times) {
    Sample s = closed_form(ms.A, v0.matrix(), vss, mean0, t);
    out.times.push_back(t);
    out.means.push_back(std::move(s.mean));
    out.covariances.push_back(std::move(s.cov));
  }
  return out;
}

}  // namespace serial

GenerationReport verify_generation(const Realization& r, const CovarianceMatrix& target,
                                   double tol, double structural_tol) {
  GenerationReport report;
  report.tolerance = tol;
  report.constraints = verify_constraints(r, structural_tol);
  const MomentSystem ms = build_moment_system(r.G, r.C);
  report.spectral_abscissa = spectral_abscissa(ms.A);
  report.hurwitz = report.spectral_abscissa < -kHurwitzMargin;
  if (!report.hurwitz) {
    report.max_error = std::numeric_limits<double>::infinity();
    return report;
  }
  const RealMatrix v = solve_lyapunov(ms.A, ms.D);
  report.steady = v;
  report.lyapunov_residual = lyapunov_residual(ms.A, v, ms.D);
  if (target.matrix().rows() != v.rows()) {
    report.max_error = std::numeric_limits<double>::infinity();
    return report;
  }
  report.max_error = max_norm(RealMatrix(v - target.matrix()));
  const double det = v.determinant();
  report.purity = det > 0.0 ? 1.0 / (std::ldexp(1.0, static_cast<int>(r.modes())) *
                                     std::sqrt(det))
                            : 0.0;
  return report;
}

}  // namespace gsynth
