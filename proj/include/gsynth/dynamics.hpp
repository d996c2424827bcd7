#pragma once

// First and second moment dynamics of a linear quantum system:
//   d<x>/dt = A <x>,   dV/dt = A V + V A^T + D,
// with A = Sigma (G + Im(C^dag C)), D = B B^dag / 2, B = i Sigma [-C^dag, C^T].

#include <cstddef>
#include <vector>

#include "gsynth/gaussian.hpp"
#include "gsynth/synthesis.hpp"

namespace gsynth {

struct MomentSystem {
  RealMatrix A;          // drift (1/s)
  RealMatrix D;          // diffusion, symmetric PSD
  ComplexMatrix C_all;   // every coupling row, designed and parasitic

  std::size_t modes() const noexcept { return static_cast<std::size_t>(A.rows() / 2); }
};

MomentSystem build_moment_system(const RealMatrix& g, const ComplexMatrix& c);

bool is_hurwitz(const RealMatrix& a);

/// Unique stationary covariance. Throws NotHurwitz, or InvalidCovariance if
/// the solution violates the uncertainty relation.
CovarianceMatrix steady_state(const MomentSystem& ms);

struct Trajectory {
  std::vector<double> times;
  std::vector<RealVector> means;
  std::vector<RealMatrix> covariances;
};

struct EvolveOptions {
  /// Force the RK4 integrator even when A is Hurwitz.
  bool force_integrator = false;
};

/// Samples the moments at each requested time (non-negative, ascending).
/// Hurwitz drift uses V(t) = e^{At}(V0 - Vss)e^{A^T t} + Vss with the samples
/// distributed over OpenMP threads; otherwise V is integrated with RK4.
Trajectory evolve(const MomentSystem& ms, const CovarianceMatrix& v0,
                  const RealVector& mean0, const std::vector<double>& times,
                  const EvolveOptions& opts = {});

/// Fourth-order Runge-Kutta integration of the covariance equation, with
/// step at most 1e-3 / ||A||.
Trajectory integrate_rk4(const MomentSystem& ms, const RealMatrix& v0,
                         const RealVector& mean0, const std::vector<double>& times);

namespace serial {
/// Single-threaded reference for the closed-form branch of gsynth::evolve.
Trajectory evolve(const MomentSystem& ms, const CovarianceMatrix& v0,
                  const RealVector& mean0, const std::vector<double>& times);
}  // namespace serial

struct GenerationReport {
  bool hurwitz = false;
  double spectral_abscissa = 0.0;
  double lyapunov_residual = 0.0;
  double max_error = 0.0;   // ||V_ss - target||_max
  double purity = 0.0;
  double tolerance = 0.0;
  ConstraintReport constraints;
  RealMatrix steady;

  bool generated() const noexcept { return hurwitz && max_error <= tolerance; }
};

inline constexpr double kGenerationTol = 1e-8;

GenerationReport verify_generation(const Realization& r, const CovarianceMatrix& target,
                                   double tol = kGenerationTol,
                                   double structural_tol = kDefaultTol);

}  // namespace gsynth
