#pragma once

// Auxiliary thermal baths. A bath at occupation nbar coupled at rate gamma to
// mode j contributes two parasitic channels:
//   raising   sqrt(gamma * nbar)       a_j^*
//   lowering  sqrt(gamma * (nbar + 1)) a_j
// with a_j = (q_j + i p_j) / sqrt(2).

#include <cstddef>
#include <optional>
#include <vector>

#include "gsynth/dynamics.hpp"

namespace gsynth {

enum class ChannelKind { Lowering, Raising };

struct NoiseChannel {
  std::size_t mode = 0;
  double gamma = 0.0;
  double nbar = 0.0;
  ChannelKind kind = ChannelKind::Lowering;

  double amplitude() const;
};

/// Coefficient row of the channel over x = (q, p).
ComplexMatrix channel_row(const NoiseChannel& ch, std::size_t modes);

/// Raising and lowering channels for one bath.
std::vector<NoiseChannel> thermal_bath(std::size_t mode, double gamma, double nbar);

/// Identical baths on every mode.
std::vector<NoiseChannel> thermal_baths(std::size_t modes, double gamma, double nbar);

/// Moment system of the realization with the channel rows appended to C.
MomentSystem augment(const Realization& r, const std::vector<NoiseChannel>& channels);

/// Same Hamiltonian, parasitic channels only.
MomentSystem thermal_only(const RealMatrix& g, const std::vector<NoiseChannel>& channels);

struct NoisyMetrics {
  RealMatrix covariance;
  double purity = 0.0;
  std::optional<double> log_negativity;   // two-mode systems only
};

struct RobustnessReport {
  NoisyMetrics with_design;
  NoisyMetrics without_design;
  double distance_to_target = 0.0;   // with design, max-norm
};

RobustnessReport robustness_report(const Realization& r,
                                   const std::vector<NoiseChannel>& channels,
                                   const CovarianceMatrix& target);

}  // namespace gsynth
