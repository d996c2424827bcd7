#include "gsynth/noise.hpp"

#include <cmath>
#include <string>

namespace gsynth {

double NoiseChannel::amplitude() const {
  if (!(gamma >= 0.0) || !(nbar >= 0.0) || !std::isfinite(gamma) || !std::isfinite(nbar))
    throw Error(ErrorKind::Dimension, "NoiseChannel: gamma and nbar must be finite and >= 0");
  return kind == ChannelKind::Lowering ? std::sqrt(gamma * (nbar + 1.0))
                                       : std::sqrt(gamma * nbar);
}

ComplexMatrix channel_row(const NoiseChannel& ch, std::size_t modes) {
  if (ch.mode >= modes)
    throw Error(ErrorKind::IndexOutOfRange,
                "channel_row: mode " + std::to_string(ch.mode) + " out of range");
  const double scale = ch.amplitude() / std::sqrt(2.0);
  const auto n = static_cast<Eigen::Index>(modes);
  const auto j = static_cast<Eigen::Index>(ch.mode);
  ComplexMatrix row = ComplexMatrix::Zero(1, 2 * n);
  row(0, j) = scale;
  row(0, n + j) = ch.kind == ChannelKind::Lowering ? cplx(0.0, scale) : cplx(0.0, -scale);
  return row;
}

std::vector<NoiseChannel> thermal_bath(std::size_t mode, double gamma, double nbar) {
  return {NoiseChannel{mode, gamma, nbar, ChannelKind::Raising},
          NoiseChannel{mode, gamma, nbar, ChannelKind::Lowering}};
}

std::vector<NoiseChannel> thermal_baths(std::size_t modes, double gamma, double nbar) {
  std::vector<NoiseChannel> out;
  for (std::size_t j = 0; j < modes; ++j) {
    auto bath = thermal_bath(j, gamma, nbar);
    out.insert(out.end(), bath.begin(), bath.end());
  }
  return out;
}

namespace {

ComplexMatrix stack_rows(const ComplexMatrix& designed,
                         const std::vector<NoiseChannel>& channels, std::size_t modes) {
  const auto n2 = static_cast<Eigen::Index>(2 * modes);
  ComplexMatrix out(designed.rows() + static_cast<Eigen::Index>(channels.size()), n2);
  if (designed.rows() > 0) out.topRows(designed.rows()) = designed;
  for (std::size_t k = 0; k < channels.size(); ++k)
    out.row(designed.rows() + static_cast<Eigen::Index>(k)) = channel_row(channels[k], modes);
  return out;
}

NoisyMetrics metrics(const MomentSystem& ms) {
  NoisyMetrics m;
  CovarianceMatrix v = steady_state(ms);
  m.covariance = v.matrix();
  m.purity = purity(v);
  if (v.modes() == 2) m.log_negativity = log_negativity(v);
  return m;
}

}  // namespace

MomentSystem augment(const Realization& r, const std::vector<NoiseChannel>& channels) {
  return build_moment_system(r.G, stack_rows(r.C, channels, r.modes()));
}

MomentSystem thermal_only(const RealMatrix& g, const std::vector<NoiseChannel>& channels) {
  const auto modes = static_cast<std::size_t>(g.rows() / 2);
  return build_moment_system(g, stack_rows(ComplexMatrix(0, g.rows()), channels, modes));
}

RobustnessReport robustness_report(const Realization& r,
                                   const std::vector<NoiseChannel>& channels,
                                   const CovarianceMatrix& target) {
  RobustnessReport report;
  report.with_design = metrics(augment(r, channels));
  report.without_design = metrics(thermal_only(r.G, channels));
  if (target.matrix().rows() != report.with_design.covariance.rows())
    throw Error(ErrorKind::Dimension, "robustness_report: target size mismatch");
  report.distance_to_target =
      max_norm(RealMatrix(report.with_design.covariance - target.matrix()));
  return report;
}

}  // namespace gsynth
