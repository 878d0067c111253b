// Inverse-square amplitude scaling of the channel farther from the source.
#pragma once

#include <vector>

#include "zerobas/core.hpp"

namespace zerobas {

/// Ear distances below this are rejected; the gain ratio is unbounded there.
inline constexpr double kMinEarDistance = 1e-6;

/// Per-sample gains. At every sample the nearer ear has gain 1.
struct GainTrack {
  std::vector<double> left;
  std::vector<double> right;

  std::size_t size() const { return left.size(); }
};

/// gain_l = min(1, (D_r / D_l)^2), gain_r = min(1, (D_l / D_r)^2).
/// Throws DegenerateGeometry when an ear is within kMinEarDistance of the source.
GainTrack compute_gains(const SampleTrajectory& traj);

StereoPair apply_gains(const StereoPair& pair, const GainTrack& gains);

}  // namespace zerobas
