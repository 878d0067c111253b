// Geometric time warping: per-ear propagation delay realized as a
// fractional-index gather with linear interpolation.
#pragma once

#include <span>
#include <vector>

#include "zerobas/core.hpp"

namespace zerobas {

/// Output-indexed source positions, in samples, for each ear.
///
/// `left[t]` is the (possibly fractional, possibly negative) index into the
/// mono source that output sample t reads from. Delays are non-negative, so
/// `left[t] <= t` and `right[t] <= t`.
struct Warpfield {
  std::vector<double> left;
  std::vector<double> right;
  int sample_rate = 0;

  std::size_t size() const { return left.size(); }
  void validate() const;
};

/// index[t] = t - (sample_rate / speed_of_sound) * |src[t] - ear[t]|
Warpfield compute_warpfield(const SampleTrajectory& traj, double speed_of_sound);

/// Gathers `source` at fractional `indices`; reads outside the source are zero.
std::vector<double> warp_samples(std::span<const double> source,
                                 std::span<const double> indices);

Waveform apply_warp(const Waveform& mono, std::span<const double> indices);
StereoPair apply_warp(const Waveform& mono, const Warpfield& field);

StereoPair geometric_time_warp(const Waveform& mono, const SampleTrajectory& traj,
                               double speed_of_sound);

}  // namespace zerobas
