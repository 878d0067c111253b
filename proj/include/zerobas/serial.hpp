// Single-threaded reference versions of the OpenMP kernels. Same arithmetic
// per element, plain loops; kept for equivalence tests and benchmarks.
#pragma once

#include <span>
#include <vector>

#include "zerobas/ampscale.hpp"
#include "zerobas/features.hpp"
#include "zerobas/geowarp.hpp"

namespace zerobas::serial {

Warpfield compute_warpfield(const SampleTrajectory& traj, double speed_of_sound);
std::vector<double> warp_samples(std::span<const double> source, std::span<const double> indices);
GainTrack compute_gains(const SampleTrajectory& traj);
StereoPair apply_gains(const StereoPair& pair, const GainTrack& gains);
Spectrogram stft(std::span<const double> samples, int sample_rate, const StftConfig& cfg);
Waveform resample_audio(const Waveform& w, int target_rate);

}  // namespace zerobas::serial
