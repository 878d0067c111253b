#include "zerobas/geowarp.hpp"

#include <cstddef>
#include <sstream>

#include "kernels.hpp"

namespace zerobas {

void Warpfield::validate() const {
  if (sample_rate <= 0) throw InvalidInput("warpfield sample rate must be positive");
  if (left.size() != right.size()) throw InvalidInput("warpfield channels differ in length");
  for (std::size_t t = 0; t < left.size(); ++t) {
    for (double v : {left[t], right[t]}) {
      if (!std::isfinite(v) || v > static_cast<double>(t)) {
        std::ostringstream msg;
        msg << "warpfield index at t=" << t << " is non-finite or reads the future";
        throw InvalidInput(msg.str());
      }
    }
  }
}

Warpfield compute_warpfield(const SampleTrajectory& traj, double speed_of_sound) {
  traj.validate();
  if (!(speed_of_sound > 0.0) || !std::isfinite(speed_of_sound))
    throw InvalidInput("speed of sound must be positive");
  const auto n = static_cast<std::ptrdiff_t>(traj.size());
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    if (!traj.src[t].finite() || !traj.ear_l[t].finite() || !traj.ear_r[t].finite())
      throw InvalidInput("trajectory has non-finite positions");
  }

  Warpfield field;
  field.sample_rate = traj.sample_rate;
  field.left.resize(n);
  field.right.resize(n);
  const double samples_per_meter = traj.sample_rate / speed_of_sound;

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    field.left[t] = kernels::warp_index(t, samples_per_meter, traj.src[t], traj.ear_l[t]);
    field.right[t] = kernels::warp_index(t, samples_per_meter, traj.src[t], traj.ear_r[t]);
  }
  return field;
}

std::vector<double> warp_samples(std::span<const double> source,
                                 std::span<const double> indices) {
  const auto n = static_cast<std::ptrdiff_t>(indices.size());
  std::vector<double> out(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t t = 0; t < n; ++t) out[t] = kernels::gather_linear(source, indices[t]);
  return out;
}

Waveform apply_warp(const Waveform& mono, std::span<const double> indices) {
  if (mono.channels() != 1) throw InvalidInput("apply_warp expects a mono waveform");
  if (mono.frames() != indices.size())
    throw InvalidInput("apply_warp: waveform and warpfield lengths differ");
  for (double v : indices)
    if (!std::isfinite(v)) throw InvalidInput("apply_warp: non-finite warp index");
  return Waveform(warp_samples(mono.samples(), indices), mono.sample_rate(), 1);
}

StereoPair apply_warp(const Waveform& mono, const Warpfield& field) {
  if (field.left.size() != field.right.size())
    throw InvalidInput("warpfield channels differ in length");
  return StereoPair(apply_warp(mono, field.left), apply_warp(mono, field.right));
}

StereoPair geometric_time_warp(const Waveform& mono, const SampleTrajectory& traj,
                               double speed_of_sound) {
  if (traj.size() != mono.frames())
    throw InvalidInput("trajectory length differs from waveform length");
  return apply_warp(mono, compute_warpfield(traj, speed_of_sound));
}

}  // namespace zerobas
