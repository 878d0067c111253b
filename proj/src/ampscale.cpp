#include "zerobas/ampscale.hpp"

#include <algorithm>
#include <cstddef>
#include <limits>
#include <sstream>

#include "kernels.hpp"

namespace zerobas {

GainTrack compute_gains(const SampleTrajectory& traj) {
  traj.validate();
  const auto n = static_cast<std::ptrdiff_t>(traj.size());
  GainTrack gains;
  gains.left.resize(n);
  gains.right.resize(n);

  std::ptrdiff_t first_bad = std::numeric_limits<std::ptrdiff_t>::max();
#pragma omp parallel for schedule(static) reduction(min : first_bad)
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    const double dl = distance(traj.src[t], traj.ear_l[t]);
    const double dr = distance(traj.src[t], traj.ear_r[t]);
    if (!(dl >= kMinEarDistance) || !(dr >= kMinEarDistance) || !std::isfinite(dl) ||
        !std::isfinite(dr)) {
      first_bad = std::min(first_bad, t);
      continue;
    }
    gains.left[t] = kernels::far_side_gain(dl, dr);
    gains.right[t] = kernels::far_side_gain(dr, dl);
  }
  if (first_bad != std::numeric_limits<std::ptrdiff_t>::max()) {
    std::ostringstream msg;
    msg << "ear coincides with the source at sample " << first_bad;
    throw DegenerateGeometry(msg.str());
  }
  return gains;
}

StereoPair apply_gains(const StereoPair& pair, const GainTrack& gains) {
  const auto n = static_cast<std::ptrdiff_t>(pair.frames());
  if (gains.left.size() != pair.frames() || gains.right.size() != pair.frames())
    throw InvalidInput("apply_gains: gain track and signal lengths differ");
  std::vector<double> l(n), r(n);
  const auto xl = pair.left.samples();
  const auto xr = pair.right.samples();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    l[t] = gains.left[t] * xl[t];
    r[t] = gains.right[t] * xr[t];
  }
  return StereoPair(Waveform(std::move(l), pair.sample_rate()),
                    Waveform(std::move(r), pair.sample_rate()));
}

}  // namespace zerobas
