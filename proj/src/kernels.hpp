// Per-element kernels shared by the OpenMP loops and their serial references.
#pragma once

#include <cmath>
#include <cstddef>
#include <span>

#include "zerobas/core.hpp"

namespace zerobas::kernels {

inline double warp_index(std::size_t t, double samples_per_meter, Vec3 src, Vec3 ear) {
  return static_cast<double>(t) - samples_per_meter * distance(src, ear);
}

inline double gather_linear(std::span<const double> x, double index) {
  const double base = std::floor(index);
  const double frac = index - base;
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  const auto i0 = static_cast<std::ptrdiff_t>(base);
  auto at = [&](std::ptrdiff_t i) { return (i >= 0 && i < n) ? x[i] : 0.0; };
  if (frac == 0.0) return at(i0);
  return (1.0 - frac) * at(i0) + frac * at(i0 + 1);
}

inline double far_side_gain(double d_self, double d_other) {
  const double ratio = d_other / d_self;
  return std::fmin(1.0, ratio * ratio);
}

}  // namespace zerobas::kernels
