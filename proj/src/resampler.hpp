// Polyphase Kaiser-windowed sinc interpolator shared by the parallel and
// serial resampling loops.
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace zerobas::detail {

class Resampler {
 public:
  Resampler(int source_rate, int target_rate);

  std::size_t output_length(std::size_t input_length) const;
  /// Output sample n of the resampled `x`; reads outside x are zero.
  double sample(std::span<const double> x, std::size_t n) const;

 private:
  double tap(double tau) const;

  std::uint64_t up_;    // L: target / gcd
  std::uint64_t down_;  // M: source / gcd
  double cutoff_;       // normalized to the input rate's Nyquist
  std::ptrdiff_t half_taps_;
  std::vector<double> table_;  // [phase][2 * half_taps_ + 1], empty when not tabulated
};

}  // namespace zerobas::detail
