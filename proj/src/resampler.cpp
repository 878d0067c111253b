#include "resampler.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace zerobas::detail {
namespace {

constexpr double kRolloff = 0.95;
constexpr double kZeroCrossings = 32.0;
constexpr double kKaiserBeta = 8.6;
constexpr std::uint64_t kMaxTabulatedPhases = 4096;

double bessel_i0(double x) {
  double sum = 1.0, term = 1.0;
  const double q = x * x / 4.0;
  for (int k = 1; k < 64; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum;
}

}  // namespace

Resampler::Resampler(int source_rate, int target_rate) {
  const auto g = std::gcd(source_rate, target_rate);
  up_ = static_cast<std::uint64_t>(target_rate / g);
  down_ = static_cast<std::uint64_t>(source_rate / g);
  cutoff_ = kRolloff * std::min(1.0, static_cast<double>(target_rate) / source_rate);
  half_taps_ = static_cast<std::ptrdiff_t>(std::ceil(kZeroCrossings / cutoff_));
  if (up_ <= kMaxTabulatedPhases) {
    const std::size_t width = 2 * static_cast<std::size_t>(half_taps_) + 1;
    table_.resize(up_ * width);
    for (std::uint64_t p = 0; p < up_; ++p) {
      const double frac = static_cast<double>(p) / static_cast<double>(up_);
      for (std::ptrdiff_t j = -half_taps_; j <= half_taps_; ++j)
        table_[p * width + static_cast<std::size_t>(j + half_taps_)] = tap(j - frac);
    }
  }
}

std::size_t Resampler::output_length(std::size_t input_length) const {
  return static_cast<std::size_t>((input_length * up_ + down_ / 2) / down_);
}

double Resampler::tap(double tau) const {
  const double limit = static_cast<double>(half_taps_);
  if (std::abs(tau) >= limit) return 0.0;
  const double r = tau / limit;
  const double window = bessel_i0(kKaiserBeta * std::sqrt(1.0 - r * r)) / bessel_i0(kKaiserBeta);
  const double arg = std::numbers::pi * cutoff_ * tau;
  const double sinc = arg == 0.0 ? 1.0 : std::sin(arg) / arg;
  return cutoff_ * sinc * window;
}

double Resampler::sample(std::span<const double> x, std::size_t n) const {
  // Output n sits at input time t = n * M / L = base + phase / L.
  const std::uint64_t pos = static_cast<std::uint64_t>(n) * down_;
  const auto base = static_cast<std::ptrdiff_t>(pos / up_);
  const std::uint64_t phase = pos % up_;
  const auto len = static_cast<std::ptrdiff_t>(x.size());
  const std::size_t width = 2 * static_cast<std::size_t>(half_taps_) + 1;
  const double frac = static_cast<double>(phase) / static_cast<double>(up_);

  double acc = 0.0;
  for (std::ptrdiff_t j = -half_taps_; j <= half_taps_; ++j) {
    const std::ptrdiff_t i = base + j;
    if (i < 0 || i >= len) continue;
    const double h = table_.empty() ? tap(j - frac)
                                    : table_[phase * width + static_cast<std::size_t>(j + half_taps_)];
    acc += h * x[i];
  }
  return acc;
}

}  // namespace zerobas::detail
