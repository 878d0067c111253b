#include "zerobas/fft.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "zerobas/errors.hpp"

namespace zerobas {

Fft::Fft(std::size_t n) : n_(n) {
  if (n < 2 || (n & (n - 1)) != 0) throw InvalidInput("FFT size must be a power of two >= 2");
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  bit_reverse_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < bits; ++b)
      if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
    bit_reverse_[i] = r;
  }
  twiddles_.resize(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    twiddles_[k] = {std::cos(angle), std::sin(angle)};
  }
}

void Fft::transform(std::span<std::complex<double>> data, bool inverse) const {
  if (data.size() != n_) throw InvalidInput("FFT buffer size mismatch");
  for (std::size_t i = 0; i < n_; ++i)
    if (i < bit_reverse_[i]) std::swap(data[i], data[bit_reverse_[i]]);
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n_ / len;
    for (std::size_t start = 0; start < n_; start += len) {
      for (std::size_t j = 0; j < half; ++j) {
        auto w = twiddles_[j * stride];
        if (inverse) w = std::conj(w);
        const auto u = data[start + j];
        const auto v = data[start + j + half] * w;
        data[start + j] = u + v;
        data[start + j + half] = u - v;
      }
    }
  }
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n_);
    for (auto& v : data) v *= scale;
  }
}

void Fft::forward(std::span<std::complex<double>> data) const { transform(data, false); }
void Fft::inverse(std::span<std::complex<double>> data) const { transform(data, true); }

void Fft::forward_real(std::span<const double> in, std::span<std::complex<double>> out) const {
  if (in.size() != n_ || out.size() != n_ / 2 + 1) throw InvalidInput("real FFT size mismatch");
  std::vector<std::complex<double>> buf(in.begin(), in.end());
  transform(buf, false);
  std::copy(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(out.size()), out.begin());
}

void Fft::inverse_real(std::span<const std::complex<double>> in, std::span<double> out) const {
  if (in.size() != n_ / 2 + 1 || out.size() != n_) throw InvalidInput("real IFFT size mismatch");
  std::vector<std::complex<double>> buf(n_);
  for (std::size_t k = 0; k <= n_ / 2; ++k) buf[k] = in[k];
  for (std::size_t k = n_ / 2 + 1; k < n_; ++k) buf[k] = std::conj(in[n_ - k]);
  buf[0] = {in[0].real(), 0.0};
  buf[n_ / 2] = {in[n_ / 2].real(), 0.0};
  transform(buf, true);
  for (std::size_t i = 0; i < n_; ++i) out[i] = buf[i].real();
}

const Fft& Fft::of_size(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<Fft>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Fft>(n);
  return *slot;
}

}  // namespace zerobas
