// Iterative radix-2 FFT for power-of-two sizes.
#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace zerobas {

class Fft {
 public:
  /// Throws InvalidInput unless n is a power of two >= 2.
  explicit Fft(std::size_t n);

  std::size_t size() const { return n_; }

  /// In-place forward transform, X[k] = sum_n x[n] e^{-2 pi i k n / N}.
  void forward(std::span<std::complex<double>> data) const;
  /// In-place inverse transform including the 1/N scale.
  void inverse(std::span<std::complex<double>> data) const;

  /// Real input of length N to the N/2+1 non-negative-frequency bins.
  void forward_real(std::span<const double> in, std::span<std::complex<double>> out) const;
  /// Hermitian half spectrum (N/2+1 bins) back to N real samples.
  void inverse_real(std::span<const std::complex<double>> in, std::span<double> out) const;

  /// Shared immutable instance for size n; safe to call from any thread.
  static const Fft& of_size(std::size_t n);

 private:
  void transform(std::span<std::complex<double>> data, bool inverse) const;

  std::size_t n_;
  std::vector<std::size_t> bit_reverse_;
  std::vector<std::complex<double>> twiddles_;  // e^{-2 pi i k / N}, k < N/2
};

}  // namespace zerobas
