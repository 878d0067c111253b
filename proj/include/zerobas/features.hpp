// STFT and log-mel analysis.
//
// Frames are centred at f * hop. With reflect padding the signal is mirrored
// (edge sample not repeated) by fft_size/2 on each side and there are
// ceil(len / hop) frames. With no padding frames start at f * hop and there
// are 1 + (len - fft_size) / hop of them.
//
// Log-mel values use the natural logarithm:
//   mel[f][m] = ln( sum_b W[m][b] * |X[f][b]|^power + floor )
// with triangular HTK-mel filters whose rows each sum to one.
#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "zerobas/core.hpp"

namespace zerobas {

enum class Padding { kReflect, kNone };

struct StftConfig {
  std::size_t fft_size = 1024;
  std::size_t hop = 256;
  Padding padding = Padding::kReflect;

  std::size_t bins() const { return fft_size / 2 + 1; }
  /// Throws InvalidInput unless 0 < hop <= fft_size and fft_size is a power of two.
  void validate() const;
  /// Number of frames produced for a signal of `length` samples.
  std::size_t num_frames(std::size_t length) const;
};

/// Periodic Hann window, w[n] = 0.5 - 0.5 cos(2 pi n / N).
std::vector<double> hann_window(std::size_t size);

/// Index into a length-`length` signal after whole-sample symmetric reflection.
std::size_t reflect_index(std::ptrdiff_t index, std::size_t length);

class Spectrogram {
 public:
  Spectrogram() = default;
  Spectrogram(std::size_t frames, StftConfig config, int sample_rate);

  std::size_t frames() const { return frames_; }
  std::size_t bins() const { return config_.bins(); }
  const StftConfig& config() const { return config_; }
  int sample_rate() const { return sample_rate_; }

  std::complex<double>& at(std::size_t frame, std::size_t bin) {
    return data_[frame * bins() + bin];
  }
  const std::complex<double>& at(std::size_t frame, std::size_t bin) const {
    return data_[frame * bins() + bin];
  }
  std::span<std::complex<double>> frame(std::size_t f) {
    return std::span(data_).subspan(f * bins(), bins());
  }
  std::span<const std::complex<double>> frame(std::size_t f) const {
    return std::span(data_).subspan(f * bins(), bins());
  }
  std::span<const std::complex<double>> data() const { return data_; }

  /// |X| in frame-major order.
  std::vector<double> magnitude() const;

 private:
  std::size_t frames_ = 0;
  StftConfig config_;
  int sample_rate_ = 0;
  std::vector<std::complex<double>> data_;
};

Spectrogram stft(const Waveform& mono, const StftConfig& cfg);
Spectrogram stft(std::span<const double> samples, int sample_rate, const StftConfig& cfg);

struct MelConfig {
  std::size_t mel_bins = 128;
  double f_min = 20.0;
  /// Upper edge in Hz; 0 means Nyquist.
  double f_max = 0.0;
  double floor = 1e-5;
  /// Exponent applied to |X| before the filterbank: 1 magnitude, 2 power.
  double power = 1.0;

  double resolved_f_max(int sample_rate) const {
    return f_max > 0.0 ? f_max : sample_rate / 2.0;
  }
  void validate(int sample_rate) const;
};

/// Frame-major log-mel matrix.
struct MelMatrix {
  std::size_t frames = 0;
  std::size_t bins = 0;
  std::vector<double> values;

  double at(std::size_t f, std::size_t m) const { return values[f * bins + m]; }
  friend bool operator==(const MelMatrix&, const MelMatrix&) = default;
};

double hz_to_mel(double hz);
double mel_to_hz(double mel);

/// Row-major [mel_bins x fft_size/2+1] triangular filterbank.
std::vector<double> mel_filterbank(const MelConfig& mel, const StftConfig& cfg, int sample_rate);

MelMatrix log_mel(const Waveform& mono, const StftConfig& cfg, const MelConfig& mel);
MelMatrix log_mel(const Spectrogram& spec, const MelConfig& mel);

}  // namespace zerobas
