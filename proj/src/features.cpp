#include "zerobas/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "zerobas/fft.hpp"

namespace zerobas {

void StftConfig::validate() const {
  if (fft_size < 2 || (fft_size & (fft_size - 1)) != 0)
    throw InvalidInput("fft_size must be a power of two >= 2");
  if (hop == 0 || hop > fft_size) throw InvalidInput("hop must satisfy 0 < hop <= fft_size");
}

std::size_t StftConfig::num_frames(std::size_t length) const {
  if (padding == Padding::kReflect) return (length + hop - 1) / hop;
  if (length < fft_size) return 0;
  return 1 + (length - fft_size) / hop;
}

std::vector<double> hann_window(std::size_t size) {
  std::vector<double> w(size);
  for (std::size_t n = 0; n < size; ++n)
    w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) /
                                static_cast<double>(size));
  return w;
}

std::size_t reflect_index(std::ptrdiff_t index, std::size_t length) {
  if (length == 1) return 0;
  const auto period = static_cast<std::ptrdiff_t>(2 * (length - 1));
  std::ptrdiff_t m = index % period;
  if (m < 0) m += period;
  if (m >= static_cast<std::ptrdiff_t>(length)) m = period - m;
  return static_cast<std::size_t>(m);
}

Spectrogram::Spectrogram(std::size_t frames, StftConfig config, int sample_rate)
    : frames_(frames), config_(config), sample_rate_(sample_rate),
      data_(frames * config.bins()) {}

std::vector<double> Spectrogram::magnitude() const {
  std::vector<double> out(data_.size());
  for (std::size_t i = 0; i < data_.size(); ++i) out[i] = std::abs(data_[i]);
  return out;
}

Spectrogram stft(const Waveform& mono, const StftConfig& cfg) {
  if (mono.channels() != 1) throw InvalidInput("stft expects a mono waveform");
  return stft(mono.samples(), mono.sample_rate(), cfg);
}

Spectrogram stft(std::span<const double> x, int sample_rate, const StftConfig& cfg) {
  cfg.validate();
  if (x.empty()) throw InvalidInput("stft input is empty");
  const std::size_t frames = cfg.num_frames(x.size());
  if (frames == 0) throw InvalidInput("stft input shorter than one frame");

  Spectrogram spec(frames, cfg, sample_rate);
  const Fft& fft = Fft::of_size(cfg.fft_size);
  const auto window = hann_window(cfg.fft_size);
  const auto n = cfg.fft_size;
  const bool reflect = cfg.padding == Padding::kReflect;
  const auto nframes = static_cast<std::ptrdiff_t>(frames);

#pragma omp parallel
  {
    std::vector<double> buf(n);
#pragma omp for schedule(static)
    for (std::ptrdiff_t f = 0; f < nframes; ++f) {
      const std::ptrdiff_t start =
          f * static_cast<std::ptrdiff_t>(cfg.hop) - (reflect ? static_cast<std::ptrdiff_t>(n / 2) : 0);
      for (std::size_t j = 0; j < n; ++j) {
        const std::ptrdiff_t i = start + static_cast<std::ptrdiff_t>(j);
        buf[j] = x[reflect ? reflect_index(i, x.size()) : static_cast<std::size_t>(i)] * window[j];
      }
      fft.forward_real(buf, spec.frame(f));
    }
  }
  return spec;
}

void MelConfig::validate(int sample_rate) const {
  if (mel_bins == 0) throw InvalidInput("mel_bins must be positive");
  const double hi = resolved_f_max(sample_rate);
  if (!(f_min >= 0.0) || !(f_min < hi) || hi > sample_rate / 2.0)
    throw InvalidInput("mel range must satisfy 0 <= f_min < f_max <= sample_rate/2");
  if (!(floor > 0.0)) throw InvalidInput("mel floor must be positive");
  if (!(power > 0.0)) throw InvalidInput("mel power must be positive");
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

std::vector<double> mel_filterbank(const MelConfig& mel, const StftConfig& cfg, int sample_rate) {
  cfg.validate();
  mel.validate(sample_rate);
  const std::size_t bins = cfg.bins();
  const double lo = hz_to_mel(mel.f_min);
  const double hi = hz_to_mel(mel.resolved_f_max(sample_rate));
  std::vector<double> edges(mel.mel_bins + 2);
  for (std::size_t i = 0; i < edges.size(); ++i)
    edges[i] = mel_to_hz(lo + (hi - lo) * static_cast<double>(i) / (mel.mel_bins + 1));

  const double bin_hz = static_cast<double>(sample_rate) / static_cast<double>(cfg.fft_size);
  std::vector<double> fb(mel.mel_bins * bins, 0.0);
  for (std::size_t m = 0; m < mel.mel_bins; ++m) {
    const double left = edges[m], centre = edges[m + 1], right = edges[m + 2];
    double* row = &fb[m * bins];
    double sum = 0.0;
    for (std::size_t b = 0; b < bins; ++b) {
      const double f = b * bin_hz;
      const double up = (f - left) / (centre - left);
      const double down = (right - f) / (right - centre);
      row[b] = std::max(0.0, std::min(up, down));
      sum += row[b];
    }
    if (sum > 0.0) {
      for (std::size_t b = 0; b < bins; ++b) row[b] /= sum;
    } else {
      // Filter narrower than the bin spacing: take the nearest bin.
      const auto nearest = static_cast<std::size_t>(std::lround(centre / bin_hz));
      row[std::min(nearest, bins - 1)] = 1.0;
    }
  }
  return fb;
}

MelMatrix log_mel(const Waveform& mono, const StftConfig& cfg, const MelConfig& mel) {
  return log_mel(stft(mono, cfg), mel);
}

MelMatrix log_mel(const Spectrogram& spec, const MelConfig& mel) {
  const auto fb = mel_filterbank(mel, spec.config(), spec.sample_rate());
  const std::size_t bins = spec.bins();
  MelMatrix out;
  out.frames = spec.frames();
  out.bins = mel.mel_bins;
  out.values.resize(out.frames * out.bins);
  const auto nframes = static_cast<std::ptrdiff_t>(out.frames);

#pragma omp parallel
  {
    std::vector<double> mag(bins);
#pragma omp for schedule(static)
    for (std::ptrdiff_t f = 0; f < nframes; ++f) {
      const auto row = spec.frame(f);
      for (std::size_t b = 0; b < bins; ++b) {
        const double a = std::abs(row[b]);
        mag[b] = mel.power == 1.0 ? a : std::pow(a, mel.power);
      }
      for (std::size_t m = 0; m < out.bins; ++m) {
        const double* w = &fb[m * bins];
        double acc = 0.0;
        for (std::size_t b = 0; b < bins; ++b) acc += w[b] * mag[b];
        out.values[f * out.bins + m] = std::log(acc + mel.floor);
      }
    }
  }
  return out;
}

}  // namespace zerobas
