// Objective metrics comparing synthesized binaural audio with ground truth.
#pragma once

#include <array>
#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "zerobas/core.hpp"
#include "zerobas/features.hpp"

namespace zerobas {

struct MetricConfig {
  /// Analysis for amplitude_l2 and phase_l2.
  StftConfig stft;
  /// FFT sizes for mrstft; hop is fft/4, Hann, reflect padding.
  std::vector<std::size_t> mrstft_ffts{512, 1024, 2048};
};

struct ChannelMetrics {
  double wave_l2 = 0.0;
  double amplitude_l2 = 0.0;
  double mrstft = 0.0;
};

struct MetricReport {
  std::string utterance;
  double wave_l2 = 0.0;
  double amplitude_l2 = 0.0;
  double phase_l2 = 0.0;
  double mrstft = 0.0;
  ChannelMetrics left;
  ChannelMetrics right;
};

/// Cells whose magnitude is below this in both signals are excluded from phase_l2.
inline constexpr double kSilentBinMagnitude = 1e-8;
/// Magnitude clamp before the log in the mrstft log-magnitude term.
inline constexpr double kLogMagnitudeClamp = 1e-7;

/// 1e3 * mean over channels and samples of (gt - syn)^2.
double wave_l2(const StereoPair& gt, const StereoPair& syn);
/// Mean over channels, frames and bins of (|STFT gt| - |STFT syn|)^2.
double amplitude_l2(const StereoPair& gt, const StereoPair& syn, const StftConfig& cfg = {});
/// Mean squared wrapped difference of the left-minus-right STFT phase.
double phase_l2(const StereoPair& gt, const StereoPair& syn, const StftConfig& cfg = {});
/// Multi-resolution STFT loss: spectral convergence + log-magnitude L1,
/// averaged over resolutions and channels.
double mrstft(const StereoPair& gt, const StereoPair& syn,
              std::span<const std::size_t> fft_sizes = std::array<std::size_t, 3>{512, 1024, 2048});

double wave_l2(const Waveform& gt, const Waveform& syn);
double amplitude_l2(const Waveform& gt, const Waveform& syn, const StftConfig& cfg = {});
/// || |X| - |Y| ||_F / || |X| ||_F, zero when both spectrograms vanish.
double spectral_convergence(const Waveform& gt, const Waveform& syn, const StftConfig& cfg);
/// mean | ln max(|X|, clamp) - ln max(|Y|, clamp) |
double log_magnitude_l1(const Waveform& gt, const Waveform& syn, const StftConfig& cfg);
double mrstft(const Waveform& gt, const Waveform& syn,
              std::span<const std::size_t> fft_sizes = std::array<std::size_t, 3>{512, 1024, 2048});

/// Maps an angle to (-pi, pi].
double wrap_phase(double angle);

MetricReport evaluate_pair(const StereoPair& gt, const StereoPair& syn,
                           const MetricConfig& cfg = {}, std::string utterance = {});
/// Arithmetic mean of every field; utterance set to "corpus".
MetricReport corpus_mean(std::span<const MetricReport> reports);

/// Lag (in samples) maximizing sum_n ref[n] * hyp[n + lag] over |lag| <= max_lag.
/// Positive means `hyp` lags `ref`.
std::ptrdiff_t estimate_lag(std::span<const double> ref, std::span<const double> hyp,
                            std::size_t max_lag);

/// Shifts `syn` by the lag estimated on channel sums, then trims both pairs
/// to their common length. Writes the applied lag when `lag_out` is set.
std::pair<StereoPair, StereoPair> align_pairs(const StereoPair& gt, const StereoPair& syn,
                                              std::size_t max_lag, std::ptrdiff_t* lag_out = nullptr);

/// Trims both pairs to the shorter length.
std::pair<StereoPair, StereoPair> trim_to_common(const StereoPair& gt, const StereoPair& syn);

/// One line: `utterance=<id> wave_l2=... amplitude_l2=... phase_l2=... mrstft=...`
void write_key_value(std::ostream& os, const MetricReport& report);

}  // namespace zerobas
