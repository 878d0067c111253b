#include "zerobas/metrics.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <numeric>

#include "zerobas/fft.hpp"

namespace zerobas {
namespace {

void require_same_shape(const Waveform& a, const Waveform& b) {
  if (a.channels() != 1 || b.channels() != 1) throw InvalidInput("metric expects mono channels");
  if (a.frames() != b.frames()) throw InvalidInput("metric inputs differ in length");
  if (a.sample_rate() != b.sample_rate()) throw InvalidInput("metric inputs differ in sample rate");
}

void require_same_shape(const StereoPair& a, const StereoPair& b) {
  require_same_shape(a.left, b.left);
  require_same_shape(a.right, b.right);
}

/// Sums f(frame) over frames in parallel, then adds the partials in order.
template <typename PerFrame>
double sum_frames(std::size_t frames, PerFrame per_frame) {
  std::vector<double> partial(frames);
  const auto n = static_cast<std::ptrdiff_t>(frames);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t f = 0; f < n; ++f) partial[f] = per_frame(static_cast<std::size_t>(f));
  return std::accumulate(partial.begin(), partial.end(), 0.0);
}

}  // namespace

double wrap_phase(double angle) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double w = std::remainder(angle, kTwoPi);  // [-pi, pi]
  if (w <= -std::numbers::pi) w += kTwoPi;
  return w;
}

double wave_l2(const Waveform& gt, const Waveform& syn) {
  require_same_shape(gt, syn);
  if (gt.frames() == 0) return 0.0;
  const auto a = gt.samples();
  const auto b = syn.samples();
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return 1e3 * acc / static_cast<double>(a.size());
}

double wave_l2(const StereoPair& gt, const StereoPair& syn) {
  require_same_shape(gt, syn);
  return 0.5 * (wave_l2(gt.left, syn.left) + wave_l2(gt.right, syn.right));
}

double amplitude_l2(const Waveform& gt, const Waveform& syn, const StftConfig& cfg) {
  require_same_shape(gt, syn);
  const Spectrogram x = stft(gt, cfg);
  const Spectrogram y = stft(syn, cfg);
  const std::size_t bins = x.bins();
  const double total = sum_frames(x.frames(), [&](std::size_t f) {
    double acc = 0.0;
    for (std::size_t b = 0; b < bins; ++b) {
      const double d = std::abs(x.at(f, b)) - std::abs(y.at(f, b));
      acc += d * d;
    }
    return acc;
  });
  return total / static_cast<double>(x.frames() * bins);
}

double amplitude_l2(const StereoPair& gt, const StereoPair& syn, const StftConfig& cfg) {
  require_same_shape(gt, syn);
  return 0.5 * (amplitude_l2(gt.left, syn.left, cfg) + amplitude_l2(gt.right, syn.right, cfg));
}

double phase_l2(const StereoPair& gt, const StereoPair& syn, const StftConfig& cfg) {
  require_same_shape(gt, syn);
  const Spectrogram gl = stft(gt.left, cfg), gr = stft(gt.right, cfg);
  const Spectrogram sl = stft(syn.left, cfg), sr = stft(syn.right, cfg);
  const std::size_t frames = gl.frames();
  const std::size_t bins = gl.bins();

  std::vector<double> sums(frames);
  std::vector<std::size_t> counts(frames);
  const auto n = static_cast<std::ptrdiff_t>(frames);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t f = 0; f < n; ++f) {
    double acc = 0.0;
    std::size_t count = 0;
    for (std::size_t b = 0; b < bins; ++b) {
      const auto a_l = gl.at(f, b), a_r = gr.at(f, b);
      const auto b_l = sl.at(f, b), b_r = sr.at(f, b);
      const bool gt_silent = std::min(std::abs(a_l), std::abs(a_r)) < kSilentBinMagnitude;
      const bool syn_silent = std::min(std::abs(b_l), std::abs(b_r)) < kSilentBinMagnitude;
      if (gt_silent && syn_silent) continue;
      const double d_gt = wrap_phase(std::arg(a_l) - std::arg(a_r));
      const double d_syn = wrap_phase(std::arg(b_l) - std::arg(b_r));
      const double e = wrap_phase(d_gt - d_syn);
      acc += e * e;
      ++count;
    }
    sums[f] = acc;
    counts[f] = count;
  }
  const double total = std::accumulate(sums.begin(), sums.end(), 0.0);
  const std::size_t cells = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  return cells == 0 ? 0.0 : total / static_cast<double>(cells);
}

double spectral_convergence(const Waveform& gt, const Waveform& syn, const StftConfig& cfg) {
  require_same_shape(gt, syn);
  const Spectrogram x = stft(gt, cfg);
  const Spectrogram y = stft(syn, cfg);
  const std::size_t bins = x.bins();
  std::vector<double> diff(x.frames()), ref(x.frames());
  const auto n = static_cast<std::ptrdiff_t>(x.frames());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t f = 0; f < n; ++f) {
    double d_acc = 0.0, r_acc = 0.0;
    for (std::size_t b = 0; b < bins; ++b) {
      const double mx = std::abs(x.at(f, b));
      const double d = mx - std::abs(y.at(f, b));
      d_acc += d * d;
      r_acc += mx * mx;
    }
    diff[f] = d_acc;
    ref[f] = r_acc;
  }
  const double num = std::sqrt(std::accumulate(diff.begin(), diff.end(), 0.0));
  const double den = std::sqrt(std::accumulate(ref.begin(), ref.end(), 0.0));
  if (num == 0.0) return 0.0;
  return num / std::max(den, 1e-12);
}

double log_magnitude_l1(const Waveform& gt, const Waveform& syn, const StftConfig& cfg) {
  require_same_shape(gt, syn);
  const Spectrogram x = stft(gt, cfg);
  const Spectrogram y = stft(syn, cfg);
  const std::size_t bins = x.bins();
  const double total = sum_frames(x.frames(), [&](std::size_t f) {
    double acc = 0.0;
    for (std::size_t b = 0; b < bins; ++b) {
      const double lx = std::log(std::max(std::abs(x.at(f, b)), kLogMagnitudeClamp));
      const double ly = std::log(std::max(std::abs(y.at(f, b)), kLogMagnitudeClamp));
      acc += std::abs(lx - ly);
    }
    return acc;
  });
  return total / static_cast<double>(x.frames() * bins);
}

double mrstft(const Waveform& gt, const Waveform& syn, std::span<const std::size_t> fft_sizes) {
  require_same_shape(gt, syn);
  if (fft_sizes.empty()) throw InvalidInput("mrstft needs at least one resolution");
  double acc = 0.0;
  for (std::size_t fft : fft_sizes) {
    const StftConfig cfg{fft, fft / 4, Padding::kReflect};
    acc += spectral_convergence(gt, syn, cfg) + log_magnitude_l1(gt, syn, cfg);
  }
  return acc / static_cast<double>(fft_sizes.size());
}

double mrstft(const StereoPair& gt, const StereoPair& syn, std::span<const std::size_t> fft_sizes) {
  require_same_shape(gt, syn);
  return 0.5 * (mrstft(gt.left, syn.left, fft_sizes) + mrstft(gt.right, syn.right, fft_sizes));
}

MetricReport evaluate_pair(const StereoPair& gt, const StereoPair& syn, const MetricConfig& cfg,
                           std::string utterance) {
  require_same_shape(gt, syn);
  MetricReport r;
  r.utterance = std::move(utterance);
  r.left = {wave_l2(gt.left, syn.left), amplitude_l2(gt.left, syn.left, cfg.stft),
            mrstft(gt.left, syn.left, cfg.mrstft_ffts)};
  r.right = {wave_l2(gt.right, syn.right), amplitude_l2(gt.right, syn.right, cfg.stft),
             mrstft(gt.right, syn.right, cfg.mrstft_ffts)};
  r.wave_l2 = 0.5 * (r.left.wave_l2 + r.right.wave_l2);
  r.amplitude_l2 = 0.5 * (r.left.amplitude_l2 + r.right.amplitude_l2);
  r.mrstft = 0.5 * (r.left.mrstft + r.right.mrstft);
  r.phase_l2 = phase_l2(gt, syn, cfg.stft);
  return r;
}

MetricReport corpus_mean(std::span<const MetricReport> reports) {
  MetricReport m;
  m.utterance = "corpus";
  if (reports.empty()) return m;
  const double n = static_cast<double>(reports.size());
  auto mean = [&](auto field) {
    double acc = 0.0;
    for (const auto& r : reports) acc += field(r);
    return acc / n;
  };
  m.wave_l2 = mean([](const MetricReport& r) { return r.wave_l2; });
  m.amplitude_l2 = mean([](const MetricReport& r) { return r.amplitude_l2; });
  m.phase_l2 = mean([](const MetricReport& r) { return r.phase_l2; });
  m.mrstft = mean([](const MetricReport& r) { return r.mrstft; });
  m.left.wave_l2 = mean([](const MetricReport& r) { return r.left.wave_l2; });
  m.left.amplitude_l2 = mean([](const MetricReport& r) { return r.left.amplitude_l2; });
  m.left.mrstft = mean([](const MetricReport& r) { return r.left.mrstft; });
  m.right.wave_l2 = mean([](const MetricReport& r) { return r.right.wave_l2; });
  m.right.amplitude_l2 = mean([](const MetricReport& r) { return r.right.amplitude_l2; });
  m.right.mrstft = mean([](const MetricReport& r) { return r.right.mrstft; });
  return m;
}

void write_key_value(std::ostream& os, const MetricReport& r) {
  const auto flags = os.flags();
  const auto precision = os.precision();
  os << std::setprecision(9) << "utterance=" << r.utterance << " wave_l2=" << r.wave_l2
     << " amplitude_l2=" << r.amplitude_l2 << " phase_l2=" << r.phase_l2
     << " mrstft=" << r.mrstft << '\n';
  os.flags(flags);
  os.precision(precision);
}

}  // namespace zerobas

namespace zerobas {
namespace {

std::vector<double> channel_sum(const StereoPair& p) {
  std::vector<double> out(p.frames());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = p.left.samples()[i] + p.right.samples()[i];
  return out;
}

Waveform slice(const Waveform& w, std::size_t begin, std::size_t count) {
  const auto s = w.samples().subspan(begin, count);
  return Waveform(std::vector<double>(s.begin(), s.end()), w.sample_rate(), 1);
}

}  // namespace

std::ptrdiff_t estimate_lag(std::span<const double> ref, std::span<const double> hyp,
                            std::size_t max_lag) {
  if (ref.empty() || hyp.empty()) return 0;
  std::size_t n = 2;
  while (n < ref.size() + hyp.size()) n <<= 1;
  const Fft& fft = Fft::of_size(n);
  std::vector<std::complex<double>> a(n), b(n);
  std::copy(ref.begin(), ref.end(), a.begin());
  std::copy(hyp.begin(), hyp.end(), b.begin());
  fft.forward(a);
  fft.forward(b);
  for (std::size_t i = 0; i < n; ++i) a[i] = std::conj(a[i]) * b[i];
  fft.inverse(a);

  const auto limit = static_cast<std::ptrdiff_t>(
      std::min<std::size_t>(max_lag, std::max(ref.size(), hyp.size()) - 1));
  std::ptrdiff_t best = 0;
  double best_value = a[0].real();
  for (std::ptrdiff_t lag = -limit; lag <= limit; ++lag) {
    const double v = a[static_cast<std::size_t>((lag + static_cast<std::ptrdiff_t>(n)) %
                                                static_cast<std::ptrdiff_t>(n))]
                         .real();
    if (v > best_value + 1e-12 * std::abs(best_value)) {
      best_value = v;
      best = lag;
    }
  }
  return best;
}

std::pair<StereoPair, StereoPair> trim_to_common(const StereoPair& gt, const StereoPair& syn) {
  const std::size_t n = std::min(gt.frames(), syn.frames());
  return {StereoPair(slice(gt.left, 0, n), slice(gt.right, 0, n)),
          StereoPair(slice(syn.left, 0, n), slice(syn.right, 0, n))};
}

std::pair<StereoPair, StereoPair> align_pairs(const StereoPair& gt, const StereoPair& syn,
                                              std::size_t max_lag, std::ptrdiff_t* lag_out) {
  const auto ref_sum = channel_sum(gt);
  const auto hyp_sum = channel_sum(syn);
  const std::ptrdiff_t lag = estimate_lag(ref_sum, hyp_sum, max_lag);
  if (lag_out != nullptr) *lag_out = lag;
  // lag > 0: drop the hypothesis' leading samples; lag < 0: drop the reference's.
  const std::size_t gt_skip = lag < 0 ? static_cast<std::size_t>(-lag) : 0;
  const std::size_t syn_skip = lag > 0 ? static_cast<std::size_t>(lag) : 0;
  const std::size_t gt_left = gt.frames() > gt_skip ? gt.frames() - gt_skip : 0;
  const std::size_t syn_left = syn.frames() > syn_skip ? syn.frames() - syn_skip : 0;
  const std::size_t n = std::min(gt_left, syn_left);
  if (n == 0) throw InvalidInput("alignment leaves no overlapping samples");
  return {StereoPair(slice(gt.left, gt_skip, n), slice(gt.right, gt_skip, n)),
          StereoPair(slice(syn.left, syn_skip, n), slice(syn.right, syn_skip, n))};
}

}  // namespace zerobas
