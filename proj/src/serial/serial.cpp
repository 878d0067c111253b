#include "zerobas/serial.hpp"

#include "../kernels.hpp"
#include "../resampler.hpp"
#include "zerobas/fft.hpp"

namespace zerobas::serial {

Warpfield compute_warpfield(const SampleTrajectory& traj, double speed_of_sound) {
  traj.validate();
  if (!(speed_of_sound > 0.0)) throw InvalidInput("speed of sound must be positive");
  Warpfield field;
  field.sample_rate = traj.sample_rate;
  field.left.resize(traj.size());
  field.right.resize(traj.size());
  const double samples_per_meter = traj.sample_rate / speed_of_sound;
  for (std::size_t t = 0; t < traj.size(); ++t) {
    field.left[t] = kernels::warp_index(t, samples_per_meter, traj.src[t], traj.ear_l[t]);
    field.right[t] = kernels::warp_index(t, samples_per_meter, traj.src[t], traj.ear_r[t]);
  }
  return field;
}

std::vector<double> warp_samples(std::span<const double> source, std::span<const double> indices) {
  std::vector<double> out(indices.size());
  for (std::size_t t = 0; t < indices.size(); ++t) out[t] = kernels::gather_linear(source, indices[t]);
  return out;
}

GainTrack compute_gains(const SampleTrajectory& traj) {
  traj.validate();
  GainTrack gains;
  gains.left.resize(traj.size());
  gains.right.resize(traj.size());
  for (std::size_t t = 0; t < traj.size(); ++t) {
    const double dl = distance(traj.src[t], traj.ear_l[t]);
    const double dr = distance(traj.src[t], traj.ear_r[t]);
    if (!(dl >= kMinEarDistance) || !(dr >= kMinEarDistance))
      throw DegenerateGeometry("ear coincides with the source");
    gains.left[t] = kernels::far_side_gain(dl, dr);
    gains.right[t] = kernels::far_side_gain(dr, dl);
  }
  return gains;
}

StereoPair apply_gains(const StereoPair& pair, const GainTrack& gains) {
  if (gains.left.size() != pair.frames() || gains.right.size() != pair.frames())
    throw InvalidInput("apply_gains: gain track and signal lengths differ");
  std::vector<double> l(pair.frames()), r(pair.frames());
  for (std::size_t t = 0; t < l.size(); ++t) {
    l[t] = gains.left[t] * pair.left.samples()[t];
    r[t] = gains.right[t] * pair.right.samples()[t];
  }
  return StereoPair(Waveform(std::move(l), pair.sample_rate()),
                    Waveform(std::move(r), pair.sample_rate()));
}

Spectrogram stft(std::span<const double> x, int sample_rate, const StftConfig& cfg) {
  cfg.validate();
  if (x.empty()) throw InvalidInput("stft input is empty");
  const std::size_t frames = cfg.num_frames(x.size());
  if (frames == 0) throw InvalidInput("stft input shorter than one frame");
  Spectrogram spec(frames, cfg, sample_rate);
  const Fft& fft = Fft::of_size(cfg.fft_size);
  const auto window = hann_window(cfg.fft_size);
  const bool reflect = cfg.padding == Padding::kReflect;
  std::vector<double> buf(cfg.fft_size);
  for (std::size_t f = 0; f < frames; ++f) {
    const std::ptrdiff_t start = static_cast<std::ptrdiff_t>(f * cfg.hop) -
                                 (reflect ? static_cast<std::ptrdiff_t>(cfg.fft_size / 2) : 0);
    for (std::size_t j = 0; j < cfg.fft_size; ++j) {
      const std::ptrdiff_t i = start + static_cast<std::ptrdiff_t>(j);
      buf[j] = x[reflect ? reflect_index(i, x.size()) : static_cast<std::size_t>(i)] * window[j];
    }
    fft.forward_real(buf, spec.frame(f));
  }
  return spec;
}

Waveform resample_audio(const Waveform& w, int target_rate) {
  if (target_rate <= 0) throw InvalidInput("target sample rate must be positive");
  if (target_rate == w.sample_rate()) return w;
  const detail::Resampler rs(w.sample_rate(), target_rate);
  const int channels = w.channels();
  const std::size_t out_len = rs.output_length(w.frames());
  std::vector<double> out(out_len * channels);
  for (int c = 0; c < channels; ++c) {
    const Waveform mono = w.channel(c);
    for (std::size_t i = 0; i < out_len; ++i) out[i * channels + c] = rs.sample(mono.samples(), i);
  }
  return Waveform(std::move(out), target_rate, channels);
}

}  // namespace zerobas::serial
