#include "zerobas/core.hpp"

#include <algorithm>
#include <sstream>

namespace zerobas {

const char* to_string(VocoderError::Kind kind) noexcept {
  switch (kind) {
    case VocoderError::Kind::kTimeout: return "timeout";
    case VocoderError::Kind::kConnectionRefused: return "connection-refused";
    case VocoderError::Kind::kMalformedResponse: return "malformed-response";
    case VocoderError::Kind::kLengthMismatch: return "length-mismatch";
    case VocoderError::Kind::kBackend: return "backend-error";
    case VocoderError::Kind::kTransport: return "transport";
    case VocoderError::Kind::kPayloadTooLarge: return "payload-too-large";
  }
  return "unknown";
}

Waveform::Waveform(std::vector<double> samples, int sample_rate, int channels)
    : samples_(std::move(samples)), sample_rate_(sample_rate), channels_(channels) {
  if (sample_rate_ <= 0) throw InvalidInput("sample rate must be positive");
  if (channels_ != 1 && channels_ != 2) throw InvalidInput("channel count must be 1 or 2");
  if (samples_.size() % channels_ != 0)
    throw InvalidInput("sample count not divisible by channel count");
  if (!std::all_of(samples_.begin(), samples_.end(), [](double v) { return std::isfinite(v); }))
    throw InvalidInput("waveform contains non-finite samples");
}

Waveform Waveform::channel(int index) const {
  if (index < 0 || index >= channels_) throw InvalidInput("channel index out of range");
  if (channels_ == 1) return *this;
  std::vector<double> out(frames());
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = samples_[n * channels_ + index];
  return Waveform(std::move(out), sample_rate_, 1);
}

Waveform Waveform::interleave(const Waveform& left, const Waveform& right) {
  if (left.channels() != 1 || right.channels() != 1)
    throw InvalidInput("interleave expects two mono waveforms");
  if (left.frames() != right.frames() || left.sample_rate() != right.sample_rate())
    throw InvalidInput("interleave: channel length or rate mismatch");
  std::vector<double> out(2 * left.frames());
  for (std::size_t n = 0; n < left.frames(); ++n) {
    out[2 * n] = left.samples_[n];
    out[2 * n + 1] = right.samples_[n];
  }
  return Waveform(std::move(out), left.sample_rate(), 2);
}

StereoPair::StereoPair(Waveform l, Waveform r) : left(std::move(l)), right(std::move(r)) {
  if (left.channels() != 1 || right.channels() != 1)
    throw InvalidInput("stereo pair channels must be mono");
  if (left.frames() != right.frames()) throw InvalidInput("stereo pair length mismatch");
  if (left.sample_rate() != right.sample_rate())
    throw InvalidInput("stereo pair sample rate mismatch");
}

StereoPair StereoPair::from_interleaved(const Waveform& stereo) {
  if (stereo.channels() != 2) throw InvalidInput("expected a 2-channel waveform");
  return StereoPair(stereo.channel(0), stereo.channel(1));
}

PoseTrack::PoseTrack(std::vector<PoseFrame> frames) : frames_(std::move(frames)) {
  if (frames_.empty()) throw InvalidInput("pose track has no frames");
  for (std::size_t i = 0; i < frames_.size(); ++i) {
    const auto& f = frames_[i];
    if (!std::isfinite(f.time_s) || !f.src.finite() || !f.ear_l.finite() || !f.ear_r.finite()) {
      std::ostringstream msg;
      msg << "pose track frame " << i << " has non-finite values";
      throw InvalidInput(msg.str());
    }
    if (i > 0 && !(f.time_s > frames_[i - 1].time_s)) {
      std::ostringstream msg;
      msg << "pose track timestamps not strictly increasing at frame " << i;
      throw InvalidInput(msg.str());
    }
  }
}

PoseTrack PoseTrack::constant(Vec3 src, Vec3 ear_l, Vec3 ear_r) {
  return PoseTrack({PoseFrame{0.0, src, ear_l, ear_r}});
}

void SampleTrajectory::validate() const {
  if (sample_rate <= 0) throw InvalidInput("trajectory sample rate must be positive");
  if (src.size() != ear_l.size() || src.size() != ear_r.size())
    throw InvalidInput("trajectory arrays differ in length");
}

SampleTrajectory SampleTrajectory::constant(Vec3 src, Vec3 ear_l, Vec3 ear_r, int sample_rate,
                                            std::size_t num_samples) {
  SampleTrajectory t;
  t.src.assign(num_samples, src);
  t.ear_l.assign(num_samples, ear_l);
  t.ear_r.assign(num_samples, ear_r);
  t.sample_rate = sample_rate;
  t.validate();
  return t;
}

SampleTrajectory interpolate_track(const PoseTrack& track, int sample_rate,
                                   std::size_t num_samples) {
  if (sample_rate <= 0) throw InvalidInput("sample rate must be positive");
  if (num_samples == 0) throw InvalidInput("num_samples must be positive");
  const auto frames = track.frames();

  SampleTrajectory out;
  out.sample_rate = sample_rate;
  out.src.resize(num_samples);
  out.ear_l.resize(num_samples);
  out.ear_r.resize(num_samples);

  std::size_t seg = 0;  // frames[seg] is the last frame with time <= t
  for (std::size_t n = 0; n < num_samples; ++n) {
    const double t = static_cast<double>(n) / sample_rate;
    const PoseFrame* a = nullptr;
    const PoseFrame* b = nullptr;
    if (t <= frames.front().time_s) {
      a = &frames.front();
    } else if (t >= frames.back().time_s) {
      a = &frames.back();
    } else {
      while (frames[seg + 1].time_s <= t) ++seg;
      a = &frames[seg];
      b = &frames[seg + 1];
    }
    if (b == nullptr || t == a->time_s) {
      out.src[n] = a->src;
      out.ear_l[n] = a->ear_l;
      out.ear_r[n] = a->ear_r;
      continue;
    }
    const double w = (t - a->time_s) / (b->time_s - a->time_s);
    auto lerp = [w](Vec3 p, Vec3 q) { return p + w * (q - p); };
    out.src[n] = lerp(a->src, b->src);
    out.ear_l[n] = lerp(a->ear_l, b->ear_l);
    out.ear_r[n] = lerp(a->ear_r, b->ear_r);
  }
  return out;
}

VocoderSelector VocoderSelector::parse(const std::string& text) {
  VocoderSelector sel;
  if (text == "identity") {
    sel.kind = Kind::kIdentity;
  } else if (text == "spectral-gate" || text == "spectral_gate") {
    sel.kind = Kind::kSpectralGate;
  } else if (text.rfind("external:", 0) == 0 && text.size() > 9) {
    sel.kind = Kind::kExternal;
    sel.endpoint = text.substr(9);
  } else {
    throw InvalidInput("unknown vocoder '" + text +
                       "' (expected identity, spectral-gate or external:<host>:<port>)");
  }
  return sel;
}

std::string VocoderSelector::to_string() const {
  switch (kind) {
    case Kind::kIdentity: return "identity";
    case Kind::kSpectralGate: return "spectral-gate";
    case Kind::kExternal: return "external:" + endpoint;
  }
  return {};
}

void PipelineConfig::validate() const {
  if (!(speed_of_sound > 0.0) || !std::isfinite(speed_of_sound))
    throw InvalidInput("speed of sound must be positive");
}

}  // namespace zerobas
