// Domain types shared by the warp, scaling, refinement and metric stages.
//
// Units: positions in meters, times in seconds, sample rates in Hz. Samples
// are stored as double; multi-channel audio is interleaved frame by frame
// (L0 R0 L1 R1 ...).
#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zerobas/errors.hpp"

namespace zerobas {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend constexpr Vec3 operator*(double s, Vec3 v) { return {s * v.x, s * v.y, s * v.z}; }
  friend constexpr bool operator==(Vec3, Vec3) = default;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

inline double distance(Vec3 a, Vec3 b) { return (a - b).norm(); }

/// Sampled audio, immutable after construction.
class Waveform {
 public:
  Waveform() = default;
  /// Throws InvalidInput on a non-positive rate, a channel count other than
  /// 1 or 2, a length not divisible by the channel count, or non-finite data.
  Waveform(std::vector<double> samples, int sample_rate, int channels = 1);

  std::span<const double> samples() const { return samples_; }
  int sample_rate() const { return sample_rate_; }
  int channels() const { return channels_; }
  /// Samples per channel.
  std::size_t frames() const { return channels_ == 0 ? 0 : samples_.size() / channels_; }
  bool empty() const { return samples_.empty(); }

  /// De-interleaves one channel into a mono waveform.
  Waveform channel(int index) const;

  static Waveform interleave(const Waveform& left, const Waveform& right);

  friend bool operator==(const Waveform&, const Waveform&) = default;

 private:
  std::vector<double> samples_;
  int sample_rate_ = 0;
  int channels_ = 0;
};

/// Two mono waveforms of equal length and rate.
struct StereoPair {
  Waveform left;
  Waveform right;

  StereoPair() = default;
  StereoPair(Waveform l, Waveform r);

  std::size_t frames() const { return left.frames(); }
  int sample_rate() const { return left.sample_rate(); }

  static StereoPair from_interleaved(const Waveform& stereo);
  Waveform to_interleaved() const { return Waveform::interleave(left, right); }

  friend bool operator==(const StereoPair&, const StereoPair&) = default;
};

struct PoseFrame {
  double time_s = 0.0;
  Vec3 src;
  Vec3 ear_l;
  Vec3 ear_r;
};

/// Source and ear positions at tracking frame rate.
class PoseTrack {
 public:
  /// Throws InvalidInput when empty, non-monotonic, or non-finite.
  explicit PoseTrack(std::vector<PoseFrame> frames);

  std::span<const PoseFrame> frames() const { return frames_; }
  std::size_t size() const { return frames_.size(); }

  static PoseTrack constant(Vec3 src, Vec3 ear_l, Vec3 ear_r);

 private:
  std::vector<PoseFrame> frames_;
};

/// Per-sample positions aligned with a waveform.
struct SampleTrajectory {
  std::vector<Vec3> src;
  std::vector<Vec3> ear_l;
  std::vector<Vec3> ear_r;
  int sample_rate = 0;

  std::size_t size() const { return src.size(); }
  /// Throws InvalidInput unless the three arrays agree in length and the rate is positive.
  void validate() const;

  static SampleTrajectory constant(Vec3 src, Vec3 ear_l, Vec3 ear_r, int sample_rate,
                                   std::size_t num_samples);
};

/// Linearly interpolates tracking frames onto the sample grid t = n / sample_rate,
/// clamping outside the tracked interval.
SampleTrajectory interpolate_track(const PoseTrack& track, int sample_rate,
                                   std::size_t num_samples);

struct VocoderSelector {
  enum class Kind { kIdentity, kSpectralGate, kExternal };
  Kind kind = Kind::kSpectralGate;
  std::string endpoint;  // host:port, only for kExternal

  /// Accepts "identity", "spectral-gate" (or "spectral_gate") and "external:<host>:<port>".
  static VocoderSelector parse(const std::string& text);
  std::string to_string() const;
};

struct PipelineConfig {
  bool enable_gtw = true;
  bool enable_as = true;
  bool swap_order = false;
  unsigned iterations = 3;
  unsigned noise_level = 1;
  double speed_of_sound = 343.0;
  VocoderSelector vocoder;

  void validate() const;
};

}  // namespace zerobas
