// Audio files, resampling, trajectory and manifest CSVs, segment cutting.
//
// Trajectory CSV (UTF-8, '.' decimal point, rows sorted by time):
//   time_s,src_x,src_y,src_z,earl_x,earl_y,earl_z,earr_x,earr_y,earr_z
//
// Event manifest CSV, angles in degrees:
//   recording_id,onset_s,offset_s,azimuth_deg,elevation_deg,distance_m
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "zerobas/core.hpp"
#include "zerobas/spatial.hpp"

namespace zerobas {

enum class BitDepth { kPcm16 = 16, kPcm24 = 24, kFloat32 = 32 };

/// Reads 16/24-bit integer PCM or 32-bit float WAV. Integer samples map to
/// [-1, 1) by dividing by 2^(bits-1). Throws ParseError or IoError.
Waveform read_wav(const std::filesystem::path& path);
Waveform decode_wav(std::span<const std::uint8_t> bytes);

/// Integer depths round to nearest and saturate.
void write_wav(const std::filesystem::path& path, const Waveform& w,
               BitDepth depth = BitDepth::kFloat32);
std::vector<std::uint8_t> encode_wav(const Waveform& w, BitDepth depth = BitDepth::kFloat32);

BitDepth parse_bit_depth(int bits);

/// Kaiser-windowed sinc resampler; output length round(len * target / source).
Waveform resample_audio(const Waveform& w, int target_rate);

inline constexpr const char* kTrajectoryHeader =
    "time_s,src_x,src_y,src_z,earl_x,earl_y,earl_z,earr_x,earr_y,earr_z";
inline constexpr const char* kManifestHeader =
    "recording_id,onset_s,offset_s,azimuth_deg,elevation_deg,distance_m";

PoseTrack read_trajectory_csv(std::istream& in);
PoseTrack read_trajectory_csv(const std::filesystem::path& path);
void write_trajectory_csv(std::ostream& out, const PoseTrack& track);
void write_trajectory_csv(const std::filesystem::path& path, const PoseTrack& track);

struct SoundEvent {
  std::string recording_id;
  double onset_s = 0.0;
  double offset_s = 0.0;
  double azimuth = 0.0;    // radians
  double elevation = 0.0;  // radians
  double distance = 0.0;   // meters
  std::size_t line = 0;    // 1-based line in the manifest file, header is line 1
};

/// Throws ManifestError listing every offending line.
std::vector<SoundEvent> read_manifest(std::istream& in);
std::vector<SoundEvent> read_manifest(const std::filesystem::path& path);

struct Segment {
  Waveform audio;
  SphericalPosition position;
  SoundEvent event;
};

/// Cuts [round(onset*S), round(offset*S)) for every event of `recording_id`.
/// Throws ManifestError listing events that fall outside the recording.
std::vector<Segment> cut_segments(const Waveform& recording, std::span<const SoundEvent> events,
                                  const std::string& recording_id);

}  // namespace zerobas
