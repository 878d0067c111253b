#include "zerobas/dataio.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "resampler.hpp"

namespace zerobas {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t le16(const std::uint8_t* p) { return static_cast<std::uint16_t>(p[0] | p[1] << 8); }
std::uint32_t le32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}
void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}
void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void put_tag(std::vector<std::uint8_t>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

[[noreturn]] void parse_fail(ParseError::Kind kind, const std::string& what) {
  throw ParseError(kind, "wav: " + what);
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

bool parse_double(const std::string& text, double& out) {
  if (text.empty()) return false;
  const char* first = text.data();
  const char* last = first + text.size();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

}  // namespace

Waveform decode_wav(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12) parse_fail(ParseError::Kind::kTruncated, "file shorter than RIFF header");
  if (std::memcmp(bytes.data(), "RIFF", 4) != 0 || std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    parse_fail(ParseError::Kind::kHeaderMismatch, "missing RIFF/WAVE signature");

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::uint32_t size = le32(chunk + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || body + size > bytes.size())
        parse_fail(ParseError::Kind::kTruncated, "fmt chunk truncated");
      format = le16(bytes.data() + body);
      channels = le16(bytes.data() + body + 2);
      rate = le32(bytes.data() + body + 4);
      bits = le16(bytes.data() + body + 14);
      if (format == kFormatExtensible) {
        if (size < 40) parse_fail(ParseError::Kind::kTruncated, "extensible fmt chunk truncated");
        format = le16(bytes.data() + body + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (!have_fmt) parse_fail(ParseError::Kind::kHeaderMismatch, "data chunk before fmt chunk");
      const bool pcm = format == kFormatPcm && (bits == 16 || bits == 24);
      const bool flt = format == kFormatFloat && bits == 32;
      if (!pcm && !flt)
        parse_fail(ParseError::Kind::kUnsupportedCodec,
                   "unsupported encoding (format " + std::to_string(format) + ", " +
                       std::to_string(bits) + " bits)");
      if (channels != 1 && channels != 2)
        parse_fail(ParseError::Kind::kUnsupportedCodec,
                   std::to_string(channels) + " channels not supported");
      if (rate == 0) parse_fail(ParseError::Kind::kHeaderMismatch, "zero sample rate");
      const std::size_t width = bits / 8;
      const std::size_t block = width * channels;
      if (size % block != 0)
        parse_fail(ParseError::Kind::kHeaderMismatch, "data size not a multiple of the frame size");
      if (body + size > bytes.size()) parse_fail(ParseError::Kind::kTruncated, "data chunk truncated");

      const std::size_t count = size / width;
      std::vector<double> samples(count);
      const std::uint8_t* p = bytes.data() + body;
      for (std::size_t i = 0; i < count; ++i, p += width) {
        if (flt) {
          samples[i] = static_cast<double>(std::bit_cast<float>(le32(p)));
        } else if (bits == 16) {
          samples[i] = static_cast<std::int16_t>(le16(p)) / 32768.0;
        } else {
          std::int32_t v = p[0] | p[1] << 8 | p[2] << 16;
          if (v & 0x800000) v -= 0x1000000;
          samples[i] = v / 8388608.0;
        }
      }
      try {
        return Waveform(std::move(samples), static_cast<int>(rate), channels);
      } catch (const InvalidInput& e) {
        parse_fail(ParseError::Kind::kUnsupportedCodec, e.what());
      }
    }
    pos = body + size + (size & 1);
  }
  parse_fail(have_fmt ? ParseError::Kind::kTruncated : ParseError::Kind::kHeaderMismatch,
             have_fmt ? "no data chunk" : "no fmt chunk");
}

Waveform read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return decode_wav(bytes);
  } catch (const ParseError& e) {
    throw ParseError(e.kind(), path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> encode_wav(const Waveform& w, BitDepth depth) {
  const auto bits = static_cast<std::uint16_t>(depth);
  const std::uint16_t width = bits / 8;
  const auto channels = static_cast<std::uint16_t>(w.channels());
  const auto data_size = static_cast<std::uint32_t>(w.samples().size() * width);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_size);
  put_tag(out, "RIFF");
  put32(out, 36 + data_size);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put32(out, 16);
  put16(out, depth == BitDepth::kFloat32 ? kFormatFloat : kFormatPcm);
  put16(out, channels);
  put32(out, static_cast<std::uint32_t>(w.sample_rate()));
  put32(out, static_cast<std::uint32_t>(w.sample_rate()) * channels * width);
  put16(out, static_cast<std::uint16_t>(channels * width));
  put16(out, bits);
  put_tag(out, "data");
  put32(out, data_size);
  for (double v : w.samples()) {
    switch (depth) {
      case BitDepth::kFloat32:
        put32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
        break;
      case BitDepth::kPcm16: {
        const double q = std::clamp(std::round(v * 32768.0), -32768.0, 32767.0);
        put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
        break;
      }
      case BitDepth::kPcm24: {
        const double q = std::clamp(std::round(v * 8388608.0), -8388608.0, 8388607.0);
        const auto u = static_cast<std::uint32_t>(static_cast<std::int32_t>(q));
        out.push_back(static_cast<std::uint8_t>(u));
        out.push_back(static_cast<std::uint8_t>(u >> 8));
        out.push_back(static_cast<std::uint8_t>(u >> 16));
        break;
      }
    }
  }
  return out;
}

void write_wav(const std::filesystem::path& path, const Waveform& w, BitDepth depth) {
  const auto bytes = encode_wav(w, depth);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

BitDepth parse_bit_depth(int bits) {
  switch (bits) {
    case 16: return BitDepth::kPcm16;
    case 24: return BitDepth::kPcm24;
    case 32: return BitDepth::kFloat32;
    default: throw InvalidInput("bit depth must be 16, 24 or 32");
  }
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
    const auto x = mono.samples();
    const auto n = static_cast<std::ptrdiff_t>(out_len);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i * channels + c] = rs.sample(x, i);
  }
  return Waveform(std::move(out), target_rate, channels);
}

PoseTrack read_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw ParseError(ParseError::Kind::kHeaderMismatch, "trajectory: empty file");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  if (trim(line) != kTrajectoryHeader)
    throw ParseError(ParseError::Kind::kHeaderMismatch,
                     "trajectory: header must be '" + std::string(kTrajectoryHeader) + "'");
  std::vector<PoseFrame> frames;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 10)
      throw ParseError(ParseError::Kind::kSyntax,
                       "trajectory line " + std::to_string(lineno) + ": expected 10 columns");
    double v[10];
    for (std::size_t i = 0; i < 10; ++i) {
      if (!parse_double(fields[i], v[i]))
        throw ParseError(ParseError::Kind::kSyntax, "trajectory line " + std::to_string(lineno) +
                                                        ": bad number '" + fields[i] + "'");
    }
    frames.push_back({v[0], {v[1], v[2], v[3]}, {v[4], v[5], v[6]}, {v[7], v[8], v[9]}});
  }
  return PoseTrack(std::move(frames));
}

PoseTrack read_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_trajectory_csv(in);
}

void write_trajectory_csv(std::ostream& out, const PoseTrack& track) {
  out << kTrajectoryHeader << '\n';
  out << std::setprecision(17);
  for (const auto& f : track.frames()) {
    out << f.time_s;
    for (const Vec3& p : {f.src, f.ear_l, f.ear_r}) out << ',' << p.x << ',' << p.y << ',' << p.z;
    out << '\n';
  }
}

void write_trajectory_csv(const std::filesystem::path& path, const PoseTrack& track) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  write_trajectory_csv(out, track);
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<SoundEvent> read_manifest(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ManifestError({1}, "manifest: empty file");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  if (trim(line) != kManifestHeader)
    throw ManifestError({1}, "manifest: header must be '" + std::string(kManifestHeader) + "'");

  constexpr double kDeg = std::numbers::pi / 180.0;
  std::vector<SoundEvent> events;
  std::vector<std::size_t> bad;
  std::ostringstream problems;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line);
    SoundEvent ev;
    ev.line = lineno;
    double az = 0, el = 0;
    std::string why;
    if (fields.size() != 6) {
      why = "expected 6 columns";
    } else if (fields[0].empty()) {
      why = "empty recording_id";
    } else if (!parse_double(fields[1], ev.onset_s) || !parse_double(fields[2], ev.offset_s) ||
               !parse_double(fields[3], az) || !parse_double(fields[4], el) ||
               !parse_double(fields[5], ev.distance)) {
      why = "non-numeric field";
    } else if (!(ev.onset_s >= 0.0 && ev.onset_s < ev.offset_s)) {
      why = "requires 0 <= onset < offset";
    } else if (!(ev.distance > 0.0)) {
      why = "distance must be positive";
    } else if (std::abs(el) > 90.0) {
      why = "elevation outside [-90, 90]";
    }
    if (!why.empty()) {
      bad.push_back(lineno);
      problems << " line " << lineno << ": " << why << ';';
      continue;
    }
    ev.recording_id = fields[0];
    ev.azimuth = az * kDeg;
    ev.elevation = el * kDeg;
    events.push_back(std::move(ev));
  }
  if (!bad.empty()) throw ManifestError(std::move(bad), "invalid manifest rows:" + problems.str());
  return events;
}

std::vector<SoundEvent> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_manifest(in);
}

std::vector<Segment> cut_segments(const Waveform& recording, std::span<const SoundEvent> events,
                                  const std::string& recording_id) {
  const double rate = recording.sample_rate();
  const std::size_t len = recording.frames();
  std::vector<std::size_t> bad;
  std::ostringstream problems;
  std::vector<Segment> out;
  for (const auto& ev : events) {
    if (ev.recording_id != recording_id) continue;
    const double begin_f = std::round(ev.onset_s * rate);
    const double end_f = std::round(ev.offset_s * rate);
    if (!(begin_f >= 0.0) || !(end_f <= static_cast<double>(len)) || !(begin_f < end_f)) {
      bad.push_back(ev.line);
      problems << " line " << ev.line << " [" << ev.onset_s << ", " << ev.offset_s << ") s";
      continue;
    }
    const auto begin = static_cast<std::size_t>(begin_f);
    const auto end = static_cast<std::size_t>(end_f);
    const int ch = recording.channels();
    const auto src = recording.samples();
    std::vector<double> samples(src.begin() + static_cast<std::ptrdiff_t>(begin * ch),
                                src.begin() + static_cast<std::ptrdiff_t>(end * ch));
    out.push_back({Waveform(std::move(samples), recording.sample_rate(), ch),
                   SphericalPosition(ev.azimuth, ev.elevation, ev.distance), ev});
  }
  if (!bad.empty())
    throw ManifestError(std::move(bad), "events outside recording '" + recording_id + "' (" +
                                            std::to_string(len / rate) + " s):" + problems.str());
  return out;
}

}  // namespace zerobas
