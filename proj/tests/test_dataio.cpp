#include <doctest.h>

#include <cstring>
#include <sstream>

#include "helpers.hpp"
#include "zerobas/dataio.hpp"
#include "zerobas/fft.hpp"

using namespace zerobas;
using testing::vec;

namespace {

void put(std::vector<std::uint8_t>& b, std::uint32_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

/// Canonical 44-byte-header WAV assembled by hand.
std::vector<std::uint8_t> wav_bytes(std::uint16_t format, std::uint16_t channels, std::uint32_t rate,
                                    std::uint16_t bits, const std::vector<std::uint8_t>& data) {
  std::vector<std::uint8_t> b;
  for (char c : std::string("RIFF")) b.push_back(c);
  put(b, 36 + static_cast<std::uint32_t>(data.size()), 4);
  for (char c : std::string("WAVEfmt ")) b.push_back(c);
  put(b, 16, 4);
  put(b, format, 2);
  put(b, channels, 2);
  put(b, rate, 4);
  put(b, rate * channels * bits / 8, 4);
  put(b, channels * bits / 8, 2);
  put(b, bits, 2);
  for (char c : std::string("data")) b.push_back(c);
  put(b, static_cast<std::uint32_t>(data.size()), 4);
  b.insert(b.end(), data.begin(), data.end());
  return b;
}

ParseError::Kind parse_kind(const std::vector<std::uint8_t>& bytes) {
  try {
    decode_wav(bytes);
  } catch (const ParseError& e) {
    return e.kind();
  }
  FAIL("expected ParseError");
  return ParseError::Kind::kSyntax;
}

std::size_t peak_bin(const std::vector<double>& x, std::size_t fft) {
  std::vector<std::complex<double>> spec(fft / 2 + 1);
  std::vector<double> frame(fft);
  for (std::size_t i = 0; i < fft; ++i) frame[i] = x[x.size() / 2 - fft / 2 + i] * oracle::hann(i, fft);
  Fft::of_size(fft).forward_real(frame, spec);
  std::size_t best = 0;
  for (std::size_t k = 1; k < spec.size(); ++k)
    if (std::abs(spec[k]) > std::abs(spec[best])) best = k;
  return best;
}

double rms(const std::vector<double>& v, std::size_t skip = 0) {
  double acc = 0.0;
  for (std::size_t i = skip; i + skip < v.size(); ++i) acc += v[i] * v[i];
  return std::sqrt(acc / (v.size() - 2 * skip));
}

}  // namespace

TEST_CASE("wav: float32 stereo round trip is bit-exact") {
  std::vector<double> x;
  for (double v : oracle::noise(2000, 1, 1.0)) x.push_back(static_cast<float>(v));
  const Waveform w(x, 44100, 2);
  testing::TempDir dir("wav");
  write_wav(dir / "a.wav", w, BitDepth::kFloat32);
  CHECK(read_wav(dir / "a.wav") == w);
  CHECK(decode_wav(encode_wav(w)) == w);
}

TEST_CASE("wav: every depth keeps shape and rate, integer depths quantize within one step") {
  const auto x = oracle::noise(3000, 2, 0.99);
  for (auto depth : {BitDepth::kPcm16, BitDepth::kPcm24, BitDepth::kFloat32}) {
    for (int ch : {1, 2}) {
      const Waveform w(x, 22050, ch);
      const auto back = decode_wav(encode_wav(w, depth));
      CHECK(back.channels() == ch);
      CHECK(back.sample_rate() == 22050);
      CHECK(back.frames() == w.frames());
      const double step = depth == BitDepth::kFloat32 ? 1e-7 : std::ldexp(1.0, -(static_cast<int>(depth) - 1));
      for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::fabs(back.samples()[i] - x[i]) <= step);
    }
  }
}

TEST_CASE("wav: 16-bit normalization") {
  const auto bytes = wav_bytes(1, 1, 8000, 16, {0x00, 0x80, 0xff, 0x7f, 0x00, 0x00, 0x00, 0x40});
  const auto w = decode_wav(bytes);
  CHECK(vec(w) == std::vector<double>{-1.0, 32767.0 / 32768.0, 0.0, 0.5});
  const auto b24 = wav_bytes(1, 1, 8000, 24, {0x00, 0x00, 0x80, 0x00, 0x00, 0x40});
  CHECK(vec(decode_wav(b24)) == std::vector<double>{-1.0, 0.5});
}

TEST_CASE("wav: integer export saturates") {
  const Waveform w({1.5, -2.0, 1.0}, 8000, 1);
  const auto back = vec(decode_wav(encode_wav(w, BitDepth::kPcm16)));
  CHECK(back == std::vector<double>{32767.0 / 32768.0, -1.0, 32767.0 / 32768.0});
}

TEST_CASE("wav: parse error variants, no partial waveform") {
  const auto good = wav_bytes(1, 1, 8000, 16, {1, 0, 2, 0});
  using K = ParseError::Kind;
  CHECK(parse_kind({good.begin(), good.begin() + 10}) == K::kTruncated);
  CHECK(parse_kind({good.begin(), good.begin() + 30}) == K::kTruncated);
  CHECK(parse_kind({good.begin(), good.end() - 1}) == K::kTruncated);
  auto rifx = good;
  rifx[3] = 'X';
  CHECK(parse_kind(rifx) == K::kHeaderMismatch);
  CHECK(parse_kind(wav_bytes(2, 1, 8000, 16, {1, 0})) == K::kUnsupportedCodec);
  CHECK(parse_kind(wav_bytes(1, 1, 8000, 8, {1, 2})) == K::kUnsupportedCodec);
  CHECK(parse_kind(wav_bytes(3, 1, 8000, 64, std::vector<std::uint8_t>(8))) == K::kUnsupportedCodec);
  CHECK(parse_kind(wav_bytes(1, 2, 8000, 16, {1, 0})) == K::kHeaderMismatch);
  CHECK_THROWS_AS(read_wav("/nonexistent/file.wav"), IoError);
  CHECK(parse_bit_depth(24) == BitDepth::kPcm24);
  CHECK_THROWS_AS(parse_bit_depth(8), InvalidInput);
}

TEST_CASE("resample: identity, length, peak and anti-aliasing") {
  const auto x = oracle::noise(1000, 3);
  const Waveform w(x, 16000, 1);
  CHECK(resample_audio(w, 16000) == w);
  CHECK(resample_audio(w, 44100).frames() == 2756);
  CHECK(resample_audio(w, 22050).frames() == 1378);
  CHECK(resample_audio(Waveform(oracle::noise(1000, 4), 16000, 2), 8000).frames() == 250);
  CHECK_THROWS_AS(resample_audio(w, 0), InvalidInput);

  const auto tone = testing::sine(1000.0, 48000, 48000);
  const auto down = vec(resample_audio(testing::mono(tone, 48000), 24000));
  CHECK(down.size() == 24000);
  // 1 kHz at 24 kHz with a 4096-point frame sits at bin 170.67.
  const auto bin = static_cast<double>(peak_bin(down, 4096));
  CHECK(std::fabs(bin - 1000.0 * 4096 / 24000) <= 1.0);

  const auto high = testing::sine(20000.0, 48000, 48000);
  const auto aliased = vec(resample_audio(testing::mono(high, 48000), 24000));
  CHECK(rms(aliased, 200) < 0.01 * rms(high));
}

TEST_CASE("resample: there and back again preserves band-limited content") {
  std::vector<double> x(8000, 0.0);
  for (double f : {300.0, 1234.0, 2500.0})
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += 0.2 * std::sin(2.0 * std::numbers::pi * f * i / 16000.0);
  const auto up = resample_audio(testing::mono(x, 16000), 44100);
  const auto back = vec(resample_audio(up, 16000));
  REQUIRE(back.size() == x.size());
  const std::vector<double> xa(x.begin() + 200, x.end() - 200);
  std::vector<double> ya(back.begin() + 200 - 10, back.end() - 200 + 10);
  const long long lag = oracle::xcorr_lag(xa, ya, 20);
  double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < xa.size(); ++i) {
    const double b = ya[i + lag];
    ab += xa[i] * b;
    aa += xa[i] * xa[i];
    bb += b * b;
  }
  CHECK(ab / std::sqrt(aa * bb) > 0.999);
}

TEST_CASE("trajectory CSV: round trip and errors") {
  const PoseTrack track({{0.0, {1.5, 0.25, -0.125}, {0, 0.09, 0}, {0, -0.09, 0}},
                         {1.0 / 3.0, {0.1, 0.2, 0.3}, {0.01, 0.09, 0}, {0.01, -0.09, 0}}});
  std::stringstream ss;
  write_trajectory_csv(ss, track);
  const auto back = read_trajectory_csv(ss);
  REQUIRE(back.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back.frames()[i].time_s == track.frames()[i].time_s);
    CHECK(back.frames()[i].src == track.frames()[i].src);
    CHECK(back.frames()[i].ear_l == track.frames()[i].ear_l);
    CHECK(back.frames()[i].ear_r == track.frames()[i].ear_r);
  }

  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_trajectory_csv(in);
  };
  const std::string header = std::string(kTrajectoryHeader) + "\n";
  CHECK_THROWS_AS(parse("time,x\n0,1\n"), ParseError);
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse(header + "0,1,2,3,4,5,6,7,8\n"), ParseError);
  CHECK_THROWS_AS(parse(header + "0,1,2,3,4,5,6,7,8,abc\n"), ParseError);
  CHECK_THROWS_AS(parse(header), InvalidInput);
  CHECK_THROWS_AS(parse(header + "1,0,0,0,0,0,0,0,0,0\n0.5,0,0,0,0,0,0,0,0,0\n"), InvalidInput);
  CHECK(parse(header + "0,1,2,3,4,5,6,7,8,9\r\n").size() == 1);
}

TEST_CASE("manifest parsing") {
  std::istringstream good(std::string(kManifestHeader) +
                          "\nrec1,0.5,1.0,90,0,2\n\nrec2,0,0.25,-45,30,1.5\n");
  const auto events = read_manifest(good);
  REQUIRE(events.size() == 2);
  CHECK(events[0].recording_id == "rec1");
  CHECK(events[0].azimuth == doctest::Approx(std::numbers::pi / 2));
  CHECK(events[0].line == 2);
  CHECK(events[1].elevation == doctest::Approx(std::numbers::pi / 6));
  CHECK(events[1].line == 4);

  std::istringstream bad(std::string(kManifestHeader) +
                         "\nrec1,0.5,1.0,90,0,2\nrec1,1.0,0.5,0,0,1\nrec1,0,1,0,0,0\nrec1,x,1,0,0,1\n"
                         "rec1,0,1,0,0\nrec1,0,1,0,0,1\n");
  try {
    read_manifest(bad);
    FAIL("expected ManifestError");
  } catch (const ManifestError& e) {
    CHECK(e.rows() == std::vector<std::size_t>{3, 4, 5, 6});
  }
  std::istringstream no_header("rec1,0.5,1.0,90,0,2\n");
  CHECK_THROWS_AS(read_manifest(no_header), ManifestError);
}

TEST_CASE("cut_segments") {
  std::vector<double> ramp(96000);
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = static_cast<double>(i) / ramp.size();
  const Waveform rec(ramp, 48000, 1);
  std::vector<SoundEvent> events{
      {"rec", 0.5, 1.0, 0.0, 0.0, 1.0, 2},
      {"rec", 0.75, 1.25, 0.3, 0.1, 2.0, 3},  // overlaps the first
      {"other", 0.0, 0.1, 0.0, 0.0, 1.0, 4},
      {"rec", 0.1234567, 0.2345678, 0.0, 0.0, 1.0, 5},
  };
  const auto segs = cut_segments(rec, events, "rec");
  REQUIRE(segs.size() == 3);
  CHECK(segs[0].audio.frames() == 24000);
  CHECK(segs[0].audio.samples()[0] == ramp[24000]);
  CHECK(segs[0].audio.samples().back() == ramp[47999]);
  CHECK(segs[1].audio.samples()[0] == ramp[36000]);
  CHECK(segs[1].position.distance() == 2.0);
  std::size_t total = 0, expected = 0;
  for (const auto& s : segs) total += s.audio.frames();
  for (const auto& e : events)
    if (e.recording_id == "rec")
      expected += static_cast<std::size_t>(std::round(e.offset_s * 48000) - std::round(e.onset_s * 48000));
  CHECK(total == expected);

  CHECK(cut_segments(rec, {}, "rec").empty());

  std::vector<SoundEvent> outside{{"rec", 1.5, 2.5, 0, 0, 1, 7}, {"rec", 0.0, 0.5, 0, 0, 1, 8},
                                  {"rec", 3.0, 4.0, 0, 0, 1, 9}};
  try {
    cut_segments(rec, outside, "rec");
    FAIL("expected ManifestError");
  } catch (const ManifestError& e) {
    CHECK(e.rows() == std::vector<std::size_t>{7, 9});
  }
}
