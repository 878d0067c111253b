#include "zerobas/wire.hpp"

#include <bit>
#include <cstring>
#include <limits>

#include "zerobas/errors.hpp"

namespace zerobas::wire {
namespace {

static_assert(sizeof(float) == 4 && std::numeric_limits<float>::is_iec559);

[[noreturn]] void malformed(const std::string& what) {
  throw VocoderError(VocoderError::Kind::kMalformedResponse, "malformed frame: " + what);
}

class Writer {
 public:
  void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(const ReadExact& read) : read_(read) {}

  void magic(const std::array<std::uint8_t, 4>& expected) {
    std::array<std::uint8_t, 4> got{};
    read_(got);
    if (got != expected) malformed("bad magic");
  }
  std::uint32_t u32() {
    std::array<std::uint8_t, 4> b{};
    read_(b);
    return static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8 |
           static_cast<std::uint32_t>(b[2]) << 16 | static_cast<std::uint32_t>(b[3]) << 24;
  }
  std::vector<float> f32s(std::uint64_t count) {
    std::vector<std::uint8_t> raw(count * 4);
    if (!raw.empty()) read_(raw);
    std::vector<float> out(count);
    for (std::size_t i = 0; i < count; ++i) {
      const std::uint32_t v = static_cast<std::uint32_t>(raw[4 * i]) |
                              static_cast<std::uint32_t>(raw[4 * i + 1]) << 8 |
                              static_cast<std::uint32_t>(raw[4 * i + 2]) << 16 |
                              static_cast<std::uint32_t>(raw[4 * i + 3]) << 24;
      out[i] = std::bit_cast<float>(v);
    }
    return out;
  }
  std::string text(std::uint32_t len) {
    std::string s(len, '\0');
    if (len > 0) read_(std::span(reinterpret_cast<std::uint8_t*>(s.data()), len));
    return s;
  }

 private:
  const ReadExact& read_;
};

void check_payload(std::uint64_t bytes, std::size_t max_payload) {
  if (bytes > max_payload)
    throw VocoderError(VocoderError::Kind::kPayloadTooLarge,
                       "declared payload of " + std::to_string(bytes) + " bytes exceeds limit");
}

ReadExact buffer_reader(std::span<const std::uint8_t> bytes, std::size_t& pos) {
  return [bytes, &pos](std::span<std::uint8_t> dst) {
    if (bytes.size() - pos < dst.size()) malformed("truncated");
    std::memcpy(dst.data(), bytes.data() + pos, dst.size());
    pos += dst.size();
  };
}

}  // namespace

std::vector<std::uint8_t> encode_request(const Request& req) {
  if (req.mel.size() != static_cast<std::uint64_t>(req.mel_frames) * req.mel_bins)
    throw InvalidInput("request mel size does not match mel_frames * mel_bins");
  Writer w;
  w.bytes(kRequestMagic);
  w.u32(req.sample_rate);
  w.u32(static_cast<std::uint32_t>(req.samples.size()));
  w.u32(req.k);
  w.u32(req.mel_frames);
  w.u32(req.mel_bins);
  for (float v : req.samples) w.f32(v);
  for (float v : req.mel) w.f32(v);
  return w.take();
}

std::vector<std::uint8_t> encode_response(const Response& resp) {
  Writer w;
  w.bytes(kResponseMagic);
  w.u32(resp.status);
  if (resp.status != 0) {
    w.u32(static_cast<std::uint32_t>(resp.message.size()));
    w.bytes(std::span(reinterpret_cast<const std::uint8_t*>(resp.message.data()),
                      resp.message.size()));
  }
  w.u32(static_cast<std::uint32_t>(resp.samples.size()));
  for (float v : resp.samples) w.f32(v);
  return w.take();
}

Request read_request(const ReadExact& read, std::size_t max_payload) {
  Reader r(read);
  r.magic(kRequestMagic);
  Request req;
  req.sample_rate = r.u32();
  const std::uint32_t num_samples = r.u32();
  req.k = r.u32();
  req.mel_frames = r.u32();
  req.mel_bins = r.u32();
  const std::uint64_t mel_count = static_cast<std::uint64_t>(req.mel_frames) * req.mel_bins;
  check_payload(4 * (static_cast<std::uint64_t>(num_samples) + mel_count), max_payload);
  req.samples = r.f32s(num_samples);
  req.mel = r.f32s(mel_count);
  return req;
}

Response read_response(const ReadExact& read, std::size_t max_payload) {
  Reader r(read);
  r.magic(kResponseMagic);
  Response resp;
  resp.status = r.u32();
  if (resp.status != 0) {
    const std::uint32_t len = r.u32();
    check_payload(len, max_payload);
    resp.message = r.text(len);
  }
  const std::uint32_t num_samples = r.u32();
  check_payload(4 * static_cast<std::uint64_t>(num_samples), max_payload);
  resp.samples = r.f32s(num_samples);
  return resp;
}

Request decode_request(std::span<const std::uint8_t> bytes, std::size_t max_payload) {
  std::size_t pos = 0;
  auto req = read_request(buffer_reader(bytes, pos), max_payload);
  if (pos != bytes.size()) malformed("trailing bytes");
  return req;
}

Response decode_response(std::span<const std::uint8_t> bytes, std::size_t max_payload) {
  std::size_t pos = 0;
  auto resp = read_response(buffer_reader(bytes, pos), max_payload);
  if (pos != bytes.size()) malformed("trailing bytes");
  return resp;
}

}  // namespace zerobas::wire
