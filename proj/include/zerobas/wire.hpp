// Framing for the out-of-process vocoder protocol. All integers are
// little-endian u32, all samples little-endian IEEE-754 f32.
//
//   request  = "ZBV1" sample_rate num_samples k mel_frames mel_bins
//              f32[num_samples] f32[mel_frames * mel_bins]   (mel frame-major)
//   response = "ZBR1" status [msg_len u8[msg_len] if status != 0]
//              num_samples f32[num_samples]
//
// A non-zero status is a backend failure; its message is UTF-8 and the frame
// still ends with a (normally zero) sample count and samples.
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace zerobas::wire {

inline constexpr std::array<std::uint8_t, 4> kRequestMagic{'Z', 'B', 'V', '1'};
inline constexpr std::array<std::uint8_t, 4> kResponseMagic{'Z', 'B', 'R', '1'};
inline constexpr std::size_t kDefaultMaxPayload = std::size_t{256} << 20;

struct Request {
  std::uint32_t sample_rate = 0;
  std::uint32_t k = 0;
  std::uint32_t mel_frames = 0;
  std::uint32_t mel_bins = 0;
  std::vector<float> samples;
  std::vector<float> mel;

  friend bool operator==(const Request&, const Request&) = default;
};

struct Response {
  std::uint32_t status = 0;
  std::string message;
  std::vector<float> samples;

  friend bool operator==(const Response&, const Response&) = default;
};

/// Fills the whole span or throws. Lets one parser serve buffers and sockets.
using ReadExact = std::function<void(std::span<std::uint8_t>)>;

std::vector<std::uint8_t> encode_request(const Request& req);
std::vector<std::uint8_t> encode_response(const Response& resp);

/// Parse errors throw VocoderError::kMalformedResponse; declared payloads
/// larger than `max_payload` bytes throw kPayloadTooLarge before allocation.
Request read_request(const ReadExact& read, std::size_t max_payload = kDefaultMaxPayload);
Response read_response(const ReadExact& read, std::size_t max_payload = kDefaultMaxPayload);

/// Whole-buffer variants; trailing bytes are malformed.
Request decode_request(std::span<const std::uint8_t> bytes,
                       std::size_t max_payload = kDefaultMaxPayload);
Response decode_response(std::span<const std::uint8_t> bytes,
                         std::size_t max_payload = kDefaultMaxPayload);

}  // namespace zerobas::wire
