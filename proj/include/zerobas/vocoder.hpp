// Denoising-vocoder stage: the backend interface, three backends, and the
// fixed-conditioning refinement loop.
#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <string>

#include "zerobas/core.hpp"
#include "zerobas/features.hpp"
#include "zerobas/wire.hpp"

namespace zerobas {

/// One refinement step y_{i-1} = V(y_i, c, k).
///
/// Implementations return a waveform with the same length and rate as `y`,
/// deterministically in (y, c, k). `k` is an opaque noise-level index.
class DenoisingVocoder {
 public:
  virtual ~DenoisingVocoder() = default;
  virtual Waveform refine(const Waveform& y, const MelMatrix& c, unsigned k) = 0;
  virtual std::string name() const = 0;
};

class IdentityVocoder final : public DenoisingVocoder {
 public:
  Waveform refine(const Waveform& y, const MelMatrix&, unsigned) override { return y; }
  std::string name() const override { return "identity"; }
};

/// Stationary-noise spectral gate. Bins whose magnitude falls below
/// threshold * (1 + k) / 2 * floor are scaled by `attenuation`, where the
/// floor of a bin is min(its median over frames, median of all cells).
/// Resynthesis is Hann-windowed overlap-add at hop fft_size / 4.
/// Ignores the conditioning.
class SpectralGateVocoder final : public DenoisingVocoder {
 public:
  struct Options {
    std::size_t fft_size = 1024;
    double threshold = 2.0;
    double attenuation = 0.1;
  };

  SpectralGateVocoder() : SpectralGateVocoder(Options{}) {}
  explicit SpectralGateVocoder(Options options);

  /// Throws InvalidInput when y is shorter than one FFT frame.
  Waveform refine(const Waveform& y, const MelMatrix& c, unsigned k) override;
  std::string name() const override { return "spectral-gate"; }

 private:
  Options options_;
};

struct VocoderEndpoint {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;
  std::chrono::milliseconds timeout{30000};
  std::size_t max_payload_bytes = wire::kDefaultMaxPayload;

  /// Parses "host:port".
  static VocoderEndpoint parse(const std::string& address);
};

/// Client for an out-of-process vocoder. Holds one connection, opened on the
/// first call and reused; one request is in flight at a time. Any transport
/// or framing failure closes the connection.
class ExternalVocoder final : public DenoisingVocoder {
 public:
  explicit ExternalVocoder(VocoderEndpoint endpoint);
  ~ExternalVocoder() override;
  ExternalVocoder(const ExternalVocoder&) = delete;
  ExternalVocoder& operator=(const ExternalVocoder&) = delete;

  /// Throws VocoderError with kTimeout, kConnectionRefused, kMalformedResponse,
  /// kLengthMismatch, kBackend, kPayloadTooLarge or kTransport.
  Waveform refine(const Waveform& y, const MelMatrix& c, unsigned k) override;
  std::string name() const override;

 private:
  void connect();
  void close();

  VocoderEndpoint endpoint_;
  int fd_ = -1;
};

std::unique_ptr<DenoisingVocoder> make_vocoder(const VocoderSelector& selector);

/// Refines each channel N times with conditioning taken once from the input.
/// Throws StageError naming the iteration (N..1) and channel on backend failure.
StereoPair iterative_refine(const StereoPair& pair, DenoisingVocoder& vocoder,
                            unsigned iterations, unsigned k, const StftConfig& cfg,
                            const MelConfig& mel);

/// Single-channel form, used when refinement runs before spatialization.
Waveform iterative_refine(const Waveform& mono, DenoisingVocoder& vocoder, unsigned iterations,
                          unsigned k, const StftConfig& cfg, const MelConfig& mel,
                          char channel_tag = 'M');

}  // namespace zerobas
