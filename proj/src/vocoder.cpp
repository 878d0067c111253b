#include "zerobas/vocoder.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "net.hpp"
#include "zerobas/fft.hpp"

namespace zerobas {
namespace {

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
  std::nth_element(values.begin(), mid, values.end());
  if (values.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(values.begin(), mid);
  return 0.5 * (lower + upper);
}

}  // namespace

SpectralGateVocoder::SpectralGateVocoder(Options options) : options_(options) {
  StftConfig{options_.fft_size, std::max<std::size_t>(1, options_.fft_size / 4)}.validate();
  if (!(options_.threshold >= 0.0)) throw InvalidInput("gate threshold must be non-negative");
  if (!(options_.attenuation >= 0.0 && options_.attenuation <= 1.0))
    throw InvalidInput("gate attenuation must lie in [0, 1]");
}

Waveform SpectralGateVocoder::refine(const Waveform& y, const MelMatrix&, unsigned k) {
  if (y.channels() != 1) throw InvalidInput("spectral gate expects a mono waveform");
  const std::size_t n = options_.fft_size;
  if (y.frames() < n) throw InvalidInput("spectral gate input shorter than one frame");
  const StftConfig cfg{n, n / 4, Padding::kReflect};

  Spectrogram spec = stft(y, cfg);
  const std::size_t frames = spec.frames();
  const std::size_t bins = spec.bins();
  const auto mag = spec.magnitude();

  const double global_floor = median(mag);
  const double factor = options_.threshold * (1.0 + k) / 2.0;
  std::vector<double> column(frames);
  for (std::size_t b = 0; b < bins; ++b) {
    for (std::size_t f = 0; f < frames; ++f) column[f] = mag[f * bins + b];
    const double threshold = factor * std::min(median(column), global_floor);
    for (std::size_t f = 0; f < frames; ++f)
      if (mag[f * bins + b] < threshold) spec.at(f, b) *= options_.attenuation;
  }

  // Weighted overlap-add with the analysis window as synthesis window.
  const std::size_t len = y.frames();
  const auto window = hann_window(n);
  const Fft& fft = Fft::of_size(n);
  std::vector<double> acc(len, 0.0), norm(len, 0.0), frame(n);
  for (std::size_t f = 0; f < frames; ++f) {
    fft.inverse_real(spec.frame(f), frame);
    const auto start = static_cast<std::ptrdiff_t>(f * cfg.hop) - static_cast<std::ptrdiff_t>(n / 2);
    for (std::size_t j = 0; j < n; ++j) {
      const std::ptrdiff_t t = start + static_cast<std::ptrdiff_t>(j);
      if (t < 0 || t >= static_cast<std::ptrdiff_t>(len)) continue;
      acc[t] += window[j] * frame[j];
      norm[t] += window[j] * window[j];
    }
  }
  for (std::size_t t = 0; t < len; ++t) acc[t] = norm[t] > 1e-12 ? acc[t] / norm[t] : 0.0;
  return Waveform(std::move(acc), y.sample_rate(), 1);
}

VocoderEndpoint VocoderEndpoint::parse(const std::string& address) {
  const auto colon = address.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == address.size())
    throw InvalidInput("vocoder endpoint must be host:port, got '" + address + "'");
  VocoderEndpoint ep;
  ep.host = address.substr(0, colon);
  if (ep.host.size() > 2 && ep.host.front() == '[' && ep.host.back() == ']')
    ep.host = ep.host.substr(1, ep.host.size() - 2);
  unsigned port = 0;
  const char* first = address.data() + colon + 1;
  const char* last = address.data() + address.size();
  const auto [ptr, ec] = std::from_chars(first, last, port);
  if (ec != std::errc() || ptr != last || port == 0 || port > 65535)
    throw InvalidInput("invalid vocoder port in '" + address + "'");
  ep.port = static_cast<std::uint16_t>(port);
  return ep;
}

ExternalVocoder::ExternalVocoder(VocoderEndpoint endpoint) : endpoint_(std::move(endpoint)) {
  if (endpoint_.timeout.count() <= 0) throw InvalidInput("vocoder timeout must be positive");
}

ExternalVocoder::~ExternalVocoder() { close(); }

std::string ExternalVocoder::name() const {
  return "external:" + endpoint_.host + ":" + std::to_string(endpoint_.port);
}

void ExternalVocoder::connect() {
  if (fd_ < 0) fd_ = net::connect_tcp(endpoint_.host, endpoint_.port, endpoint_.timeout);
}

void ExternalVocoder::close() {
  net::close_fd(fd_);
  fd_ = -1;
}

Waveform ExternalVocoder::refine(const Waveform& y, const MelMatrix& c, unsigned k) {
  if (y.channels() != 1) throw InvalidInput("external vocoder expects a mono waveform");
  wire::Request req;
  req.sample_rate = static_cast<std::uint32_t>(y.sample_rate());
  req.k = k;
  req.mel_frames = static_cast<std::uint32_t>(c.frames);
  req.mel_bins = static_cast<std::uint32_t>(c.bins);
  req.samples.assign(y.samples().begin(), y.samples().end());
  req.mel.assign(c.values.begin(), c.values.end());
  const auto bytes = wire::encode_request(req);
  if (bytes.size() > endpoint_.max_payload_bytes)
    throw VocoderError(VocoderError::Kind::kPayloadTooLarge, "request exceeds payload limit");

  wire::Response resp;
  try {
    connect();
    net::send_all(fd_, bytes, endpoint_.timeout);
    const int fd = fd_;
    const auto timeout = endpoint_.timeout;
    resp = wire::read_response(
        [fd, timeout](std::span<std::uint8_t> dst) { net::recv_exact(fd, dst, timeout); },
        endpoint_.max_payload_bytes);
  } catch (...) {
    close();
    throw;
  }

  if (resp.status != 0)
    throw VocoderError(VocoderError::Kind::kBackend,
                       "vocoder backend error " + std::to_string(resp.status) + ": " + resp.message);
  if (resp.samples.size() != y.frames())
    throw VocoderError(VocoderError::Kind::kLengthMismatch,
                       "vocoder returned " + std::to_string(resp.samples.size()) +
                           " samples, expected " + std::to_string(y.frames()));
  std::vector<double> out(resp.samples.begin(), resp.samples.end());
  if (!std::all_of(out.begin(), out.end(), [](double v) { return std::isfinite(v); }))
    throw VocoderError(VocoderError::Kind::kMalformedResponse, "vocoder returned non-finite samples");
  return Waveform(std::move(out), y.sample_rate(), 1);
}

std::unique_ptr<DenoisingVocoder> make_vocoder(const VocoderSelector& selector) {
  switch (selector.kind) {
    case VocoderSelector::Kind::kIdentity: return std::make_unique<IdentityVocoder>();
    case VocoderSelector::Kind::kSpectralGate: return std::make_unique<SpectralGateVocoder>();
    case VocoderSelector::Kind::kExternal:
      return std::make_unique<ExternalVocoder>(VocoderEndpoint::parse(selector.endpoint));
  }
  throw InvalidInput("unknown vocoder selector");
}

namespace {

Waveform checked_step(DenoisingVocoder& vocoder, const Waveform& y, const MelMatrix& c,
                      unsigned k, unsigned iteration, char channel) {
  auto stage_error = [&](VocoderError::Kind kind, const std::string& what) {
    return StageError(iteration, channel, kind,
                      std::string("vocoder '") + vocoder.name() + "' failed at iteration " +
                          std::to_string(iteration) + ", channel " + channel + ": " + what);
  };
  Waveform out;
  try {
    out = vocoder.refine(y, c, k);
  } catch (const VocoderError& e) {
    throw stage_error(e.kind(), e.what());
  }
  if (out.channels() != 1 || out.frames() != y.frames() || out.sample_rate() != y.sample_rate())
    throw stage_error(VocoderError::Kind::kLengthMismatch, "output shape differs from input");
  return out;
}

}  // namespace

Waveform iterative_refine(const Waveform& mono, DenoisingVocoder& vocoder, unsigned iterations,
                          unsigned k, const StftConfig& cfg, const MelConfig& mel,
                          char channel_tag) {
  if (iterations == 0) return mono;
  const MelMatrix c = log_mel(mono, cfg, mel);
  Waveform y = mono;
  for (unsigned i = iterations; i >= 1; --i) y = checked_step(vocoder, y, c, k, i, channel_tag);
  return y;
}

StereoPair iterative_refine(const StereoPair& pair, DenoisingVocoder& vocoder,
                            unsigned iterations, unsigned k, const StftConfig& cfg,
                            const MelConfig& mel) {
  if (iterations == 0) return pair;
  const MelMatrix c_left = log_mel(pair.left, cfg, mel);
  const MelMatrix c_right = log_mel(pair.right, cfg, mel);
  Waveform left = pair.left;
  Waveform right = pair.right;
  for (unsigned i = iterations; i >= 1; --i) {
    left = checked_step(vocoder, left, c_left, k, i, 'L');
    right = checked_step(vocoder, right, c_right, k, i, 'R');
  }
  return StereoPair(std::move(left), std::move(right));
}

}  // namespace zerobas
