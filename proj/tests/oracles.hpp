// Independent brute-force references. Nothing here calls into the library's
// FFT, STFT or metric code; signals travel as plain vectors.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using Cplx = std::complex<double>;
using Matrix = std::vector<std::vector<Cplx>>;  // [frame][bin]

inline double hann(std::size_t n, std::size_t size) {
  return 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / size);
}

/// Direct DFT of one real frame, bins 0..N/2.
inline std::vector<Cplx> dft(const std::vector<double>& frame) {
  const std::size_t n = frame.size();
  std::vector<double> c(n), s(n);
  for (std::size_t i = 0; i < n; ++i) {
    c[i] = std::cos(2.0 * std::numbers::pi * i / n);
    s[i] = std::sin(2.0 * std::numbers::pi * i / n);
  }
  std::vector<Cplx> out(n / 2 + 1);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    double re = 0.0, im = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const std::size_t idx = (k * t) % n;
      re += frame[t] * c[idx];
      im -= frame[t] * s[idx];
    }
    out[k] = {re, im};
  }
  return out;
}

/// Mirror index without repeating the edge: -1 -> 1, len -> len-2.
inline std::size_t mirror(long long i, long long len) {
  if (len == 1) return 0;
  while (i < 0 || i >= len) {
    if (i < 0) i = -i;
    if (i >= len) i = 2 * (len - 1) - i;
  }
  return static_cast<std::size_t>(i);
}

/// Hann-windowed spectrogram. Centred (reflect) frames when `centred`,
/// otherwise frames start at f*hop and only full frames are kept.
inline Matrix spectrogram(const std::vector<double>& x, std::size_t fft, std::size_t hop,
                          bool centred = true) {
  const auto len = static_cast<long long>(x.size());
  std::size_t frames;
  if (centred)
    frames = (x.size() + hop - 1) / hop;
  else
    frames = x.size() < fft ? 0 : 1 + (x.size() - fft) / hop;
  Matrix out;
  for (std::size_t f = 0; f < frames; ++f) {
    std::vector<double> frame(fft);
    const long long start = centred ? static_cast<long long>(f * hop) - static_cast<long long>(fft / 2)
                                    : static_cast<long long>(f * hop);
    for (std::size_t t = 0; t < fft; ++t)
      frame[t] = x[mirror(start + static_cast<long long>(t), len)] * hann(t, fft);
    out.push_back(dft(frame));
  }
  return out;
}

inline double wave_l2(const std::vector<double>& a, const std::vector<double>& b) {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) acc += (long double)(a[i] - b[i]) * (a[i] - b[i]);
  return static_cast<double>(1000.0L * acc / a.size());
}

inline double amplitude_l2(const Matrix& x, const Matrix& y) {
  long double acc = 0.0L;
  std::size_t cells = 0;
  for (std::size_t f = 0; f < x.size(); ++f)
    for (std::size_t b = 0; b < x[f].size(); ++b, ++cells) {
      const double d = std::abs(x[f][b]) - std::abs(y[f][b]);
      acc += d * d;
    }
  return static_cast<double>(acc / cells);
}

/// Wraps to (-pi, pi] by explicit subtraction.
inline double wrap(double a) {
  const double two_pi = 2.0 * std::numbers::pi;
  while (a > std::numbers::pi) a -= two_pi;
  while (a <= -std::numbers::pi) a += two_pi;
  return a;
}

inline double phase_l2(const Matrix& gl, const Matrix& gr, const Matrix& sl, const Matrix& sr,
                       double silent = 1e-8) {
  long double acc = 0.0L;
  std::size_t cells = 0;
  for (std::size_t f = 0; f < gl.size(); ++f)
    for (std::size_t b = 0; b < gl[f].size(); ++b) {
      const bool g_quiet = std::abs(gl[f][b]) < silent || std::abs(gr[f][b]) < silent;
      const bool s_quiet = std::abs(sl[f][b]) < silent || std::abs(sr[f][b]) < silent;
      if (g_quiet && s_quiet) continue;
      const double dg = wrap(std::arg(gl[f][b]) - std::arg(gr[f][b]));
      const double ds = wrap(std::arg(sl[f][b]) - std::arg(sr[f][b]));
      const double e = wrap(dg - ds);
      acc += e * e;
      ++cells;
    }
  return cells == 0 ? 0.0 : static_cast<double>(acc / cells);
}

/// Two passes: Frobenius norms first, then the log-magnitude L1.
inline double stft_loss(const Matrix& x, const Matrix& y) {
  long double diff = 0.0L, ref = 0.0L, l1 = 0.0L;
  std::size_t cells = 0;
  for (std::size_t f = 0; f < x.size(); ++f)
    for (std::size_t b = 0; b < x[f].size(); ++b) {
      const double mx = std::abs(x[f][b]), my = std::abs(y[f][b]);
      diff += (long double)(mx - my) * (mx - my);
      ref += (long double)mx * mx;
    }
  for (std::size_t f = 0; f < x.size(); ++f)
    for (std::size_t b = 0; b < x[f].size(); ++b, ++cells) {
      const double mx = std::max(std::abs(x[f][b]), 1e-7);
      const double my = std::max(std::abs(y[f][b]), 1e-7);
      l1 += std::fabs(std::log(mx) - std::log(my));
    }
  const double sc = diff == 0.0L ? 0.0 : static_cast<double>(std::sqrt(diff / ref));
  return sc + static_cast<double>(l1 / cells);
}

inline double mrstft(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t fft : {512u, 1024u, 2048u})
    acc += stft_loss(spectrogram(a, fft, fft / 4), spectrogram(b, fft, fft / 4));
  return acc / 3.0;
}

/// argmax over |lag| <= max_lag of sum_n ref[n] * hyp[n + lag]; ties to the smaller |lag|.
inline long long xcorr_lag(const std::vector<double>& ref, const std::vector<double>& hyp,
                           long long max_lag) {
  long long best = 0;
  double best_val = -1e300;
  for (long long a = 0; a <= max_lag; ++a)
    for (long long lag : {a, -a}) {
      double acc = 0.0;
      for (long long n = 0; n < static_cast<long long>(ref.size()); ++n) {
        const long long m = n + lag;
        if (m >= 0 && m < static_cast<long long>(hyp.size())) acc += ref[n] * hyp[m];
      }
      if (acc > best_val) {
        best_val = acc;
        best = lag;
      }
    }
  return best;
}

/// Triangular filters on the HTK mel scale, each row scaled to unit sum.
inline std::vector<std::vector<double>> filterbank(std::size_t mels, std::size_t fft, double rate,
                                                   double f_lo, double f_hi) {
  auto to_mel = [](double f) { return 2595.0 * std::log10(1.0 + f / 700.0); };
  auto to_hz = [](double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); };
  std::vector<double> pts;
  for (std::size_t i = 0; i < mels + 2; ++i)
    pts.push_back(to_hz(to_mel(f_lo) + (to_mel(f_hi) - to_mel(f_lo)) * i / (mels + 1)));
  std::vector<std::vector<double>> fb(mels, std::vector<double>(fft / 2 + 1, 0.0));
  for (std::size_t m = 0; m < mels; ++m) {
    double total = 0.0;
    for (std::size_t b = 0; b <= fft / 2; ++b) {
      const double f = b * rate / fft;
      double w = 0.0;
      if (f > pts[m] && f <= pts[m + 1]) w = (f - pts[m]) / (pts[m + 1] - pts[m]);
      else if (f > pts[m + 1] && f < pts[m + 2]) w = (pts[m + 2] - f) / (pts[m + 2] - pts[m + 1]);
      fb[m][b] = w;
      total += w;
    }
    if (total > 0.0)
      for (auto& w : fb[m]) w /= total;
    else
      fb[m][std::min<std::size_t>(std::lround(pts[m + 1] * fft / rate), fft / 2)] = 1.0;
  }
  return fb;
}

/// out[t] evaluated straight from the interpolation formula.
inline std::vector<double> warp(const std::vector<double>& x, const std::vector<double>& idx) {
  std::vector<double> out(idx.size());
  auto at = [&](long long i) { return i < 0 || i >= (long long)x.size() ? 0.0 : x[i]; };
  for (std::size_t t = 0; t < idx.size(); ++t) {
    const double fl = std::floor(idx[t]);
    const double fr = idx[t] - fl;
    out[t] = (1.0 - fr) * at((long long)fl) + fr * at((long long)fl + 1);
  }
  return out;
}

inline std::vector<double> noise(std::size_t n, std::uint64_t seed, double amp = 0.5) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-amp, amp);
  std::vector<double> v(n);
  for (auto& s : v) s = u(rng);
  return v;
}

inline std::uint64_t fnv1a(const std::vector<std::uint8_t>& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (auto b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace oracle
