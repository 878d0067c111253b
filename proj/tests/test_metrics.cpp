#include <doctest.h>

#include <numbers>
#include <sstream>

#include "helpers.hpp"
#include "zerobas/metrics.hpp"

using namespace zerobas;
using testing::stereo;
using testing::vec;

namespace {

/// Bin-centred tones at bins 40, 90, 171 of a 512-point frame.
std::vector<double> tones(std::size_t n, long long offset, double phase = 0.0) {
  std::vector<double> x(n, 0.0);
  for (int k : {40, 90, 171})
    for (std::size_t t = 0; t < n; ++t)
      x[t] += 0.2 * std::cos(2.0 * std::numbers::pi * k * (static_cast<double>(t) - offset) / 512.0 +
                             phase);
  return x;
}

}  // namespace

TEST_CASE("wave_l2: constant offset and scalar oracle") {
  const auto gt = stereo(std::vector<double>(100, 0.5), std::vector<double>(100, 0.5));
  const auto zero = stereo(std::vector<double>(100, 0.0), std::vector<double>(100, 0.0));
  CHECK(wave_l2(gt, zero) == doctest::Approx(250.0).epsilon(1e-15));

  const auto a = oracle::noise(1000, 1), b = oracle::noise(1000, 2);
  const auto c = oracle::noise(1000, 3), d = oracle::noise(1000, 4);
  const double expect = 0.5 * (oracle::wave_l2(a, c) + oracle::wave_l2(b, d));
  CHECK(wave_l2(stereo(a, b), stereo(c, d)) == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("wave_l2 scales quadratically with the error") {
  const auto a = oracle::noise(2000, 5), b = oracle::noise(2000, 6);
  const auto n1 = oracle::noise(2000, 7), n2 = oracle::noise(2000, 8);
  const double eps = 0.03;
  std::vector<double> al(a), ar(b), el(a), er(b);
  for (std::size_t i = 0; i < a.size(); ++i) {
    al[i] += n1[i];
    ar[i] += n2[i];
    el[i] += eps * n1[i];
    er[i] += eps * n2[i];
  }
  const double full = wave_l2(stereo(a, b), stereo(al, ar));
  const double small = wave_l2(stereo(a, b), stereo(el, er));
  CHECK(small == doctest::Approx(eps * eps * full).epsilon(1e-9));
}

TEST_CASE("amplitude_l2: doubling the signal gives the mean squared magnitude") {
  const auto a = oracle::noise(3000, 9);
  std::vector<double> twice(a);
  for (auto& v : twice) v *= 2.0;
  const auto spec = oracle::spectrogram(a, 1024, 256);
  double acc = 0.0;
  std::size_t cells = 0;
  for (const auto& row : spec)
    for (const auto& v : row) {
      acc += std::norm(v);
      ++cells;
    }
  CHECK(amplitude_l2(stereo(a, a), stereo(twice, twice)) == doctest::Approx(acc / cells).epsilon(1e-9));
  const auto silent = stereo(std::vector<double>(500, 0.0), std::vector<double>(500, 0.0));
  CHECK(amplitude_l2(silent, silent) == 0.0);
}

TEST_CASE("all metrics vanish on identical inputs and are non-negative otherwise") {
  const auto a = stereo(oracle::noise(8000, 10), oracle::noise(8000, 11));
  const auto b = stereo(oracle::noise(8000, 12), oracle::noise(8000, 13));
  CHECK(wave_l2(a, a) == 0.0);
  CHECK(amplitude_l2(a, a) == 0.0);
  CHECK(phase_l2(a, a) == 0.0);
  CHECK(mrstft(a, a) == 0.0);
  CHECK(wave_l2(a, b) > 0.0);
  CHECK(amplitude_l2(a, b) > 0.0);
  CHECK(phase_l2(a, b) > 0.0);
  CHECK(mrstft(a, b) > 0.0);
  CHECK(phase_l2(a, b) <= std::numbers::pi * std::numbers::pi);
}

TEST_CASE("phase_l2 ignores a common phase rotation") {
  const StftConfig cfg{512, 128, Padding::kNone};
  const auto gt = stereo(tones(4096, 0), tones(4096, 0, 0.7));
  const auto syn = stereo(tones(4096, 0, 1.9), tones(4096, 0, 0.7 + 1.9));
  CHECK(phase_l2(gt, syn, cfg) < 1e-12);
}

TEST_CASE("phase_l2 of a pure delay against the analytic phase slope") {
  const StftConfig cfg{512, 128, Padding::kNone};
  for (long long delay : {1LL, 3LL, 7LL, 20LL}) {
    const auto x = tones(4096, 0);
    const auto gt = stereo(x, x);
    const auto syn = stereo(x, tones(4096, delay));
    // Every counted cell belongs to a tone at bin k and carries error
    // wrap(2 pi k delay / 512); the three bins of each tone weigh equally.
    double expect = 0.0;
    for (int k : {40, 90, 171}) {
      const double e = oracle::wrap(2.0 * std::numbers::pi * k * delay / 512.0);
      expect += e * e / 3.0;
    }
    CHECK(std::fabs(phase_l2(gt, syn, cfg) - expect) < 1e-6);
  }
}

TEST_CASE("phase_l2 skips cells that are silent in both signals") {
  const auto silent = stereo(std::vector<double>(4096, 0.0), std::vector<double>(4096, 0.0));
  CHECK(phase_l2(silent, silent) == 0.0);
}

TEST_CASE("spectral convergence of a gain-scaled signal is |1 - g|") {
  const auto a = testing::mono(oracle::noise(6000, 14));
  for (double g : {0.25, 0.9, 1.5, 3.0}) {
    std::vector<double> s = vec(a);
    for (auto& v : s) v *= g;
    for (std::size_t fft : {512u, 1024u, 2048u}) {
      const StftConfig cfg{fft, fft / 4};
      CHECK(spectral_convergence(a, testing::mono(s), cfg) == doctest::Approx(std::fabs(1.0 - g)).epsilon(1e-12));
      CHECK(log_magnitude_l1(a, testing::mono(s), cfg) == doctest::Approx(std::fabs(std::log(g))).epsilon(1e-9));
    }
  }
}

TEST_CASE("metrics match the brute-force oracles on a random pair") {
  const int rate = 8000;
  const auto gl = oracle::noise(4000, 15), gr = oracle::noise(4000, 16);
  const auto sl = oracle::noise(4000, 17), sr = oracle::noise(4000, 18);
  const auto gt = stereo(gl, gr, rate), syn = stereo(sl, sr, rate);
  const auto GL = oracle::spectrogram(gl, 1024, 256), GR = oracle::spectrogram(gr, 1024, 256);
  const auto SL = oracle::spectrogram(sl, 1024, 256), SR = oracle::spectrogram(sr, 1024, 256);
  CHECK(amplitude_l2(gt, syn) ==
        doctest::Approx(0.5 * (oracle::amplitude_l2(GL, SL) + oracle::amplitude_l2(GR, SR))).epsilon(1e-9));
  CHECK(phase_l2(gt, syn) == doctest::Approx(oracle::phase_l2(GL, GR, SL, SR)).epsilon(1e-9));
  CHECK(mrstft(gt, syn) ==
        doctest::Approx(0.5 * (oracle::mrstft(gl, sl) + oracle::mrstft(gr, sr))).epsilon(1e-9));
}

TEST_CASE("metrics reject mismatched inputs") {
  const auto a = stereo(oracle::noise(1000, 1), oracle::noise(1000, 2));
  const auto b = stereo(oracle::noise(999, 1), oracle::noise(999, 2));
  CHECK_THROWS_AS(wave_l2(a, b), InvalidInput);
  CHECK_THROWS_AS(amplitude_l2(a, b), InvalidInput);
  CHECK_THROWS_AS(phase_l2(a, b), InvalidInput);
  CHECK_THROWS_AS(mrstft(a, b), InvalidInput);
  const auto c = stereo(oracle::noise(1000, 1), oracle::noise(1000, 2), 8000);
  CHECK_THROWS_AS(wave_l2(a, c), InvalidInput);
}

TEST_CASE("wrap_phase maps into (-pi, pi]") {
  CHECK(wrap_phase(std::numbers::pi) == doctest::Approx(std::numbers::pi));
  CHECK(wrap_phase(-std::numbers::pi) == doctest::Approx(std::numbers::pi));
  CHECK(wrap_phase(3.0 * std::numbers::pi / 2.0) == doctest::Approx(-std::numbers::pi / 2.0));
  for (double a = -20.0; a < 20.0; a += 0.37) {
    const double w = wrap_phase(a);
    CHECK(w > -std::numbers::pi);
    CHECK(w <= std::numbers::pi);
    CHECK(w == doctest::Approx(oracle::wrap(a)).epsilon(1e-12));
  }
}

TEST_CASE("estimate_lag and align_pairs recover an injected delay") {
  const auto x = oracle::noise(6000, 19);
  for (long long d : {-37LL, 0LL, 5LL, 120LL}) {
    std::vector<double> y(x.size(), 0.0);
    for (long long n = 0; n < static_cast<long long>(x.size()); ++n)
      if (n - d >= 0 && n - d < static_cast<long long>(x.size())) y[n] = x[n - d];
    CHECK(estimate_lag(x, y, 200) == d);
    CHECK(estimate_lag(x, y, 200) == oracle::xcorr_lag(x, y, 200));

    std::ptrdiff_t applied = 0;
    const auto [g, s] = align_pairs(stereo(x, x), stereo(y, y), 200, &applied);
    CHECK(applied == d);
    CHECK(g.frames() == s.frames());
    CHECK(wave_l2(g, s) < 1e-20);
  }
}

TEST_CASE("corpus_mean and key=value lines") {
  MetricReport a, b;
  a.utterance = "a";
  a.wave_l2 = 1.0;
  a.phase_l2 = 2.0;
  b.utterance = "b";
  b.wave_l2 = 3.0;
  b.mrstft = 4.0;
  const std::vector<MetricReport> reports{a, b};
  const auto m = corpus_mean(reports);
  CHECK(m.utterance == "corpus");
  CHECK(m.wave_l2 == 2.0);
  CHECK(m.phase_l2 == 1.0);
  CHECK(m.mrstft == 2.0);
  std::ostringstream os;
  write_key_value(os, m);
  CHECK(os.str() == "utterance=corpus wave_l2=2 amplitude_l2=0 phase_l2=1 mrstft=2\n");
}
