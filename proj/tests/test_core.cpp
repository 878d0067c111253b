#include <doctest.h>

#include <limits>

#include "helpers.hpp"
#include "zerobas/core.hpp"

using namespace zerobas;

TEST_CASE("interpolate_track: single frame gives a constant trajectory") {
  const PoseTrack track({{0.0, {1, 2, 3}, {0, 0.09, 0}, {0, -0.09, 0}}});
  const auto traj = interpolate_track(track, 8000, 37);
  REQUIRE(traj.size() == 37);
  for (std::size_t n = 0; n < traj.size(); ++n) {
    CHECK(traj.src[n] == Vec3{1, 2, 3});
    CHECK(traj.ear_l[n] == Vec3{0, 0.09, 0});
    CHECK(traj.ear_r[n] == Vec3{0, -0.09, 0});
  }
}

TEST_CASE("interpolate_track: linear between two frames") {
  const PoseTrack track({{0.0, {0, 0, 0}, {}, {}}, {1.0, {1, 0, 0}, {}, {}}});
  const auto traj = interpolate_track(track, 4, 5);
  const double expected[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  for (int n = 0; n < 5; ++n) CHECK(traj.src[n].x == doctest::Approx(expected[n]).epsilon(1e-15));
}

TEST_CASE("interpolate_track: clamps before the first and after the last frame") {
  const PoseTrack track({{0.5, {1, 0, 0}, {}, {}}, {1.0, {3, 0, 0}, {}, {}}});
  const auto traj = interpolate_track(track, 4, 8);  // t = 0 .. 1.75
  CHECK(traj.src[1].x == 1.0);  // t = 0.25
  CHECK(traj.src[0].x == 1.0);
  CHECK(traj.src[3].x == doctest::Approx(2.0));  // t = 0.75
  CHECK(traj.src[7].x == 3.0);
}

TEST_CASE("interpolate_track: exact at frame timestamps") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<PoseFrame> frames;
  for (int k = 0; k < 12; ++k)
    frames.push_back({k / 30.0, {u(rng), u(rng), u(rng)}, {u(rng), u(rng), u(rng)},
                      {u(rng), u(rng), u(rng)}});
  const PoseTrack track(frames);
  const auto traj = interpolate_track(track, 48000, 11 * 1600 + 1);
  for (int k = 0; k < 12; ++k) {
    const std::size_t n = static_cast<std::size_t>(k) * 1600;
    CHECK(traj.src[n] == frames[k].src);
    CHECK(traj.ear_l[n] == frames[k].ear_l);
    CHECK(traj.ear_r[n] == frames[k].ear_r);
  }
}

TEST_CASE("interpolate_track: a redundant collinear frame changes nothing") {
  const Vec3 a{0, 0, 0}, b{2, -1, 0.5};
  const PoseTrack two({{0.0, a, a, b}, {1.0, b, b, a}});
  const double tm = 0.3;
  const Vec3 am = a + tm * (b - a), bm = b + tm * (a - b);
  const PoseTrack three({{0.0, a, a, b}, {tm, am, am, bm}, {1.0, b, b, a}});
  const auto t2 = interpolate_track(two, 1000, 1200);
  const auto t3 = interpolate_track(three, 1000, 1200);
  for (std::size_t n = 0; n < t2.size(); ++n) {
    CHECK(distance(t2.src[n], t3.src[n]) < 1e-9);
    CHECK(distance(t2.ear_l[n], t3.ear_l[n]) < 1e-9);
    CHECK(distance(t2.ear_r[n], t3.ear_r[n]) < 1e-9);
  }
}

TEST_CASE("interpolate_track: rejects bad tracks") {
  CHECK_THROWS_AS(PoseTrack({}), InvalidInput);
  CHECK_THROWS_AS(PoseTrack({{1.0, {}, {}, {}}, {0.5, {}, {}, {}}}), InvalidInput);
  CHECK_THROWS_AS(PoseTrack({{1.0, {}, {}, {}}, {1.0, {}, {}, {}}}), InvalidInput);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(PoseTrack({{0.0, {nan, 0, 0}, {}, {}}}), InvalidInput);
  const PoseTrack ok({{0.0, {}, {}, {}}});
  CHECK_THROWS_AS(interpolate_track(ok, 16000, 0), InvalidInput);
  CHECK_THROWS_AS(interpolate_track(ok, 0, 10), InvalidInput);
}

TEST_CASE("Waveform validates its invariants") {
  CHECK_THROWS_AS(Waveform({0.0}, 0, 1), InvalidInput);
  CHECK_THROWS_AS(Waveform({0.0}, 16000, 3), InvalidInput);
  CHECK_THROWS_AS(Waveform({0.0, 0.0, 0.0}, 16000, 2), InvalidInput);
  CHECK_THROWS_AS(Waveform({std::numeric_limits<double>::infinity()}, 16000, 1), InvalidInput);

  const Waveform st({1, 2, 3, 4, 5, 6}, 8000, 2);
  CHECK(st.frames() == 3);
  CHECK(testing::vec(st.channel(0)) == std::vector<double>{1, 3, 5});
  CHECK(testing::vec(st.channel(1)) == std::vector<double>{2, 4, 6});
  CHECK(Waveform::interleave(st.channel(0), st.channel(1)) == st);
  const auto pair = StereoPair::from_interleaved(st);
  CHECK(pair.to_interleaved() == st);
  CHECK_THROWS_AS(StereoPair(testing::mono({1, 2}), testing::mono({1})), InvalidInput);
  CHECK_THROWS_AS(StereoPair(testing::mono({1}, 8000), testing::mono({1}, 16000)), InvalidInput);
}

TEST_CASE("PipelineConfig and VocoderSelector") {
  PipelineConfig cfg;
  CHECK(cfg.iterations == 3);
  CHECK(cfg.noise_level == 1);
  CHECK(cfg.speed_of_sound == 343.0);
  CHECK(cfg.enable_gtw);
  CHECK(cfg.enable_as);
  CHECK_FALSE(cfg.swap_order);
  CHECK_NOTHROW(cfg.validate());
  cfg.speed_of_sound = 0.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);

  CHECK(VocoderSelector::parse("identity").kind == VocoderSelector::Kind::kIdentity);
  CHECK(VocoderSelector::parse("spectral-gate").kind == VocoderSelector::Kind::kSpectralGate);
  CHECK(VocoderSelector::parse("spectral_gate").kind == VocoderSelector::Kind::kSpectralGate);
  const auto ext = VocoderSelector::parse("external:127.0.0.1:9000");
  CHECK(ext.kind == VocoderSelector::Kind::kExternal);
  CHECK(ext.endpoint == "127.0.0.1:9000");
  CHECK(ext.to_string() == "external:127.0.0.1:9000");
  CHECK_THROWS_AS(VocoderSelector::parse("wavefit"), InvalidInput);
  CHECK_THROWS_AS(VocoderSelector::parse("external:"), InvalidInput);
}
