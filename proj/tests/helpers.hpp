#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "zerobas/core.hpp"

namespace testing {

inline std::filesystem::path data_dir() { return ZEROBAS_TEST_DATA_DIR; }

inline std::vector<double> vec(const zerobas::Waveform& w) {
  return {w.samples().begin(), w.samples().end()};
}

inline zerobas::Waveform mono(std::vector<double> x, int rate = 16000) {
  return zerobas::Waveform(std::move(x), rate, 1);
}

inline zerobas::StereoPair stereo(std::vector<double> l, std::vector<double> r, int rate = 16000) {
  return {mono(std::move(l), rate), mono(std::move(r), rate)};
}

inline std::vector<double> sine(double freq, int rate, std::size_t n, double amp = 0.5,
                                double phase = 0.0) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = amp * std::sin(2.0 * std::numbers::pi * freq * i / rate + phase);
  return x;
}

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("zerobas_" + tag + "_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing
