// Command-line front end. `run` is the whole program minus process setup so
// tests can drive it in-process.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace zerobas::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kIo = 3,
  kVocoder = 4,
};

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zerobas::cli
