// Error types shared by every stage of the library.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace zerobas {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad argument, inconsistent lengths, non-finite values.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Geometry for which a stage is undefined (an ear on top of the source).
class DegenerateGeometry : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  enum class Kind { kUnsupportedCodec, kTruncated, kHeaderMismatch, kSyntax };

  ParseError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Manifest rows that cannot be honoured; `rows()` holds 1-based data row numbers.
class ManifestError : public Error {
 public:
  ManifestError(std::vector<std::size_t> rows, const std::string& what)
      : Error(what), rows_(std::move(rows)) {}
  const std::vector<std::size_t>& rows() const noexcept { return rows_; }

 private:
  std::vector<std::size_t> rows_;
};

class VocoderError : public Error {
 public:
  enum class Kind {
    kTimeout,
    kConnectionRefused,
    kMalformedResponse,
    kLengthMismatch,
    kBackend,
    kTransport,
    kPayloadTooLarge,
  };

  VocoderError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// A vocoder failure inside the refinement loop, tagged with where it happened.
class StageError : public Error {
 public:
  StageError(unsigned iteration, char channel, VocoderError::Kind cause,
             const std::string& what)
      : Error(what), iteration_(iteration), channel_(channel), cause_(cause) {}
  unsigned iteration() const noexcept { return iteration_; }
  /// 'L', 'R' or 'M' (mono, swap-order pipeline).
  char channel() const noexcept { return channel_; }
  VocoderError::Kind cause() const noexcept { return cause_; }

 private:
  unsigned iteration_;
  char channel_;
  VocoderError::Kind cause_;
};

const char* to_string(VocoderError::Kind kind) noexcept;

}  // namespace zerobas
