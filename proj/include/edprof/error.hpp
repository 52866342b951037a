#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace edprof {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input violates a documented precondition (non-normalized mass, T <= 0, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Filesystem or stream I/O failure.
class IoError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Logit stream format errors. Each failure class is a distinct type so that
// callers (and tests) can tell truncation from corruption.
// ---------------------------------------------------------------------------

class StreamError : public Error {
 public:
  using Error::Error;
};

class BadMagicError : public StreamError {
 public:
  using StreamError::StreamError;
};

class UnsupportedVersionError : public StreamError {
 public:
  UnsupportedVersionError(const std::string& what, std::uint16_t version)
      : StreamError(what), version_(version) {}
  std::uint16_t version() const noexcept { return version_; }

 private:
  std::uint16_t version_;
};

class TruncationError : public StreamError {
 public:
  TruncationError(const std::string& what, std::uint64_t offset)
      : StreamError(what), offset_(offset) {}
  // Byte offset at which more data was expected.
  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

class ChecksumError : public StreamError {
 public:
  ChecksumError(const std::string& what, std::uint64_t expected, std::uint64_t actual)
      : StreamError(what), expected_(expected), actual_(actual) {}
  std::uint64_t expected() const noexcept { return expected_; }
  std::uint64_t actual() const noexcept { return actual_; }

 private:
  std::uint64_t expected_;
  std::uint64_t actual_;
};

// Header/record disagreement: wrong value count, wrong width, non-monotone
// position index, non-finite value.
class RecordMismatchError : public StreamError {
 public:
  using StreamError::StreamError;
};

// ---------------------------------------------------------------------------
// Statistics errors.
// ---------------------------------------------------------------------------

class StatsError : public Error {
 public:
  using Error::Error;
};

// Too few observations (or groups) for the requested procedure.
class InsufficientDataError : public StatsError {
 public:
  using StatsError::StatsError;
};

// Zero variance where a ratio needs a nonzero denominator.
class DegenerateInputError : public StatsError {
 public:
  using StatsError::StatsError;
};

// Design matrix does not have full column rank.
class RankDeficientError : public StatsError {
 public:
  using StatsError::StatsError;
};

}  // namespace edprof
