#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bseg {

// Mirrors bseg_status in the C header; values must stay in sync.
enum class ErrorCode : int {
  kConfig = 1,
  kShape = 2,
  kDomain = 3,
  kNumeric = 4,
  kFormat = 5,
  kIo = 6,
  kMissingInstance = 7,
  kGeneration = 8,
  kDegenerateTime = 9,
  kInvalidArgument = 10,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& why)
      : Error(ErrorCode::kConfig, "config error: " + field + ": " + why),
        field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& what)
      : Error(ErrorCode::kShape, "shape error: " + what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what)
      : Error(ErrorCode::kDomain, "domain error: " + what) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what)
      : Error(ErrorCode::kNumeric, "numeric error: " + what) {}
};

class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::uint64_t offset)
      : Error(ErrorCode::kFormat, "format error at byte " +
                                      std::to_string(offset) + ": " + what),
        offset_(offset) {}
  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what)
      : Error(ErrorCode::kIo, "io error: " + what) {}
};

}  // namespace bseg
