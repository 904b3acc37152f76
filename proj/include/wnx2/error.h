#pragma once

#include <stdexcept>
#include <string>

namespace wnx2 {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input data: wrong shapes, malformed files, inconsistent configs.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// The filesystem refused us (missing file, unwritable directory).
class IoError : public Error {
 public:
  using Error::Error;
};

enum class ContainerErrc {
  bad_magic,
  unsupported_version,
  truncated,
  overlapping_records,
  duplicate_name,
  bad_record,
};

const char* to_string(ContainerErrc code);

class ContainerError : public ValidationError {
 public:
  ContainerError(ContainerErrc code, const std::string& detail)
      : ValidationError(std::string(to_string(code)) + ": " + detail), code_(code), detail_(detail) {}

  ContainerErrc code() const { return code_; }
  const std::string& detail() const { return detail_; }

 private:
  ContainerErrc code_;
  std::string detail_;
};

}  // namespace wnx2
