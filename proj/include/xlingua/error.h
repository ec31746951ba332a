#pragma once

#include <stdexcept>
#include <string>

namespace xlingua {

enum class ErrorKind {
  kParse,
  kValidation,
  kConfig,
  kInvalidArgument,
  kIo,
};

// Base of every exception thrown by the library. The kind drives CLI exit
// codes: kIo maps to 2, everything else to 1.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string &message)
      : Error(ErrorKind::kParse, message) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string &message)
      : Error(ErrorKind::kValidation, message) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string &message)
      : Error(ErrorKind::kConfig, message) {}
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string &message)
      : Error(ErrorKind::kInvalidArgument, message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string &message)
      : Error(ErrorKind::kIo, message) {}
};

}  // namespace xlingua
