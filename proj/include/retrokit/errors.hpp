#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace retrokit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed SMILES / RXN SMILES text. `position()` is a 0-based offset into
/// the text that was being parsed.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, std::string reason)
      : Error("syntax error at " + std::to_string(position) + ": " + reason),
        position_(position),
        reason_(std::move(reason)) {}

  std::size_t position() const noexcept { return position_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t position_;
  std::string reason_;
};

class PatternSyntaxError : public SyntaxError {
 public:
  using SyntaxError::SyntaxError;
};

class ValenceError : public Error {
 public:
  using Error::Error;
};

class MappingError : public Error {
 public:
  using Error::Error;
};

class NoChangeError : public Error {
 public:
  using Error::Error;
};

class NoDisconnectionError : public Error {
 public:
  using Error::Error;
};

class RingBondError : public Error {
 public:
  using Error::Error;
};

class AmbiguityError : public Error {
 public:
  using Error::Error;
};

class GenerationError : public Error {
 public:
  using Error::Error;
};

class InsufficientPool : public Error {
 public:
  using Error::Error;
};

}  // namespace retrokit
