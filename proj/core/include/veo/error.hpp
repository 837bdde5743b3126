#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace veo {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input. `line()` is 1-based, or 0 when not line oriented.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::string raw = {})
      : Error(what), line_(line), raw_(std::move(raw)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& raw() const noexcept { return raw_; }

 private:
  std::size_t line_;
  std::string raw_;
};

/// A structural precondition on a graph or node set does not hold.
class GraphError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration value or combination.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Any failure reported by a vision-chat backend.
class GatewayError : public Error {
 public:
  using Error::Error;
};

/// Missing or rejected API credentials.
class CredentialError : public GatewayError {
 public:
  using GatewayError::GatewayError;
};

/// Network failure, timeout or retry exhaustion.
class TransportError : public GatewayError {
 public:
  TransportError(const std::string& what, int attempts)
      : GatewayError(what), attempts_(attempts) {}
  int attempts() const noexcept { return attempts_; }

 private:
  int attempts_;
};

/// Request payload rejected before sending (for example an oversized image).
class InputError : public GatewayError {
 public:
  using GatewayError::GatewayError;
};

}  // namespace veo
