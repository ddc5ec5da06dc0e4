#pragma once

#include <stdexcept>
#include <string>

namespace acotot {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Graph construction and queries.
class UnknownNode : public Error {
 public:
  using Error::Error;
};
class UnreachableNode : public Error {
 public:
  using Error::Error;
};
class EmptyTree : public Error {
 public:
  using Error::Error;
};
class NodeCapExceeded : public Error {
 public:
  using Error::Error;
};
/// A graph document or raw tree violates a structural invariant.
class InvalidGraph : public Error {
 public:
  using Error::Error;
};

// Colony.
class SinkNode : public Error {
 public:
  using Error::Error;
};
class NumericOverflow : public Error {
 public:
  using Error::Error;
};
class LengthMismatch : public Error {
 public:
  using Error::Error;
};
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Scoring.
class ZeroVector : public Error {
 public:
  using Error::Error;
};

// Synthetic benchmarks.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// Any failure that originates in an external capability (LLM, embedder).
class ProviderFailure : public Error {
 public:
  using Error::Error;
};
class GeneratorFailure : public ProviderFailure {
 public:
  using ProviderFailure::ProviderFailure;
};
class EmbedderFailure : public ProviderFailure {
 public:
  using ProviderFailure::ProviderFailure;
};
/// A provider returned a score outside its contractual range.
class OutOfRangeScore : public ProviderFailure {
 public:
  using ProviderFailure::ProviderFailure;
};
class ParseError : public ProviderFailure {
 public:
  using ProviderFailure::ProviderFailure;
};
class HttpError : public ProviderFailure {
 public:
  HttpError(const std::string& what, int status)
      : ProviderFailure(what), status_(status) {}
  /// HTTP status of the last attempt, or 0 for transport errors.
  int status() const noexcept { return status_; }

 private:
  int status_;
};

}  // namespace acotot
