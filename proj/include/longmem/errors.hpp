#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace longmem {

// Each error carries a short machine-readable kind used by the CLI error line.

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
  virtual const char* kind() const noexcept { return "invalid-argument"; }
};

class UnsupportedLength : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
  const char* kind() const noexcept override { return "unsupported-length"; }
};

class RuntimeFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "runtime"; }
};

/// A transform path produced output that violates its own contract
/// (e.g. imaginary residue on a real convolution).
class InternalConsistencyError : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
  const char* kind() const noexcept override { return "internal-consistency"; }
};

class ModelConstructionError : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
  const char* kind() const noexcept override { return "model-construction"; }
};

class ResourceLimitError : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
  const char* kind() const noexcept override { return "resource-limit"; }
};

class DegenerateSampleError : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
  const char* kind() const noexcept override { return "degenerate-sample"; }
};

class InsufficientDataError : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
  const char* kind() const noexcept override { return "insufficient-data"; }
};

/// A Monte Carlo replicate failed; the study is aborted rather than shrunk.
class StudyAbortedError : public RuntimeFailure {
 public:
  StudyAbortedError(std::size_t stream_index, const std::string& cause)
      : RuntimeFailure("replicate " + std::to_string(stream_index) + " failed: " + cause),
        stream_index_(stream_index) {}
  const char* kind() const noexcept override { return "study-aborted"; }
  std::size_t stream_index() const noexcept { return stream_index_; }

 private:
  std::size_t stream_index_;
};

class IoError : public RuntimeFailure {
 public:
  using RuntimeFailure::RuntimeFailure;
  const char* kind() const noexcept override { return "io"; }
};

}  // namespace longmem
