#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace csq {

enum class ErrorKind {
  kInvalidDimension,
  kDimension,
  kInsufficientCenters,
  kInvalidLabel,
  kNumeric,
  kGeneration,
  kFormat,
  kIo,
  kTraining,
  kConfig,
};

std::string_view to_string(ErrorKind kind);

// Base of every error thrown by the library. The message is prefixed with the
// kind so that CLI output is self-describing.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Malformed or truncated binary file. `offset` is the byte position at which
// decoding failed.
class FormatError : public Error {
 public:
  FormatError(const std::string& message, std::uint64_t offset)
      : Error(ErrorKind::kFormat,
              message + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

class TrainingError : public Error {
 public:
  TrainingError(const std::string& message, std::size_t epoch,
                std::size_t batch)
      : Error(ErrorKind::kTraining, message + " (epoch " +
                                        std::to_string(epoch) + ", batch " +
                                        std::to_string(batch) + ")"),
        epoch_(epoch),
        batch_(batch) {}

  std::size_t epoch() const noexcept { return epoch_; }
  std::size_t batch() const noexcept { return batch_; }

 private:
  std::size_t epoch_;
  std::size_t batch_;
};

// Wraps a failure inside one pipeline stage; what() reads "[stage] ...".
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& message)
      : std::runtime_error("[" + stage + "] " + message),
        stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace csq
