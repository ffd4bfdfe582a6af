#pragma once

#include <stdexcept>
#include <string>

namespace krvqr {

enum class ErrorCode {
  EmptyLabel,
  IoError,
  FormatError,
  UnknownEntity,
  NoRoute,
  IncompatibleKinds,
  MissingSurfaceForm,
  TooFewImages,
  DimensionMismatch,
  ZeroModulus,
  InvalidHyperparameter,
  InvalidProgram,
  InvalidConfig,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline Error empty_label_error(const std::string &raw) {
  return {ErrorCode::EmptyLabel, "label is empty after normalization: \"" + raw + "\""};
}

inline Error io_error(const std::string &path, const std::string &what) {
  return {ErrorCode::IoError, path + ": " + what};
}

inline Error format_error(const std::string &where, const std::string &what) {
  return {ErrorCode::FormatError, where + ": " + what};
}

}  // namespace krvqr
