#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tmtf {

enum class ErrorCode {
  invalid_bin_count,
  invalid_input,
  invalid_range,
  unsampled_state,
  divisibility,
  chunk_too_small,
  dimension_mismatch,
  invalid_params,
  io_error,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_bin_count: return "invalid-bin-count";
    case ErrorCode::invalid_input: return "invalid-input";
    case ErrorCode::invalid_range: return "invalid-range";
    case ErrorCode::unsampled_state: return "unsampled-state";
    case ErrorCode::divisibility: return "divisibility";
    case ErrorCode::chunk_too_small: return "chunk-too-small";
    case ErrorCode::dimension_mismatch: return "dimension-mismatch";
    case ErrorCode::invalid_params: return "invalid-params";
    case ErrorCode::io_error: return "io-error";
  }
  return "unknown";
}

/// True for errors caused by the requested configuration rather than by the
/// data it was applied to. The CLI maps these to exit status 1.
constexpr bool is_configuration_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_bin_count:
    case ErrorCode::invalid_range:
    case ErrorCode::divisibility:
    case ErrorCode::chunk_too_small:
    case ErrorCode::invalid_params:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace tmtf
