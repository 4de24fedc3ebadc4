#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lgsim {

enum class ErrorCode {
  dimension_mismatch,
  not_square,
  not_hermitian,
  not_psd,
  not_unit_vector,
  out_of_range,
  invalid_channel,
  degenerate_filter,
  signalling_statistics,
  no_feasible_point,
  non_uniform_normalization,
  parse_error,
  io_error,
  invalid_config,
};

std::string_view to_string(ErrorCode code) noexcept;

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(to_string(code)) + ": " + what);
}

}  // namespace lgsim
