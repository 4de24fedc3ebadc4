#include "lgsim/error.hpp"

namespace lgsim {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::dimension_mismatch: return "DimensionMismatch";
    case ErrorCode::not_square: return "NotSquare";
    case ErrorCode::not_hermitian: return "NotHermitian";
    case ErrorCode::not_psd: return "NotPSD";
    case ErrorCode::not_unit_vector: return "NotUnitVector";
    case ErrorCode::out_of_range: return "OutOfRange";
    case ErrorCode::invalid_channel: return "ValidationError";
    case ErrorCode::degenerate_filter: return "DegenerateFilter";
    case ErrorCode::signalling_statistics: return "SignallingStatistics";
    case ErrorCode::no_feasible_point: return "NoFeasiblePoint";
    case ErrorCode::non_uniform_normalization: return "NonUniformN";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::io_error: return "IOError";
    case ErrorCode::invalid_config: return "InvalidConfig";
  }
  return "Unknown";
}

}  // namespace lgsim
