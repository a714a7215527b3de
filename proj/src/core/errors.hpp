#pragma once

#include <stdexcept>
#include <string>

namespace sgev {

enum class ErrorCode {
    invalid_argument,
    dimension_mismatch,
    not_positive_definite,
    not_converged,
    max_sub_iterations,
    all_thresholded,
    zero_direction,
    zero_update,
    empty_support,
    rank_collapse,
    early_stop,
    parse_error,
    io_error,
    domain_error,
};

/// Library-wide exception carrying a machine-readable code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::invalid_argument: return "invalid_argument";
        case ErrorCode::dimension_mismatch: return "dimension_mismatch";
        case ErrorCode::not_positive_definite: return "not_positive_definite";
        case ErrorCode::not_converged: return "not_converged";
        case ErrorCode::max_sub_iterations: return "max_sub_iterations";
        case ErrorCode::all_thresholded: return "all_thresholded";
        case ErrorCode::zero_direction: return "zero_direction";
        case ErrorCode::zero_update: return "zero_update";
        case ErrorCode::empty_support: return "empty_support";
        case ErrorCode::rank_collapse: return "rank_collapse";
        case ErrorCode::early_stop: return "early_stop";
        case ErrorCode::parse_error: return "parse_error";
        case ErrorCode::io_error: return "io_error";
        case ErrorCode::domain_error: return "domain_error";
    }
    return "unknown";
}

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace sgev
