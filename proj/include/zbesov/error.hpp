#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace zbesov {

enum class ErrorCode {
  invalid_argument,
  resolution_too_coarse,
  overflow_guard,
  degenerate_box,
  degenerate_scale,
  tail_too_large,
  atoms_not_disjoint,
  invalid_parameters,
  budget_exceeded,
  gap_certificate_missing,
  index_sets_overlap,
  degenerate_input,
  parameter_domain,
  io_error,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::resolution_too_coarse: return "resolution-too-coarse";
    case ErrorCode::overflow_guard: return "overflow-guard";
    case ErrorCode::degenerate_box: return "degenerate-box";
    case ErrorCode::degenerate_scale: return "degenerate-scale";
    case ErrorCode::tail_too_large: return "tail-too-large";
    case ErrorCode::atoms_not_disjoint: return "atoms-not-disjoint";
    case ErrorCode::invalid_parameters: return "invalid-parameters";
    case ErrorCode::budget_exceeded: return "budget-exceeded";
    case ErrorCode::gap_certificate_missing: return "gap-certificate-missing";
    case ErrorCode::index_sets_overlap: return "index-sets-overlap";
    case ErrorCode::degenerate_input: return "degenerate-input";
    case ErrorCode::parameter_domain: return "parameter-domain";
    case ErrorCode::io_error: return "io-error";
  }
  return "unknown";
}

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace zbesov
