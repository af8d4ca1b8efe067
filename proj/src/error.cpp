#include "ckpt/error.hpp"

namespace ckpt {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyLog: return "empty_log";
    case ErrorKind::NoFailures: return "no_failures";
    case ErrorKind::NonPositiveMttf: return "non_positive_mttf";
    case ErrorKind::NegativeTime: return "negative_time";
    case ErrorKind::ProbabilityOutOfRange: return "probability_out_of_range";
    case ErrorKind::NonPositiveInterval: return "non_positive_interval";
    case ErrorKind::BelowBranchPoint: return "below_branch_point";
    case ErrorKind::DegenerateInput: return "degenerate_input";
    case ErrorKind::NoConvergence: return "no_convergence";
    case ErrorKind::NonPositiveResult: return "non_positive_result";
    case ErrorKind::WorkNotDivisible: return "work_not_divisible";
    case ErrorKind::BudgetExceeded: return "budget_exceeded";
    case ErrorKind::OutOfSweepRange: return "out_of_sweep_range";
    case ErrorKind::InvalidConfig: return "invalid_config";
    case ErrorKind::ParseError: return "parse_error";
  }
  return "unknown";
}

}  // namespace ckpt
