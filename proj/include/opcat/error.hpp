#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace opcat {

enum class ErrorKind {
  parse,
  unresolved_name,
  duplicate_name,
  not_associative,
  missing_identity,
  ill_typed_composite,
  missing_composite,
  budget_exceeded,
  arity_mismatch,
  bound_too_small,
  unknown_arrow,
  unknown_edge,
  incompatible_chains,
  invalid_structure,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parse: return "ParseError";
    case ErrorKind::unresolved_name: return "UnresolvedName";
    case ErrorKind::duplicate_name: return "DuplicateName";
    case ErrorKind::not_associative: return "NotAssociative";
    case ErrorKind::missing_identity: return "MissingIdentity";
    case ErrorKind::ill_typed_composite: return "IllTypedComposite";
    case ErrorKind::missing_composite: return "MissingComposite";
    case ErrorKind::budget_exceeded: return "BudgetExceeded";
    case ErrorKind::arity_mismatch: return "ArityMismatch";
    case ErrorKind::bound_too_small: return "BoundTooSmall";
    case ErrorKind::unknown_arrow: return "UnknownArrow";
    case ErrorKind::unknown_edge: return "UnknownEdge";
    case ErrorKind::incompatible_chains: return "IncompatibleChains";
    case ErrorKind::invalid_structure: return "InvalidStructure";
  }
  return "Error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Counts branching decisions of an exhaustive search. A search that would
// explore more than `limit` branches throws BudgetExceeded.
class SearchBudget {
 public:
  static constexpr std::uint64_t default_functor_limit = 1'000'000;
  static constexpr std::uint64_t default_verify_limit = 100'000;

  explicit SearchBudget(std::uint64_t limit = default_functor_limit) : limit_(limit) {}

  std::uint64_t limit() const noexcept { return limit_; }
  std::uint64_t used() const noexcept { return used_; }

  // log10 of the naive search-space size, reported when the budget runs out.
  void set_estimate(double log10_space) { log10_space_ = log10_space; }

  void charge(std::uint64_t n = 1) {
    used_ += n;
    if (used_ > limit_) {
      std::ostringstream os;
      os << "search explored more than " << limit_ << " candidates";
      if (log10_space_ > 0) {
        os << " (naive search space ~1e" << static_cast<long long>(std::ceil(log10_space_)) << ")";
      }
      throw Error(ErrorKind::budget_exceeded, os.str());
    }
  }

 private:
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
  double log10_space_ = 0;
};

}  // namespace opcat
