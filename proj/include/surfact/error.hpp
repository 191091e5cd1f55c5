#pragma once

#include <stdexcept>
#include <string>

namespace surfact {

// Every failure the library can signal. The CLI maps these onto exit codes:
// schema/io problems exit 1, everything else (domain validation) exits 2.
enum class errc {
  bad_modulus,
  modulus_mismatch,
  shape_mismatch,
  not_a_unit,
  not_unimodular,
  not_alternating,
  invalid_q_tuple,
  not_surjective,
  branch_sum_nonzero,
  zero_branch_value,
  quotient_not_free,
  non_integral_genus,
  negative_genus,
  not_realizable,
  incompatible_groups,
  budget_exceeded,
  search_budget_exceeded,
  overflow,
  schema,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::bad_modulus: return "BadModulus";
    case errc::modulus_mismatch: return "ModulusMismatch";
    case errc::shape_mismatch: return "ShapeMismatch";
    case errc::not_a_unit: return "NotAUnit";
    case errc::not_unimodular: return "NotUnimodular";
    case errc::not_alternating: return "NotAlternating";
    case errc::invalid_q_tuple: return "InvalidQTuple";
    case errc::not_surjective: return "NotSurjective";
    case errc::branch_sum_nonzero: return "BranchSumNonzero";
    case errc::zero_branch_value: return "ZeroBranchValue";
    case errc::quotient_not_free: return "QuotientNotFree";
    case errc::non_integral_genus: return "NonIntegralGenus";
    case errc::negative_genus: return "NegativeGenus";
    case errc::not_realizable: return "NotRealizable";
    case errc::incompatible_groups: return "IncompatibleGroups";
    case errc::budget_exceeded: return "BudgetExceeded";
    case errc::search_budget_exceeded: return "SearchBudgetExceeded";
    case errc::overflow: return "Overflow";
    case errc::schema: return "SchemaError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const noexcept { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace surfact
