// Exception taxonomy for the library.
//
// Every failure mode that user input can trigger has a dedicated type so
// callers (CLI, proof checker, test oracles) can distinguish "the input is
// ill-formed" from "the input is fine but the requested computation cannot
// be carried out on this model".
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dglsc {

// Base for everything thrown by this library.
struct DglscError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Lexical or grammatical problem in a formula/game/term/model/proof text.
// Carries a 1-based position into the offending text.
struct SyntaxError : DglscError {
  SyntaxError(std::size_t line, std::size_t column, const std::string& what)
      : DglscError("syntax error at " + std::to_string(line) + ":" +
                   std::to_string(column) + ": " + what),
        line(line),
        column(column) {}
  std::size_t line;
  std::size_t column;
};

// `parse` was asked for one syntactic category but the text belongs to none.
struct UnboundCategory : DglscError {
  using DglscError::DglscError;
};

// Model construction / evaluation problems.
struct ModelError : DglscError {
  using DglscError::DglscError;
};
struct UnknownVariable : ModelError {
  explicit UnknownVariable(const std::string& name)
      : ModelError("unknown variable '" + name + "'"), name(name) {}
  std::string name;
};
struct OutOfDomainAssignment : ModelError {
  using ModelError::ModelError;
};
struct NonIntegerStepInModularMode : ModelError {
  using ModelError::ModelError;
};
struct MissingFlowTable : ModelError {
  explicit MissingFlowTable(const std::string& key)
      : ModelError("no flow table registered for '" + key + "'"), key(key) {}
  std::string key;
};
struct SpaceTooLarge : ModelError {
  using ModelError::ModelError;
};

// The iterative fixpoint did not stabilise within the configured budget.
struct FixpointBudgetExceeded : DglscError {
  using DglscError::DglscError;
};

// Substitution would capture a variable or push a term under a game that
// may rebind it.
struct SubstitutionError : DglscError {
  using DglscError::DglscError;
};

// Proof checking: a rule was applied to a redex it does not match, a side
// condition failed, or the script structure is inconsistent.
struct RuleError : DglscError {
  using DglscError::DglscError;
};

}  // namespace dglsc
