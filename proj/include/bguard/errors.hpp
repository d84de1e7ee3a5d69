#pragma once

#include <stdexcept>
#include <string>

namespace bguard {

// Precondition / dimension violations. Thrown eagerly, never swallowed.
struct ContractViolation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// SVD breakdown, non-finite values, exploding iterates.
struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Combinatorial search hit its evaluation cap before deciding.
struct BudgetExceeded : std::runtime_error {
    BudgetExceeded(const std::string& what, long long evaluations)
        : std::runtime_error(what), evaluations(evaluations) {}
    long long evaluations;
};

// Requested adversarial construction does not exist (the condition it
// needs to violate actually holds).
struct InfeasibleAttack : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolverFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace bguard
