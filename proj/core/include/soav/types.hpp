#pragma once

#include <stdexcept>

#include <Eigen/Core>

namespace soav {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Input violates a documented precondition (bad shape, value out of the
// admissible range, malformed configuration).
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DimensionError : ValidationError {
    using ValidationError::ValidationError;
};

struct DomainError : ValidationError {
    using ValidationError::ValidationError;
};

// An iterative routine exhausted its iteration budget.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Factorization rejected a matrix that is not symmetric positive definite.
struct DefinitenessError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Non-finite values appeared inside an iteration.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace soav
