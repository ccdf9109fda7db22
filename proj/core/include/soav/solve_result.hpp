#pragma once

#include <limits>
#include <string>

#include "soav/types.hpp"

namespace soav {

enum class SolveStatus {
    converged,             // residual/optimality criteria met
    max_iter,              // iteration budget exhausted
    infeasible_suspected,  // ADMM primal residual plateaued high
    infeasible,            // certified by the LP phase-1
};

struct SolveResult {
    Vector z;
    double objective = std::numeric_limits<double>::quiet_NaN();  // h-scaled
    double terminal_residual = std::numeric_limits<double>::quiet_NaN();  // ||Phi z + zeta||
    int iterations = 0;
    bool converged = false;
    SolveStatus status = SolveStatus::max_iter;
};

std::string to_string(SolveStatus status);

}  // namespace soav
