#pragma once

#include <limits>

#include "soav/plant.hpp"
#include "soav/solve_result.hpp"
#include "soav/types.hpp"

namespace soav::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Equality-form LP: minimize c'x subject to Aeq x = beq and
// lower <= x <= upper (upper entries may be +inf; lower must be finite).
struct StandardLp {
    Vector c;
    Matrix aeq;
    Vector beq;
    Vector lower;
    Vector upper;
    Index num_structural = 0;  // (z, s) columns; slack columns follow
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
    LpStatus status = LpStatus::infeasible;
    double value = std::numeric_limits<double>::quiet_NaN();
    Vector x;
    int iterations = 0;
    bool phase2_monotone = true;  // objective never increased during phase 2
};

// Epigraph form of the discretized program: variables (z, s_1..s_L) with
// s_i >= z - r_i and s_i >= r_i - z (one slack per inequality), objective
// sum_i p_i 1's_i, plus the terminal equalities Phi z = -zeta. Variable count
// before slacks is nu(1+L); equality rows 2 L nu + n.
StandardLp reformulate(const DiscreteProblem& problem);

// Dense two-phase tableau simplex with bounded variables. Dantzig pricing
// with a Bland's-rule fallback once a degeneracy stall is detected;
// infeasibility is declared when the phase-1 objective stays above 1e-8.
LpResult simplex(const StandardLp& lp);

// reformulate + simplex, mapped back to the control vector with the h-scaled
// objective.
SolveResult solve_reference(const DiscreteProblem& problem);

// Cheap certificate: ||zeta|| exceeding sum_l ||Phi col l|| proves no box
// control can meet the terminal constraint.
bool certified_unreachable(const DiscreteProblem& problem);

}  // namespace soav::lp
