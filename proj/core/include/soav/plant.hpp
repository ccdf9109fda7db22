#pragma once

#include <string>
#include <vector>

#include "soav/types.hpp"

namespace soav {

// Continuous-time single-input LTI plant dx/dt = A x + B u.
struct Plant {
    Matrix a;  // n x n
    Matrix b;  // n x 1

    Index n() const { return a.rows(); }
};

// Symmetric finite control set {±U_1, ..., ±U_N} with weights w_1..w_N.
// After normalize() the levels satisfy 0 <= U_1 < ... < U_N = 1 and the
// weights sum to one.
struct Alphabet {
    std::vector<double> levels;
    std::vector<double> weights;

    int size() const { return static_cast<int>(levels.size()); }
    double u_min() const { return levels.front(); }
};

void validate(const Plant& plant);
void validate(const Alphabet& alphabet);

struct NormalizeResult {
    Plant plant;
    Alphabet alphabet;
    std::vector<std::string> warnings;
};

// Scales B by U_N and divides the levels by U_N so the top level is one;
// rescales weights to sum to one (warning recorded if they did not).
NormalizeResult normalize(const Plant& plant, const Alphabet& alphabet);

// Ascending signed levels r_1 = -U_N, ..., r_L = U_N with mirrored weights
// p_1 = p_L = w_N, ..., p_N = p_{N+1} = w_1 (L = 2N). Both -U_1 and +U_1 are
// kept even when U_1 = 0 so that sum_i p_i |z - r_i| matches
// sum_i w_i (|z - U_i| + |z + U_i|) identically.
struct RenamedLevels {
    std::vector<double> r;
    std::vector<double> p;
};
RenamedLevels renamed_levels(const Alphabet& alphabet);

// Finite-dimensional data of the time-discretized problem on a nu-point grid
// with step h = T/nu: terminal state is zeta + Phi z.
struct DiscreteProblem {
    Matrix a_d;       // n x n, e^{Ah}
    Matrix b_d;       // n x 1, integral of e^{At} B over one step
    Matrix phi;       // n x nu, column l is A_d^{nu-1-l} B_d
    Vector zeta;      // A_d^nu xi
    Matrix a_d_pow;   // cached A_d^nu (zeta refresh for new initial states)
    double h = 0.0;
    Index nu = 0;
    std::vector<double> r;  // L = 2N signed levels
    std::vector<double> p;  // matching weights
    double box_bound = 1.0;

    Index n() const { return a_d.rows(); }
    Index num_levels() const { return static_cast<Index>(r.size()); }
};

// Exact zero-order-hold discretization; A_d and B_d come jointly from the
// exponential of the augmented matrix [[A, B], [0, 0]] scaled by h.
DiscreteProblem discretize(const Plant& plant, const Alphabet& alphabet, double horizon,
                           Index nu, const Vector& xi);

// Refreshed copy of the problem data for a new initial state (Phi, A_d, B_d
// unchanged; only zeta moves).
Vector zeta_for(const DiscreteProblem& problem, const Vector& xi);

// Forward simulation of x[l+1] = A_d x[l] + B_d u[l]; returns the n x (nu+1)
// state history starting at xi.
Matrix simulate(const DiscreteProblem& problem, const Vector& xi, const Vector& u);

// h * sum_i p_i ||z - r_i||_1, the h-scaled program objective. No box check;
// solver iterates may sit slightly outside the box.
double discrete_objective(const DiscreteProblem& problem, const Vector& z);

}  // namespace soav
