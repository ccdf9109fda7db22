#pragma once

#include <limits>
#include <vector>

#include "soav/admm.hpp"
#include "soav/plant.hpp"
#include "soav/solve_result.hpp"
#include "soav/types.hpp"

namespace soav {

// Sampling instants 0 = t_0 < t_1 < ... with gaps in (0, T]; every instant
// must land on the discretization grid.
struct Schedule {
    std::vector<double> instants;  // leading 0 included
    double horizon = 0.0;          // T

    static Schedule with_horizon(std::vector<double> instants_after_zero, double horizon);

    double min_gap() const;
    void validate(double h, double end_time) const;
};

enum class SolverChoice { admm, lp };

struct StepDiagnostics {
    double t = 0.0;
    double objective = std::numeric_limits<double>::quiet_NaN();  // V at this instant
    double terminal_residual = std::numeric_limits<double>::quiet_NaN();
    int iterations = 0;
    SolveStatus status = SolveStatus::max_iter;
};

struct Trajectory {
    double h = 0.0;
    std::vector<double> time;  // grid instants, size samples+1
    Vector u;                  // applied control, size samples
    Matrix x;                  // n x (samples+1)
    Vector value;              // V reading per grid point (repeated within an interval)
    std::vector<StepDiagnostics> steps;
    bool aborted = false;
    double aborted_at = std::numeric_limits<double>::quiet_NaN();
    Index samples_filled = 0;  // applied samples present when aborted early
    bool value_monotone = true;
    double worst_value_increase = 0.0;
};

// Receding-horizon loop: at each sampling instant solves the horizon-T
// problem from the current state, applies the head of the optimal control
// until the next instant, and propagates the state with (A_d, B_d). ADMM
// warm starts reuse the previous (y, w) shifted by the applied sample count.
Trajectory run_mpc(const Plant& plant, const Alphabet& alphabet, const Schedule& schedule,
                   const Vector& xi, Index nu, double end_time, SolverChoice solver,
                   const admm::AdmmParams& params);

}  // namespace soav
