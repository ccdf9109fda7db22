#include "soav/mpc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "soav/lp.hpp"

namespace soav {

namespace {

bool on_grid(double t, double h) {
    const double steps = t / h;
    return std::abs(steps - std::round(steps)) <= 1e-9 * std::max(1.0, std::abs(steps));
}

Index grid_index(double t, double h) {
    return static_cast<Index>(std::llround(t / h));
}

// Shift the per-sample blocks left by the applied count and pad with the
// last value; the terminal block stays (the solver resets y there anyway).
admm::WarmStart shifted_warm_start(const admm::AdmmState& state, Index shift, Index nu,
                                   Index levels) {
    admm::WarmStart warm{state.y, state.w};
    const Index clamped = std::min(shift, nu);
    for (Index i = 0; i <= levels; ++i) {
        const Index off = i * nu;
        for (Vector* vec : {&warm.y, &warm.w}) {
            auto block = vec->segment(off, nu);
            const Vector moved = block;
            block.head(nu - clamped) = moved.tail(nu - clamped);
            block.tail(clamped).setConstant(moved(nu - 1));
        }
    }
    return warm;
}

}  // namespace

Schedule Schedule::with_horizon(std::vector<double> instants_after_zero, double horizon) {
    Schedule schedule;
    schedule.horizon = horizon;
    schedule.instants.push_back(0.0);
    for (double t : instants_after_zero) {
        schedule.instants.push_back(t);
    }
    return schedule;
}

double Schedule::min_gap() const {
    double gap = horizon;
    for (std::size_t k = 0; k + 1 < instants.size(); ++k) {
        gap = std::min(gap, instants[k + 1] - instants[k]);
    }
    return gap;
}

void Schedule::validate(double h, double end_time) const {
    if (!(horizon > 0.0)) {
        throw ValidationError("schedule: horizon must be positive");
    }
    if (instants.empty() || instants.front() != 0.0) {
        throw ValidationError("schedule: first sampling instant must be 0");
    }
    for (std::size_t k = 0; k < instants.size(); ++k) {
        if (!on_grid(instants[k], h)) {
            throw ValidationError("schedule: instant " + std::to_string(instants[k]) +
                                  " is not a multiple of the grid step " + std::to_string(h));
        }
        if (k > 0) {
            const double gap = instants[k] - instants[k - 1];
            if (!(gap > 0.0)) {
                throw ValidationError("schedule: instants must be strictly increasing");
            }
            if (gap > horizon + 1e-9) {
                throw ValidationError("schedule: gap " + std::to_string(gap) +
                                      " exceeds the horizon " + std::to_string(horizon));
            }
        }
    }
    if (!on_grid(end_time, h)) {
        throw ValidationError("schedule: end time is not a multiple of the grid step");
    }
    // The last solve must cover the remaining time.
    double last_before_end = 0.0;
    for (double t : instants) {
        if (t < end_time) {
            last_before_end = t;
        }
    }
    if (end_time - last_before_end > horizon + 1e-9) {
        throw ValidationError("schedule: no sampling instant within one horizon of the end");
    }
}

Trajectory run_mpc(const Plant& plant, const Alphabet& alphabet, const Schedule& schedule,
                   const Vector& xi, Index nu, double end_time, SolverChoice solver,
                   const admm::AdmmParams& params) {
    if (end_time < 0.0) {
        throw ValidationError("run_mpc: end time must be nonnegative");
    }
    DiscreteProblem problem = discretize(plant, alphabet, schedule.horizon, nu, xi);
    schedule.validate(problem.h, end_time);

    const Index total = end_time > 0.0 ? grid_index(end_time, problem.h) : 0;
    const Index n = problem.n();

    Trajectory traj;
    traj.h = problem.h;
    traj.time.resize(static_cast<std::size_t>(total) + 1);
    for (Index l = 0; l <= total; ++l) {
        traj.time[static_cast<std::size_t>(l)] = static_cast<double>(l) * problem.h;
    }
    traj.u = Vector::Zero(total);
    traj.x = Matrix::Zero(n, total + 1);
    traj.x.col(0) = xi;
    traj.value = Vector::Constant(total + 1, std::numeric_limits<double>::quiet_NaN());

    admm::AdmmSolver admm_solver(problem);
    admm::AdmmState carry;
    bool have_carry = false;
    Index applied_prev = 0;

    double previous_value = std::numeric_limits<double>::quiet_NaN();
    Vector x_now = xi;

    for (std::size_t k = 0; k < schedule.instants.size(); ++k) {
        const double t_k = schedule.instants[k];
        if (t_k > end_time || (t_k == end_time && end_time > 0.0)) {
            break;
        }
        const double t_next = (k + 1 < schedule.instants.size())
                                  ? std::min(schedule.instants[k + 1], end_time)
                                  : end_time;
        const Index start = grid_index(t_k, problem.h);
        const Index stop = grid_index(t_next, problem.h);

        const Vector zeta = zeta_for(problem, x_now);
        SolveResult result;
        if (solver == SolverChoice::admm) {
            admm::AdmmParams step_params = params;
            if (have_carry) {
                step_params.warm_start =
                    shifted_warm_start(carry, applied_prev, nu, problem.num_levels());
            }
            result = admm_solver.solve_from(zeta, step_params, &carry);
            have_carry = true;
        } else {
            DiscreteProblem step_problem = problem;
            step_problem.zeta = zeta;
            result = lp::solve_reference(step_problem);
        }

        traj.steps.push_back(StepDiagnostics{t_k, result.objective, result.terminal_residual,
                                             result.iterations, result.status});
        if (!result.converged) {
            traj.aborted = true;
            traj.aborted_at = t_k;
            traj.samples_filled = start;
            return traj;
        }

        if (!std::isnan(previous_value)) {
            const double increase = result.objective - previous_value;
            traj.worst_value_increase = std::max(traj.worst_value_increase, increase);
            if (increase > 1e-6) {
                traj.value_monotone = false;
            }
        }
        previous_value = result.objective;

        for (Index l = start; l <= stop && l <= total; ++l) {
            traj.value(l) = result.objective;
        }
        for (Index l = start; l < stop; ++l) {
            const double u_l = result.z(l - start);
            traj.u(l) = u_l;
            x_now = problem.a_d * x_now + problem.b_d * u_l;
            traj.x.col(l + 1) = x_now;
        }
        applied_prev = stop - start;
        traj.samples_filled = stop;

        if (end_time == 0.0) {
            break;  // degenerate run records V at t = 0 only
        }
    }
    return traj;
}

}  // namespace soav
