#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "soav/analysis.hpp"
#include "soav/mpc.hpp"
#include "soav/plant.hpp"
#include "soav/types.hpp"

namespace soav::io {

// Decimal text with 12 significant digits; byte-stable for equal doubles.
std::string format_number(double value);

// Header t,u,x1,...,xn,V; one row per grid point, the value column repeated
// within a sampling interval. An aborted run keeps the completed rows and
// appends a trailing '# aborted at t=...' comment row.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

// Same layout for an open-loop solution: states simulated from x0 under u,
// value column pinned to the objective.
void write_open_loop_csv(std::ostream& out, const DiscreteProblem& problem, const Vector& xi,
                         const Vector& u, double objective);

// Header x1,...,xn,V,feasible; rows ordered by grid index; infeasible points
// carry V = nan and feasible = 0.
void write_sweep_csv(std::ostream& out, const std::vector<analysis::ValueSample>& samples);

}  // namespace soav::io
