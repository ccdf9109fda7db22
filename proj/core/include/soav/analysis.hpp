#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "soav/cost.hpp"
#include "soav/plant.hpp"
#include "soav/solve_result.hpp"
#include "soav/types.hpp"

namespace soav::analysis {

// Rectangular grid of initial states: counts[d] points between lo[d] and
// hi[d] per dimension, first dimension slowest.
struct SweepGrid {
    Vector lo;
    Vector hi;
    std::vector<Index> counts;

    Index total() const;
    Vector point(Index flat_index) const;
};

struct ValueSample {
    Vector xi;
    std::optional<double> value;  // empty when infeasible or the solve failed
    SolveStatus status = SolveStatus::infeasible;
    int iterations = 0;
};

// Value function over a grid, each point solved by the LP oracle (exact
// vertex optima keep solver tolerance out of the property checks). Points run
// concurrently up to `threads` (0 = SOAV_THREADS env or hardware count);
// output order follows the grid index regardless.
std::vector<ValueSample> value_sweep(const Plant& plant, const Alphabet& alphabet,
                                     double horizon, Index nu, const SweepGrid& grid,
                                     int threads = 0);

struct ConvexityReport {
    bool pass = true;
    double worst_violation = 0.0;
    int trials = 0;
    int skipped = 0;  // pairs without usable feasible endpoints
};

// Samples random pairs from the sweep and checks
// V(l x + (1-l) y) <= l V(x) + (1-l) V(y) + 1e-6, solving midpoints fresh.
ConvexityReport convexity_check(const std::vector<ValueSample>& samples, const Plant& plant,
                                const Alphabet& alphabet, double horizon, Index nu, int trials,
                                std::uint64_t seed);

struct DiscretenessReport {
    double fraction = 0.0;        // samples within snap_tol of a signed level
    double worst_deviation = 0.0;
    std::vector<std::pair<double, int>> occupancy;  // per signed level
    Index samples = 0;
};

DiscretenessReport discreteness_report(const Vector& z, const CostProfile& profile,
                                       double snap_tol = kDefaultSnapTol);

struct RayProbe {
    double feasible_scale = 0.0;    // largest scale found with a feasible solve
    double infeasible_scale = 0.0;  // smallest scale found infeasible
    double value_at_feasible = 0.0;
};

// Bisection along c * direction for the boundary of the reachable set, using
// feasibility of the LP (equivalently V <= 2T) as the membership test.
RayProbe boundary_probe(const Plant& plant, const Alphabet& alphabet, double horizon, Index nu,
                        const Vector& direction, double scale_hi, double tol);

}  // namespace soav::analysis
