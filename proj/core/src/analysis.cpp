#include "soav/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <random>
#include <string>
#include <thread>

#include "soav/lp.hpp"

namespace soav::analysis {

namespace {

int resolve_threads(int requested) {
    if (requested > 0) {
        return requested;
    }
    if (const char* env = std::getenv("SOAV_THREADS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) {
            return parsed;
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

ValueSample solve_point(const DiscreteProblem& base, const Vector& xi) {
    DiscreteProblem problem = base;
    problem.zeta = zeta_for(base, xi);
    ValueSample sample;
    sample.xi = xi;
    const SolveResult result = lp::solve_reference(problem);
    sample.status = result.status;
    sample.iterations = result.iterations;
    if (result.converged) {
        sample.value = result.objective;
    }
    return sample;
}

}  // namespace

Index SweepGrid::total() const {
    Index count = 1;
    for (Index c : counts) {
        count *= c;
    }
    return count;
}

Vector SweepGrid::point(Index flat_index) const {
    const Index dims = static_cast<Index>(counts.size());
    Vector xi(dims);
    Index rest = flat_index;
    for (Index d = dims - 1; d >= 0; --d) {
        const Index c = counts[static_cast<std::size_t>(d)];
        const Index idx = rest % c;
        rest /= c;
        xi(d) = (c == 1) ? lo(d)
                         : lo(d) + (hi(d) - lo(d)) * static_cast<double>(idx) /
                               static_cast<double>(c - 1);
    }
    return xi;
}

std::vector<ValueSample> value_sweep(const Plant& plant, const Alphabet& alphabet,
                                     double horizon, Index nu, const SweepGrid& grid,
                                     int threads) {
    const Index dims = static_cast<Index>(grid.counts.size());
    if (grid.lo.size() != dims || grid.hi.size() != dims || dims != plant.n()) {
        throw DimensionError("value_sweep: grid dimensions must match the plant state");
    }
    for (Index d = 0; d < dims; ++d) {
        if (grid.counts[static_cast<std::size_t>(d)] < 1) {
            throw ValidationError("value_sweep: grid counts must be positive");
        }
        if (grid.lo(d) > grid.hi(d)) {
            throw ValidationError("value_sweep: grid lower corner exceeds upper corner");
        }
    }

    const DiscreteProblem base =
        discretize(plant, alphabet, horizon, nu, Vector::Zero(plant.n()));
    const Index total = grid.total();
    std::vector<ValueSample> samples(static_cast<std::size_t>(total));

    const int workers = std::min<int>(resolve_threads(threads), static_cast<int>(total));
    if (workers <= 1) {
        for (Index i = 0; i < total; ++i) {
            samples[static_cast<std::size_t>(i)] = solve_point(base, grid.point(i));
        }
        return samples;
    }

    std::atomic<Index> next{0};
    auto worker = [&]() {
        while (true) {
            const Index i = next.fetch_add(1);
            if (i >= total) {
                return;
            }
            samples[static_cast<std::size_t>(i)] = solve_point(base, grid.point(i));
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back(worker);
    }
    for (auto& thread : pool) {
        thread.join();
    }
    return samples;
}

ConvexityReport convexity_check(const std::vector<ValueSample>& samples, const Plant& plant,
                                const Alphabet& alphabet, double horizon, Index nu, int trials,
                                std::uint64_t seed) {
    std::vector<const ValueSample*> feasible;
    for (const auto& sample : samples) {
        if (sample.value) {
            feasible.push_back(&sample);
        }
    }
    ConvexityReport report;
    if (feasible.size() < 3) {
        throw ValidationError("convexity_check: need at least 3 feasible samples, got " +
                              std::to_string(feasible.size()));
    }

    const DiscreteProblem base =
        discretize(plant, alphabet, horizon, nu, Vector::Zero(plant.n()));
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, feasible.size() - 1);
    std::uniform_real_distribution<double> unit(0.05, 0.95);

    for (int t = 0; t < trials; ++t) {
        const ValueSample& a = *feasible[pick(rng)];
        const ValueSample& b = *feasible[pick(rng)];
        const double lambda = unit(rng);
        const Vector mid = lambda * a.xi + (1.0 - lambda) * b.xi;

        const ValueSample mid_sample = solve_point(base, mid);
        if (!mid_sample.value) {
            ++report.skipped;  // convex hull of feasible points should be feasible
            report.pass = false;
            continue;
        }
        ++report.trials;
        const double bound = lambda * *a.value + (1.0 - lambda) * *b.value;
        const double violation = *mid_sample.value - bound;
        report.worst_violation = std::max(report.worst_violation, violation);
        if (violation > 1e-6) {
            report.pass = false;
        }
    }
    return report;
}

DiscretenessReport discreteness_report(const Vector& z, const CostProfile& profile,
                                       double snap_tol) {
    DiscretenessReport report;
    report.samples = z.size();
    const auto& levels = profile.signed_levels();
    report.occupancy.reserve(levels.size());
    for (double level : levels) {
        report.occupancy.emplace_back(level, 0);
    }
    if (z.size() == 0) {
        report.fraction = 1.0;
        return report;
    }

    Index on_level = 0;
    for (Index l = 0; l < z.size(); ++l) {
        const double level = nearest_level(z(l), profile);
        const double deviation = std::abs(z(l) - level);
        report.worst_deviation = std::max(report.worst_deviation, deviation);
        if (deviation <= snap_tol) {
            ++on_level;
            const auto it = std::lower_bound(levels.begin(), levels.end(), level);
            report.occupancy[static_cast<std::size_t>(it - levels.begin())].second += 1;
        }
    }
    report.fraction = static_cast<double>(on_level) / static_cast<double>(z.size());
    return report;
}

RayProbe boundary_probe(const Plant& plant, const Alphabet& alphabet, double horizon, Index nu,
                        const Vector& direction, double scale_hi, double tol) {
    if (direction.size() != plant.n() || direction.norm() == 0.0) {
        throw ValidationError("boundary_probe: direction must be a nonzero state vector");
    }
    if (!(scale_hi > 0.0) || !(tol > 0.0)) {
        throw ValidationError("boundary_probe: scale_hi and tol must be positive");
    }

    const DiscreteProblem base =
        discretize(plant, alphabet, horizon, nu, Vector::Zero(plant.n()));
    const auto feasible_value = [&](double scale) -> std::optional<double> {
        const ValueSample sample = solve_point(base, scale * direction);
        return sample.value;
    };

    RayProbe probe;
    probe.value_at_feasible = feasible_value(0.0).value();  // origin is always reachable
    auto hi_value = feasible_value(scale_hi);
    if (hi_value) {
        // Entire ray segment feasible: report it and quit.
        probe.feasible_scale = scale_hi;
        probe.infeasible_scale = scale_hi;
        probe.value_at_feasible = *hi_value;
        return probe;
    }
    double lo = 0.0;
    double hi = scale_hi;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const auto value = feasible_value(mid);
        if (value) {
            lo = mid;
            probe.value_at_feasible = *value;
        } else {
            hi = mid;
        }
    }
    probe.feasible_scale = lo;
    probe.infeasible_scale = hi;
    return probe;
}

}  // namespace soav::analysis
