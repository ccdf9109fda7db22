#include "soav/cost.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "soav/numerics.hpp"

namespace soav {

CostProfile::CostProfile(std::vector<double> levels, std::vector<double> weights)
    : levels_(std::move(levels)), weights_(std::move(weights)) {
    const int n = static_cast<int>(levels_.size());
    if (n < 1 || weights_.size() != levels_.size()) {
        throw ValidationError("cost profile: need matching nonempty levels and weights");
    }
    for (int i = 0; i < n; ++i) {
        if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) {
            throw ValidationError("cost profile: weights must be positive");
        }
        if (levels_[i] < 0.0 || levels_[i] > 1.0 + 1e-9) {
            throw ValidationError("cost profile: levels must lie in [0, 1] (normalize first)");
        }
        if (i > 0 && levels_[i] < levels_[i - 1]) {
            throw ValidationError("cost profile: levels must be nondecreasing");
        }
    }

    a_.resize(n - 1);
    b_.resize(n - 1);
    double acc = 0.0;
    for (int k = 0; k < n - 1; ++k) {
        acc += weights_[k];
        a_[k] = 2.0 * acc;
    }
    for (int k = 0; k < n - 1; ++k) {
        double tail = 0.0;
        for (int i = k + 1; i < n; ++i) {
            tail += weights_[i] * levels_[i];
        }
        b_[k] = 2.0 * tail;
    }
    plateau_ = 0.0;
    for (int i = 0; i < n; ++i) {
        plateau_ += 2.0 * weights_[i] * levels_[i];
    }

    Alphabet alpha{levels_, weights_};
    RenamedLevels renamed = renamed_levels(alpha);
    r_ = std::move(renamed.r);
    p_ = std::move(renamed.p);

    signed_levels_ = r_;
    for (double& level : signed_levels_) {
        level += 0.0;  // clear negative zero
    }
    std::sort(signed_levels_.begin(), signed_levels_.end());
    signed_levels_.erase(std::unique(signed_levels_.begin(), signed_levels_.end()),
                         signed_levels_.end());
}

CostProfile::CostProfile(const Alphabet& alphabet)
    : CostProfile(alphabet.levels, alphabet.weights) {
    validate(alphabet);
}

double integrand(double u, const CostProfile& profile) {
    if (std::abs(u) > 1.0 + 1e-12) {
        throw DomainError("integrand: |u| exceeds 1, got " + std::to_string(u));
    }
    double value = 0.0;
    for (int i = 0; i < profile.size(); ++i) {
        value += profile.weights()[i] *
                 (std::abs(u - profile.levels()[i]) + std::abs(u + profile.levels()[i]));
    }
    return value;
}

double jmin(const CostProfile& profile, double horizon) {
    if (!(horizon > 0.0)) {
        throw ValidationError("jmin: horizon must be positive");
    }
    return horizon * profile.plateau();
}

double cost(const Vector& z, const CostProfile& profile, double h) {
    if (!(h > 0.0)) {
        throw ValidationError("cost: step must be positive");
    }
    if (z.size() == 0) {
        return 0.0;
    }
    if (z.cwiseAbs().maxCoeff() > 1.0 + 1e-9) {
        throw DomainError("cost: control leaves the unit box by more than 1e-9");
    }
    double total = 0.0;
    const auto& r = profile.r();
    const auto& p = profile.p();
    for (std::size_t i = 0; i < r.size(); ++i) {
        total += p[i] * (z.array() - r[i]).abs().sum();
    }
    return h * total;
}

PointwiseMin pointwise_minimizer(double q, const CostProfile& profile) {
    if (!std::isfinite(q)) {
        throw DomainError("pointwise_minimizer: q must be finite");
    }
    const auto& a = profile.breakpoints();
    const auto& u = profile.levels();
    const int n = profile.size();

    PointwiseMin out;
    if (q == 0.0) {
        out.tie = std::make_pair(-u[0], u[0]);
        out.value = u[0];
        return out;
    }

    const double mag = std::abs(q);
    // Ties at |q| = a_k: minimizer sweeps the segment between consecutive
    // levels; report it and pick the far endpoint.
    for (int k = 0; k < n - 1; ++k) {
        if (mag == a[k]) {
            if (q < 0.0) {
                out.tie = std::make_pair(u[k], u[k + 1]);
                out.value = u[k + 1];
            } else {
                out.tie = std::make_pair(-u[k + 1], -u[k]);
                out.value = -u[k + 1];
            }
            return out;
        }
    }

    // 0 < |q| < a_1 selects U_1; a_j < |q| < a_{j+1} selects U_{j+1};
    // |q| > a_{N-1} saturates at U_N = 1. Sign opposes q.
    int idx = 0;
    while (idx < n - 1 && a[idx] < mag) {
        ++idx;
    }
    out.value = (q > 0.0) ? -u[idx] : u[idx];
    return out;
}

double nearest_level(double u, const CostProfile& profile) {
    const auto& levels = profile.signed_levels();
    double best = levels.front();
    double best_dist = std::abs(u - best);
    for (double level : levels) {
        const double dist = std::abs(u - level);
        if (dist < best_dist) {
            best_dist = dist;
            best = level;
        }
    }
    return best;
}

Vector snap_to_levels(const Vector& z, const CostProfile& profile, double snap_tol) {
    Vector out = z;
    for (Index l = 0; l < z.size(); ++l) {
        const double level = nearest_level(z(l), profile);
        if (std::abs(z(l) - level) <= snap_tol) {
            out(l) = level;
        }
    }
    return out;
}

SwitchReport switch_analysis(const Vector& z, const CostProfile& profile, const Plant& plant,
                             double horizon, double snap_tol, std::optional<double> omega) {
    if (!z.allFinite()) {
        throw DomainError("switch_analysis: control has non-finite entries");
    }
    validate(plant);

    SwitchReport report;
    report.omega = omega ? *omega : numerics::largest_imag_part(plant.a);

    const double n = static_cast<double>(plant.n());
    const double big_n = static_cast<double>(profile.size());
    const double growth = 1.0 + report.omega * horizon / std::numbers::pi;
    const bool zero_floor = profile.u_min() == 0.0;
    report.bound = zero_floor ? 2.0 * n * (big_n - 1.0) * growth
                              : n * (2.0 * big_n - 1.0) * growth;

    const auto& levels = profile.signed_levels();
    report.histogram.reserve(levels.size());
    for (double level : levels) {
        report.histogram.emplace_back(level, 0);
    }

    std::vector<double> snapped(static_cast<std::size_t>(z.size()));
    for (Index l = 0; l < z.size(); ++l) {
        const double level = nearest_level(z(l), profile);
        snapped[static_cast<std::size_t>(l)] = level;
        if (std::abs(z(l) - level) > snap_tol) {
            ++report.off_alphabet;
        } else {
            const auto it = std::lower_bound(levels.begin(), levels.end(), level);
            report.histogram[static_cast<std::size_t>(it - levels.begin())].second += 1;
        }
    }
    for (Index l = 1; l < z.size(); ++l) {
        if (snapped[static_cast<std::size_t>(l)] != snapped[static_cast<std::size_t>(l - 1)]) {
            ++report.count;
            report.switch_times.push_back(l);
        }
    }
    return report;
}

}  // namespace soav
