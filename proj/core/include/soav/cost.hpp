#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "soav/plant.hpp"
#include "soav/types.hpp"

namespace soav {

// Per-sample cost data for L(u) = sum_i w_i (|u - U_i| + |u + U_i|):
// breakpoints a_k = 2 sum_{i<=k} w_i, offsets b_k = 2 sum_{i>k} w_i U_i, and
// the plateau value L(u) = 2 sum_i w_i U_i attained on [-U_1, U_1].
class CostProfile {
  public:
    CostProfile(std::vector<double> levels, std::vector<double> weights);
    explicit CostProfile(const Alphabet& alphabet);

    int size() const { return static_cast<int>(levels_.size()); }
    double u_min() const { return levels_.front(); }
    const std::vector<double>& levels() const { return levels_; }
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<double>& breakpoints() const { return a_; }
    const std::vector<double>& offsets() const { return b_; }
    double plateau() const { return plateau_; }
    const std::vector<double>& r() const { return r_; }
    const std::vector<double>& p() const { return p_; }

    // Distinct signed levels {-U_N, ..., U_N}, ascending, zero deduplicated.
    const std::vector<double>& signed_levels() const { return signed_levels_; }

  private:
    std::vector<double> levels_;
    std::vector<double> weights_;
    std::vector<double> a_;
    std::vector<double> b_;
    std::vector<double> r_;
    std::vector<double> p_;
    std::vector<double> signed_levels_;
    double plateau_ = 0.0;
};

// The integrand L(u); |u| must not exceed 1.
double integrand(double u, const CostProfile& profile);

// Global floor 2 T sum_i w_i U_i of the cost over box-feasible controls.
double jmin(const CostProfile& profile, double horizon);

// Discrete cost h * sum_i p_i ||z - r_i||_1 of a control vector within the
// unit box (tolerance 1e-9 on the bound).
double cost(const Vector& z, const CostProfile& profile, double h);

// Minimizer of L(u) + q u over |u| <= 1. On the singular set (q = 0 or
// q = ±a_k) the minimizer is an interval; `tie` carries it and `value` holds
// the deterministic representative (the endpoint of larger magnitude toward
// the newly reachable level).
struct PointwiseMin {
    double value = 0.0;
    std::optional<std::pair<double, double>> tie;
};
PointwiseMin pointwise_minimizer(double q, const CostProfile& profile);

// Signed level nearest to u.
double nearest_level(double u, const CostProfile& profile);

// Entries within snap_tol of a signed level are replaced by it; others are
// kept as-is.
Vector snap_to_levels(const Vector& z, const CostProfile& profile, double snap_tol);

constexpr double kDefaultSnapTol = 1e-3;

struct SwitchReport {
    int count = 0;          // level changes of the snapped sequence
    double bound = 0.0;     // n(2N-1)(1+Omega T/pi), or 2n(N-1)(...) when U_min = 0
    double omega = 0.0;     // largest imaginary part of the eigenvalues of A
    std::vector<Index> switch_times;                  // indices l with a change between l-1 and l
    std::vector<std::pair<double, int>> histogram;    // occupancy per signed level
    int off_alphabet = 0;   // entries farther than snap_tol from every level
};

// Snaps z to the alphabet, counts switches, and evaluates the switching
// bound. Omega comes from the eigenvalues of A unless supplied.
SwitchReport switch_analysis(const Vector& z, const CostProfile& profile, const Plant& plant,
                             double horizon, double snap_tol = kDefaultSnapTol,
                             std::optional<double> omega = std::nullopt);

}  // namespace soav
