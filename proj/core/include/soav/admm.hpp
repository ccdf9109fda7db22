#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "soav/numerics.hpp"
#include "soav/plant.hpp"
#include "soav/solve_result.hpp"
#include "soav/types.hpp"

namespace soav::admm {

// Previous iterates (y, w) used to resume a solve near a related solution.
struct WarmStart {
    Vector y;
    Vector w;
};

struct AdmmParams {
    double gamma = 1.0;        // proximal scale; speed knob, not correctness
    int max_iter = 100000;
    double eps_primal = 1e-6;  // scaled by sqrt(N2)
    double eps_dual = 1e-6;    // scaled by sqrt(N1)
    std::optional<WarmStart> warm_start;
};

struct AdmmState {
    Vector z;
    Vector y;  // L+2 stacked blocks: L shifted-l1 blocks, box block, terminal block
    Vector w;  // same shape as y
    int iteration = 0;
    std::vector<std::pair<double, double>> residual_history;  // (primal, dual)
};

// Entrywise r + soft(x - r, tau): the proximity operator of tau ||. - r||_1.
Vector prox_shifted_l1(const Vector& x, double r, double tau);

// Projection onto the unit infinity-norm ball.
Vector project_box(const Vector& x);

// Projection onto the singleton {-zeta}; ignores x.
Vector project_terminal(const Vector& x, const Vector& zeta);

// Exact minimizer of ||y - Psi z - w||^2 via the cached Cholesky factor of
// the Gram matrix (L+1) I + Phi^T Phi.
Vector z_update(const Vector& y, const Vector& w, const DiscreteProblem& problem,
                const numerics::SpdFactorization& gram);

// ADMM solver for the discretized program; the Gram factorization is built
// once per (Phi, L) and shared across solves with different initial states.
class AdmmSolver {
  public:
    explicit AdmmSolver(DiscreteProblem problem);

    SolveResult solve(const AdmmParams& params, AdmmState* final_state = nullptr) const;

    // Same problem data with a fresh terminal target (MPC path).
    SolveResult solve_from(const Vector& zeta, const AdmmParams& params,
                           AdmmState* final_state = nullptr) const;

    const DiscreteProblem& problem() const { return problem_; }
    Index stacked_size() const;  // N2 = (L+1) nu + n

  private:
    DiscreteProblem problem_;
    numerics::SpdFactorization gram_;
};

SolveResult solve(const DiscreteProblem& problem, const AdmmParams& params);

}  // namespace soav::admm
