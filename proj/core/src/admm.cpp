#include "soav/admm.hpp"

#include <cmath>
#include <string>

namespace soav::admm {

namespace {

Matrix gram_matrix(const DiscreteProblem& pb) {
    const Index nu = pb.nu;
    const double diag = static_cast<double>(pb.num_levels() + 1);
    Matrix gram = pb.phi.transpose() * pb.phi;
    gram.diagonal().array() += diag;
    return gram;
}

struct BlockLayout {
    Index nu;
    Index levels;  // L
    Index n;

    Index stacked() const { return (levels + 1) * nu + n; }
    Index block_offset(Index i) const { return i * nu; }
    Index terminal_offset() const { return (levels + 1) * nu; }
};

BlockLayout layout_of(const DiscreteProblem& pb) {
    return BlockLayout{pb.nu, pb.num_levels(), pb.n()};
}

}  // namespace

Vector prox_shifted_l1(const Vector& x, double r, double tau) {
    if (!(tau > 0.0)) {
        throw ValidationError("prox_shifted_l1: threshold must be positive");
    }
    Vector out(x.size());
    for (Index l = 0; l < x.size(); ++l) {
        const double d = x(l) - r;
        const double mag = std::abs(d) - tau;
        out(l) = r + (mag > 0.0 ? (d > 0.0 ? mag : -mag) : 0.0);
    }
    return out;
}

Vector project_box(const Vector& x) {
    return x.cwiseMax(-1.0).cwiseMin(1.0);
}

Vector project_terminal(const Vector& x, const Vector& zeta) {
    (void)x;
    return -zeta;
}

Vector z_update(const Vector& y, const Vector& w, const DiscreteProblem& problem,
                const numerics::SpdFactorization& gram) {
    const BlockLayout lay = layout_of(problem);
    if (y.size() != lay.stacked() || w.size() != lay.stacked()) {
        throw DimensionError("z_update: stacked vector size " + std::to_string(y.size()) +
                             ", expected " + std::to_string(lay.stacked()));
    }
    Vector v = Vector::Zero(lay.nu);
    for (Index i = 0; i <= lay.levels; ++i) {
        v += y.segment(lay.block_offset(i), lay.nu) - w.segment(lay.block_offset(i), lay.nu);
    }
    v += problem.phi.transpose() *
         (y.segment(lay.terminal_offset(), lay.n) - w.segment(lay.terminal_offset(), lay.n));
    return gram.solve(v);
}

AdmmSolver::AdmmSolver(DiscreteProblem problem)
    : problem_(std::move(problem)), gram_(gram_matrix(problem_)) {}

Index AdmmSolver::stacked_size() const {
    return layout_of(problem_).stacked();
}

SolveResult AdmmSolver::solve(const AdmmParams& params, AdmmState* final_state) const {
    return solve_from(problem_.zeta, params, final_state);
}

SolveResult AdmmSolver::solve_from(const Vector& zeta, const AdmmParams& params,
                                   AdmmState* final_state) const {
    if (!(params.gamma > 0.0) || !(params.eps_primal > 0.0) || !(params.eps_dual > 0.0) ||
        params.max_iter < 1) {
        throw ValidationError("admm: gamma/tolerances must be positive, max_iter >= 1");
    }
    const BlockLayout lay = layout_of(problem_);
    if (zeta.size() != lay.n) {
        throw DimensionError("admm: zeta has size " + std::to_string(zeta.size()) +
                             ", expected " + std::to_string(lay.n));
    }

    AdmmState state;
    if (params.warm_start) {
        if (params.warm_start->y.size() != lay.stacked() ||
            params.warm_start->w.size() != lay.stacked()) {
            throw DimensionError("admm: warm start shape mismatch");
        }
        state.y = params.warm_start->y;
        state.w = params.warm_start->w;
    } else {
        state.y = Vector::Zero(lay.stacked());
        state.w = Vector::Zero(lay.stacked());
    }
    // Start feasible in the terminal block.
    state.y.segment(lay.terminal_offset(), lay.n) = -zeta;
    state.z = Vector::Zero(lay.nu);
    state.residual_history.reserve(static_cast<std::size_t>(params.max_iter));

    const double primal_tol = params.eps_primal * std::sqrt(static_cast<double>(lay.stacked()));
    const double dual_tol = params.eps_dual * std::sqrt(static_cast<double>(lay.nu));

    Vector psi_z(lay.stacked());
    Vector y_old(lay.stacked());
    SolveStatus status = SolveStatus::max_iter;
    int used = params.max_iter;

    for (int j = 0; j < params.max_iter; ++j) {
        state.z = z_update(state.y, state.w, problem_, gram_);
        if (!state.z.allFinite()) {
            throw NumericalError("admm: non-finite iterate at iteration " + std::to_string(j));
        }

        for (Index i = 0; i <= lay.levels; ++i) {
            psi_z.segment(lay.block_offset(i), lay.nu) = state.z;
        }
        psi_z.segment(lay.terminal_offset(), lay.n) = problem_.phi * state.z;

        y_old = state.y;
        for (Index i = 0; i < lay.levels; ++i) {
            const Index off = lay.block_offset(i);
            state.y.segment(off, lay.nu) =
                prox_shifted_l1(psi_z.segment(off, lay.nu) + state.w.segment(off, lay.nu),
                                problem_.r[static_cast<std::size_t>(i)],
                                params.gamma * problem_.p[static_cast<std::size_t>(i)]);
        }
        {
            const Index off = lay.block_offset(lay.levels);
            state.y.segment(off, lay.nu) =
                project_box(psi_z.segment(off, lay.nu) + state.w.segment(off, lay.nu));
        }
        state.y.segment(lay.terminal_offset(), lay.n) = -zeta;

        state.w += psi_z - state.y;

        const double primal = (psi_z - state.y).norm();
        Vector dual_vec = Vector::Zero(lay.nu);
        for (Index i = 0; i <= lay.levels; ++i) {
            dual_vec += state.y.segment(lay.block_offset(i), lay.nu) -
                        y_old.segment(lay.block_offset(i), lay.nu);
        }
        dual_vec += problem_.phi.transpose() * (state.y.segment(lay.terminal_offset(), lay.n) -
                                                y_old.segment(lay.terminal_offset(), lay.n));
        const double dual = dual_vec.norm() / params.gamma;
        state.residual_history.emplace_back(primal, dual);
        state.iteration = j + 1;

        if (primal <= primal_tol && dual <= dual_tol) {
            status = SolveStatus::converged;
            used = j + 1;
            break;
        }
    }

    if (status == SolveStatus::max_iter) {
        used = params.max_iter;
        // Suspect infeasibility when the primal residual sat above
        // 1e3 * eps_primal through the final quarter without real progress.
        const std::size_t total = state.residual_history.size();
        const std::size_t window = total / 4;
        if (window > 0) {
            const double threshold = 1e3 * primal_tol;
            bool above = true;
            for (std::size_t j = total - window; j < total; ++j) {
                if (state.residual_history[j].first <= threshold) {
                    above = false;
                    break;
                }
            }
            const double first = state.residual_history[total - window].first;
            const double last = state.residual_history[total - 1].first;
            if (above && first > 0.0 && (first - last) < 0.1 * first) {
                status = SolveStatus::infeasible_suspected;
            }
        }
    }

    SolveResult result;
    result.z = state.z;
    result.objective = discrete_objective(problem_, state.z);
    result.terminal_residual = (problem_.phi * state.z + zeta).norm();
    result.iterations = used;
    result.converged = status == SolveStatus::converged;
    result.status = status;
    if (final_state != nullptr) {
        *final_state = std::move(state);
    }
    return result;
}

SolveResult solve(const DiscreteProblem& problem, const AdmmParams& params) {
    return AdmmSolver(problem).solve(params);
}

}  // namespace soav::admm
