#include "soav/lp.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace soav::lp {

namespace {

constexpr double kCostTol = 1e-9;    // reduced-cost threshold
constexpr double kPivotTol = 1e-10;  // entries below this never pivot
constexpr double kRatioTie = 1e-12;
constexpr double kPhase1Tol = 1e-8;

// Dense tableau simplex over bounded variables. Nonbasic variables rest on a
// bound; the tableau rows hold B^{-1} A for all columns (artificials last).
class Tableau {
  public:
    Tableau(const StandardLp& lp)
        : m_(lp.aeq.rows()),
          nv_(lp.c.size()),
          ncols_(lp.c.size() + lp.aeq.rows()),
          lower_(ncols_),
          upper_(ncols_),
          cost_(Vector::Zero(ncols_)),
          x_(Vector::Zero(ncols_)),
          basis_(static_cast<std::size_t>(m_)),
          is_basic_(static_cast<std::size_t>(ncols_), false),
          at_upper_(static_cast<std::size_t>(ncols_), false) {
        lower_.head(nv_) = lp.lower;
        upper_.head(nv_) = lp.upper;
        lower_.tail(m_).setZero();
        upper_.tail(m_).setConstant(kInfinity);
        cost_.head(nv_) = lp.c;

        tab_.resize(m_, ncols_);
        tab_.leftCols(nv_) = lp.aeq;
        tab_.rightCols(m_).setIdentity();

        // Structural variables start on their lower bound; artificials absorb
        // the residual, with row signs flipped so they start nonnegative.
        for (Index j = 0; j < nv_; ++j) {
            x_(j) = lower_(j);
        }
        Vector resid = lp.beq - lp.aeq * x_.head(nv_);
        for (Index i = 0; i < m_; ++i) {
            if (resid(i) < 0.0) {
                tab_.row(i) = -tab_.row(i);
                resid(i) = -resid(i);
                tab_(i, nv_ + i) = 1.0;
            }
            basis_[static_cast<std::size_t>(i)] = nv_ + i;
            is_basic_[static_cast<std::size_t>(nv_ + i)] = true;
            x_(nv_ + i) = resid(i);
        }
    }

    // Runs one phase to optimality. cost row `d` must match `phase_cost`.
    // Returns false if the phase detected unboundedness.
    bool optimize(const Vector& phase_cost, Vector& d, bool exclude_artificials,
                  int& iterations, bool track_monotone, bool* monotone) {
        bool bland = false;
        int stall = 0;
        double last_obj = objective(phase_cost);
        const int stall_limit = 200 + static_cast<int>(2 * m_);
        const long cap = 2000 + 40L * (m_ + ncols_);

        for (long iter = 0;; ++iter) {
            if (iter > cap) {
                throw std::runtime_error(
                    "simplex: pivot budget exceeded even under Bland's rule (internal error)");
            }
            const Index limit = exclude_artificials ? nv_ : ncols_;
            Index enter = -1;
            int dir = 0;
            double best_score = kCostTol;
            for (Index j = 0; j < limit; ++j) {
                if (is_basic_[static_cast<std::size_t>(j)]) {
                    continue;
                }
                if (lower_(j) == upper_(j)) {
                    continue;  // pinned
                }
                double score = 0.0;
                int cand_dir = 0;
                if (!at_upper_[static_cast<std::size_t>(j)] && d(j) < -kCostTol) {
                    score = -d(j);
                    cand_dir = 1;
                } else if (at_upper_[static_cast<std::size_t>(j)] && d(j) > kCostTol) {
                    score = d(j);
                    cand_dir = -1;
                }
                if (cand_dir == 0) {
                    continue;
                }
                if (bland) {
                    enter = j;
                    dir = cand_dir;
                    break;
                }
                if (score > best_score) {
                    best_score = score;
                    enter = j;
                    dir = cand_dir;
                }
            }
            if (enter < 0) {
                return true;  // phase optimal
            }

            // Ratio test: first limit is the entering variable's own span.
            double delta = upper_(enter) - lower_(enter);
            Index leave_row = -1;
            bool leave_to_upper = false;
            double leave_pivot = 0.0;
            for (Index i = 0; i < m_; ++i) {
                const double g = tab_(i, enter);
                if (std::abs(g) <= kPivotTol) {
                    continue;
                }
                const double rate = -static_cast<double>(dir) * g;
                const Index bi = basis_[static_cast<std::size_t>(i)];
                double room;
                bool to_upper;
                if (rate < 0.0) {
                    room = x_(bi) - lower_(bi);
                    to_upper = false;
                } else {
                    if (upper_(bi) == kInfinity) {
                        continue;
                    }
                    room = upper_(bi) - x_(bi);
                    to_upper = true;
                }
                double step = room / std::abs(rate);
                if (step < 0.0) {
                    step = 0.0;  // tiny bound violations from roundoff
                }
                bool take = false;
                if (step < delta - kRatioTie) {
                    take = true;
                } else if (step <= delta + kRatioTie && leave_row >= 0) {
                    if (bland) {
                        take = basis_[static_cast<std::size_t>(i)] <
                               basis_[static_cast<std::size_t>(leave_row)];
                    } else {
                        take = std::abs(g) > std::abs(leave_pivot);
                    }
                } else if (step <= delta + kRatioTie && leave_row < 0 &&
                           step < upper_(enter) - lower_(enter) - kRatioTie) {
                    take = true;
                } else if (step <= delta + kRatioTie && leave_row < 0 &&
                           upper_(enter) == kInfinity) {
                    take = true;
                }
                if (take) {
                    delta = std::min(delta, step);
                    leave_row = i;
                    leave_to_upper = to_upper;
                    leave_pivot = g;
                }
            }

            if (leave_row < 0) {
                if (upper_(enter) == kInfinity) {
                    return false;  // unbounded ray
                }
                // Bound flip: jump to the opposite bound, no basis change.
                apply_step(enter, dir, delta);
                at_upper_[static_cast<std::size_t>(enter)] =
                    !at_upper_[static_cast<std::size_t>(enter)];
                x_(enter) = at_upper_[static_cast<std::size_t>(enter)] ? upper_(enter)
                                                                       : lower_(enter);
            } else {
                apply_step(enter, dir, delta);
                const Index leaving = basis_[static_cast<std::size_t>(leave_row)];
                x_(leaving) = leave_to_upper ? upper_(leaving) : lower_(leaving);
                at_upper_[static_cast<std::size_t>(leaving)] = leave_to_upper;
                is_basic_[static_cast<std::size_t>(leaving)] = false;
                is_basic_[static_cast<std::size_t>(enter)] = true;
                basis_[static_cast<std::size_t>(leave_row)] = enter;
                pivot(leave_row, enter, d);
            }
            ++iterations;

            const double obj = objective(phase_cost);
            if (track_monotone && obj > last_obj + 1e-7 * (1.0 + std::abs(last_obj))) {
                *monotone = false;
            }
            if (obj < last_obj - 1e-12 * (1.0 + std::abs(last_obj))) {
                stall = 0;
            } else {
                ++stall;
                if (stall > stall_limit) {
                    bland = true;  // anti-cycling fallback
                }
            }
            last_obj = obj;
        }
    }

    double objective(const Vector& phase_cost) const { return phase_cost.dot(x_); }

    Vector reduced_costs(const Vector& phase_cost) const {
        Vector d = phase_cost;
        for (Index i = 0; i < m_; ++i) {
            const double cb = phase_cost(basis_[static_cast<std::size_t>(i)]);
            if (cb != 0.0) {
                d.noalias() -= cb * tab_.row(i).transpose();
            }
        }
        return d;
    }

    void pin_artificials() {
        for (Index j = nv_; j < ncols_; ++j) {
            upper_(j) = 0.0;
            if (!is_basic_[static_cast<std::size_t>(j)]) {
                x_(j) = 0.0;
                at_upper_[static_cast<std::size_t>(j)] = false;
            }
        }
    }

    double phase1_objective() const { return x_.tail(m_).sum(); }
    const Vector& solution() const { return x_; }
    Index structural_count() const { return nv_; }
    Index rows() const { return m_; }

    Vector phase1_cost() const {
        Vector c1 = Vector::Zero(ncols_);
        c1.tail(m_).setOnes();
        return c1;
    }

    Vector phase2_cost() const { return cost_; }

  private:
    void apply_step(Index enter, int dir, double delta) {
        if (delta == 0.0) {
            return;
        }
        const double signed_delta = static_cast<double>(dir) * delta;
        for (Index i = 0; i < m_; ++i) {
            x_(basis_[static_cast<std::size_t>(i)]) -= tab_(i, enter) * signed_delta;
        }
        x_(enter) += signed_delta;
    }

    void pivot(Index row, Index col, Vector& d) {
        const double piv = tab_(row, col);
        Vector column = tab_.col(col);
        column(row) = 0.0;
        const Eigen::RowVectorXd prow = tab_.row(row) / piv;
        tab_.noalias() -= column * prow;
        tab_.row(row) = prow;
        d.noalias() -= d(col) * prow.transpose();
    }

    Index m_;
    Index nv_;
    Index ncols_;
    Matrix tab_;
    Vector lower_;
    Vector upper_;
    Vector cost_;
    Vector x_;
    std::vector<Index> basis_;
    std::vector<bool> is_basic_;
    std::vector<bool> at_upper_;
};

void validate_lp(const StandardLp& lp) {
    const Index nv = lp.c.size();
    if (lp.aeq.cols() != nv || lp.beq.size() != lp.aeq.rows() || lp.lower.size() != nv ||
        lp.upper.size() != nv) {
        throw DimensionError("simplex: inconsistent LP dimensions");
    }
    for (Index j = 0; j < nv; ++j) {
        if (!std::isfinite(lp.lower(j))) {
            throw ValidationError("simplex: lower bounds must be finite");
        }
        if (lp.lower(j) > lp.upper(j)) {
            throw ValidationError("simplex: lower bound exceeds upper bound at column " +
                                  std::to_string(j));
        }
    }
    if (!lp.aeq.allFinite() || !lp.beq.allFinite() || !lp.c.allFinite()) {
        throw DomainError("simplex: non-finite LP data");
    }
}

}  // namespace

StandardLp reformulate(const DiscreteProblem& problem) {
    const Index nu = problem.nu;
    const Index levels = problem.num_levels();
    const Index n = problem.n();
    const Index structural = nu * (1 + levels);
    const Index ncols = structural + 2 * levels * nu;
    const Index rows = 2 * levels * nu + n;

    StandardLp out;
    out.num_structural = structural;
    out.c = Vector::Zero(ncols);
    out.aeq = Matrix::Zero(rows, ncols);
    out.beq = Vector::Zero(rows);
    out.lower = Vector::Zero(ncols);
    out.upper = Vector::Constant(ncols, kInfinity);
    out.lower.head(nu).setConstant(-problem.box_bound);
    out.upper.head(nu).setConstant(problem.box_bound);

    const auto s_col = [&](Index i, Index l) { return nu + i * nu + l; };
    const auto t1_col = [&](Index i, Index l) { return structural + i * nu + l; };
    const auto t2_col = [&](Index i, Index l) { return structural + levels * nu + i * nu + l; };

    for (Index i = 0; i < levels; ++i) {
        const double r = problem.r[static_cast<std::size_t>(i)];
        const double p = problem.p[static_cast<std::size_t>(i)];
        for (Index l = 0; l < nu; ++l) {
            out.c(s_col(i, l)) = p;
            // s - (z - r) >= 0  ->  s - z - t1 = -r
            Index row = i * nu + l;
            out.aeq(row, s_col(i, l)) = 1.0;
            out.aeq(row, l) = -1.0;
            out.aeq(row, t1_col(i, l)) = -1.0;
            out.beq(row) = -r;
            // s + (z - r) >= 0  ->  s + z - t2 = r
            row = levels * nu + i * nu + l;
            out.aeq(row, s_col(i, l)) = 1.0;
            out.aeq(row, l) = 1.0;
            out.aeq(row, t2_col(i, l)) = -1.0;
            out.beq(row) = r;
        }
    }
    out.aeq.block(2 * levels * nu, 0, n, nu) = problem.phi;
    out.beq.tail(n) = -problem.zeta;
    return out;
}

LpResult simplex(const StandardLp& lp) {
    validate_lp(lp);
    LpResult result;
    const Index nv = lp.c.size();
    const Index m = lp.aeq.rows();

    if (m == 0) {
        // Bounds-only problem: each variable sits on the bound its cost favours.
        result.x = Vector(nv);
        for (Index j = 0; j < nv; ++j) {
            if (lp.c(j) >= 0.0) {
                result.x(j) = lp.lower(j);
            } else if (lp.upper(j) < kInfinity) {
                result.x(j) = lp.upper(j);
            } else {
                result.status = LpStatus::unbounded;
                return result;
            }
        }
        result.status = LpStatus::optimal;
        result.value = lp.c.dot(result.x);
        return result;
    }

    Tableau tableau(lp);
    int iterations = 0;

    const Vector c1 = tableau.phase1_cost();
    Vector d1 = tableau.reduced_costs(c1);
    bool unused = true;
    if (!tableau.optimize(c1, d1, /*exclude_artificials=*/false, iterations,
                          /*track_monotone=*/false, &unused)) {
        throw NumericalError("simplex: phase 1 reported an unbounded ray");
    }
    if (tableau.phase1_objective() > kPhase1Tol) {
        result.status = LpStatus::infeasible;
        result.iterations = iterations;
        return result;
    }

    tableau.pin_artificials();
    const Vector c2 = tableau.phase2_cost();
    Vector d2 = tableau.reduced_costs(c2);
    bool monotone = true;
    if (!tableau.optimize(c2, d2, /*exclude_artificials=*/true, iterations,
                          /*track_monotone=*/true, &monotone)) {
        result.status = LpStatus::unbounded;
        result.iterations = iterations;
        return result;
    }

    result.status = LpStatus::optimal;
    result.x = tableau.solution().head(nv);
    result.value = lp.c.dot(result.x);
    result.iterations = iterations;
    result.phase2_monotone = monotone;
    return result;
}

SolveResult solve_reference(const DiscreteProblem& problem) {
    const StandardLp lp = reformulate(problem);
    const LpResult res = simplex(lp);

    SolveResult out;
    out.iterations = res.iterations;
    switch (res.status) {
        case LpStatus::optimal:
            out.z = res.x.head(problem.nu);
            out.objective = problem.h * res.value;
            out.terminal_residual = (problem.phi * out.z + problem.zeta).norm();
            out.converged = true;
            out.status = SolveStatus::converged;
            break;
        case LpStatus::infeasible:
            out.status = SolveStatus::infeasible;
            break;
        case LpStatus::unbounded:
            throw NumericalError("solve_reference: box-constrained program cannot be unbounded");
    }
    return out;
}

bool certified_unreachable(const DiscreteProblem& problem) {
    double reach = 0.0;
    for (Index l = 0; l < problem.nu; ++l) {
        reach += problem.phi.col(l).norm();
    }
    return problem.zeta.norm() > reach * (1.0 + 1e-12);
}

}  // namespace soav::lp
