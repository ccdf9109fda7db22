#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/LU>

#include "soav/admm.hpp"
#include "soav/analysis.hpp"
#include "soav/cost.hpp"
#include "soav/csv.hpp"
#include "soav/lp.hpp"
#include "soav/mpc.hpp"
#include "soav/problem_file.hpp"
#include "soav/svg.hpp"

namespace {

using namespace soav;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitCheckFailed = 4;

void print_warnings(const io::ProblemFile& file) {
    for (const auto& warning : file.warnings) {
        std::cerr << "note: " << warning << "\n";
    }
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw ValidationError(path + ": cannot open for writing");
    }
    return out;
}

bool nonsingular(const Matrix& a) {
    return std::abs(a.fullPivLu().determinant()) > 1e-10;
}

bool controllable(const Plant& plant) {
    const Index n = plant.n();
    Matrix ctrb(n, n);
    ctrb.col(0) = plant.b;
    for (Index k = 1; k < n; ++k) {
        ctrb.col(k) = plant.a * ctrb.col(k - 1);
    }
    return Eigen::FullPivLU<Matrix>(ctrb).rank() == n;
}

SolverChoice parse_solver(const std::string& name) {
    if (name == "admm") {
        return SolverChoice::admm;
    }
    if (name == "lp") {
        return SolverChoice::lp;
    }
    throw ValidationError("solver must be \"admm\" or \"lp\", got \"" + name + "\"");
}

std::string state_plot_path(const std::string& control_path) {
    std::filesystem::path path(control_path);
    const std::string stem = path.stem().string();
    path.replace_filename(stem + "_state" + path.extension().string());
    return path.string();
}

int run_solve(const io::ProblemFile& file, const std::string& solver_name, bool snap,
              const std::string& out_path, const std::string& plot_path) {
    print_warnings(file);
    const SolverChoice choice = parse_solver(solver_name.empty() ? file.solver.method
                                                                 : solver_name);
    const DiscreteProblem pb =
        discretize(file.plant, file.alphabet, file.horizon, file.nu, file.x0);
    const CostProfile profile(file.alphabet);

    SolveResult result;
    if (choice == SolverChoice::admm) {
        result = admm::solve(pb, io::admm_params(file));
    } else {
        result = lp::solve_reference(pb);
    }

    if (result.status == SolveStatus::infeasible ||
        result.status == SolveStatus::infeasible_suspected) {
        std::cerr << "infeasible: initial state outside the reachable set ("
                  << to_string(result.status) << ")\n";
        return kExitInfeasible;
    }

    const Vector output = snap ? snap_to_levels(result.z, profile, kDefaultSnapTol) : result.z;
    {
        auto out = open_output(out_path);
        io::write_open_loop_csv(out, pb, file.x0, output, result.objective);
    }
    if (!plot_path.empty()) {
        std::vector<double> time(static_cast<std::size_t>(pb.nu) + 1);
        for (Index l = 0; l <= pb.nu; ++l) {
            time[static_cast<std::size_t>(l)] = static_cast<double>(l) * pb.h;
        }
        auto out = open_output(plot_path);
        io::write_control_svg(out, "Open-loop control", time, output, profile.signed_levels());
    }

    const auto report = switch_analysis(result.z, profile, file.plant, file.horizon,
                                        kDefaultSnapTol, file.omega);
    const auto discreteness = analysis::discreteness_report(result.z, profile, kDefaultSnapTol);
    std::printf("status              %s after %d iterations\n", to_string(result.status).c_str(),
                result.iterations);
    std::printf("objective           %.12g\n", result.objective);
    std::printf("jmin                %.12g\n", jmin(profile, file.horizon));
    std::printf("terminal residual   %.3e\n", result.terminal_residual);
    std::printf("switching count     %d (bound %.4g, Omega %.6g)\n", report.count, report.bound,
                report.omega);
    std::printf("discreteness        %.4f of samples on a level (worst deviation %.3e)\n",
                discreteness.fraction, discreteness.worst_deviation);
    return result.converged ? kExitOk : kExitNoConvergence;
}

int run_mpc_cmd(const io::ProblemFile& file, const std::string& solver_name,
                const std::string& out_path, const std::string& plot_path) {
    print_warnings(file);
    if (!file.mpc) {
        throw ValidationError("problem file has no 'mpc' section");
    }
    const SolverChoice choice = parse_solver(solver_name.empty() ? file.solver.method
                                                                 : solver_name);
    const Schedule schedule =
        Schedule::with_horizon(file.mpc->sampling_instants, file.horizon);
    const Trajectory traj = run_mpc(file.plant, file.alphabet, schedule, file.x0, file.nu,
                                    file.mpc->end_time, choice, io::admm_params(file));
    {
        auto out = open_output(out_path);
        io::write_trajectory_csv(out, traj);
    }
    if (!plot_path.empty() && traj.samples_filled > 0) {
        const CostProfile profile(file.alphabet);
        std::vector<double> time(traj.time.begin(),
                                 traj.time.begin() + traj.samples_filled + 1);
        {
            auto out = open_output(plot_path);
            io::write_control_svg(out, "Discrete-valued control", time,
                                  traj.u.head(traj.samples_filled), profile.signed_levels());
        }
        {
            auto out = open_output(state_plot_path(plot_path));
            io::write_state_svg(out, "Closed-loop state", time,
                                traj.x.leftCols(traj.samples_filled + 1));
        }
    }

    std::printf("steps               %zu\n", traj.steps.size());
    for (const auto& step : traj.steps) {
        std::printf("  t=%-8g V=%.12g  %s (%d iterations)\n", step.t, step.objective,
                    to_string(step.status).c_str(), step.iterations);
    }
    std::printf("value monotone      %s (worst increase %.3e)\n",
                traj.value_monotone ? "yes" : "no", traj.worst_value_increase);
    if (traj.samples_filled > 0) {
        std::printf("final state norm    %.6g (initial %.6g)\n",
                    traj.x.col(traj.samples_filled).norm(), traj.x.col(0).norm());
    }
    if (traj.aborted) {
        std::cerr << "solver failed at t=" << traj.aborted_at << "; partial trajectory written\n";
        return kExitNoConvergence;
    }
    return kExitOk;
}

int run_sweep(const io::ProblemFile& file, const std::string& out_path) {
    print_warnings(file);
    if (!file.sweep) {
        throw ValidationError("problem file has no 'sweep' section");
    }
    const analysis::SweepGrid grid{file.sweep->lo, file.sweep->hi, file.sweep->counts};
    const auto samples =
        analysis::value_sweep(file.plant, file.alphabet, file.horizon, file.nu, grid);
    {
        auto out = open_output(out_path);
        io::write_sweep_csv(out, samples);
    }
    int feasible = 0;
    for (const auto& sample : samples) {
        feasible += sample.value.has_value();
    }
    std::printf("points              %zu (%d feasible)\n", samples.size(), feasible);
    if (feasible >= 3) {
        const auto report = analysis::convexity_check(samples, file.plant, file.alphabet,
                                                      file.horizon, file.nu, 100, 20250810);
        std::printf("convexity           %s (worst violation %.3e over %d trials)\n",
                    report.pass ? "pass" : "FAIL", report.worst_violation, report.trials);
        return report.pass ? kExitOk : kExitCheckFailed;
    }
    std::printf("convexity           not applicable (fewer than 3 feasible samples)\n");
    return kExitOk;
}

struct CheckRow {
    std::string name;
    std::string verdict;  // PASS / FAIL / n/a
    std::string detail;
};

int run_check(const io::ProblemFile& file, std::uint64_t seed, int trials, Index nu_override) {
    print_warnings(file);
    const Index nu = nu_override > 0 ? nu_override : std::min<Index>(file.nu, 40);
    const CostProfile profile(file.alphabet);
    const bool ctrb = controllable(file.plant);
    const bool nonsing = nonsingular(file.plant.a);
    const double floor = jmin(profile, file.horizon);

    const DiscreteProblem base =
        discretize(file.plant, file.alphabet, file.horizon, nu, Vector::Zero(file.plant.n()));
    const admm::AdmmSolver solver(base);
    // verification-grade tolerances: the comparison against the oracle needs
    // tighter residuals than a control run
    admm::AdmmParams params = io::admm_params(file);
    params.eps_primal = std::min(params.eps_primal, 1e-7);
    params.eps_dual = std::min(params.eps_dual, 1e-7);
    params.max_iter = std::max(params.max_iter, 500000);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> box(-0.9, 0.9);

    std::vector<CheckRow> rows;
    char detail[160];

    // cross-solver equivalence on random feasible initial states
    double worst_rel = 0.0;
    double worst_dz = 0.0;
    int z_compared = 0;
    bool equivalence_ok = true;
    std::vector<SolveResult> lp_solutions;
    for (int k = 0; k < trials; ++k) {
        Vector z_gen(nu);
        for (Index l = 0; l < nu; ++l) {
            z_gen(l) = box(rng);
        }
        const Vector xi = base.a_d_pow.partialPivLu().solve(-(base.phi * z_gen));
        const Vector zeta = zeta_for(base, xi);

        DiscreteProblem pb = base;
        pb.zeta = zeta;
        const SolveResult reference = lp::solve_reference(pb);
        const SolveResult iterative = solver.solve_from(zeta, params);
        if (!reference.converged || !iterative.converged) {
            equivalence_ok = false;
            continue;
        }
        lp_solutions.push_back(reference);
        const double rel = std::abs(iterative.objective - reference.objective) /
                           std::max(1.0, std::abs(reference.objective));
        worst_rel = std::max(worst_rel, rel);
        equivalence_ok = equivalence_ok && rel <= 1e-4;
        const bool unique = nonsing && ctrb && reference.objective > floor + 1e-6;
        if (unique) {
            ++z_compared;
            const double dz = (iterative.z - reference.z).cwiseAbs().maxCoeff();
            worst_dz = std::max(worst_dz, dz);
            equivalence_ok = equivalence_ok && dz <= 1e-3;
        }
    }
    std::snprintf(detail, sizeof(detail),
                  "worst objective gap %.2e; worst control gap %.2e (%d of %d states compared)",
                  worst_rel, worst_dz, z_compared, trials);
    rows.push_back({"admm_lp_equivalence", equivalence_ok ? "PASS" : "FAIL", detail});

    // cost floor over random box controls
    double min_margin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 1000; ++k) {
        Vector z(nu);
        for (Index l = 0; l < nu; ++l) {
            z(l) = box(rng) / 0.9;
        }
        min_margin = std::min(min_margin, cost(z, profile, base.h) - floor);
    }
    const bool floor_ok = min_margin >= -1e-9;
    std::snprintf(detail, sizeof(detail), "min cost margin over jmin: %.3e", min_margin);
    rows.push_back({"cost_floor", floor_ok ? "PASS" : "FAIL", detail});

    // Switching bound and discreteness on the oracle solutions; both need a
    // normal system (A nonsingular, (A, B) controllable).
    if (!ctrb) {
        rows.push_back({"switching_bound", "n/a", "skipped: (A, B) is not controllable"});
        rows.push_back({"discreteness_budget", "n/a", "skipped: (A, B) is not controllable"});
    } else if (!nonsing) {
        rows.push_back({"switching_bound", "n/a",
                        "not applicable: A is singular (bound hypothesis unmet)"});
        rows.push_back({"discreteness_budget", "n/a",
                        "not applicable: A is singular (discreteness hypothesis unmet)"});
    } else {
        int worst_count = 0;
        double bound = 0.0;
        bool bound_ok = true;
        double min_fraction = 1.0;
        for (const auto& solution : lp_solutions) {
            const auto report = switch_analysis(solution.z, profile, file.plant, file.horizon,
                                                kDefaultSnapTol, file.omega);
            bound = report.bound;
            worst_count = std::max(worst_count, report.count);
            bound_ok = bound_ok && static_cast<double>(report.count) < report.bound;
            const auto disc = analysis::discreteness_report(solution.z, profile, kDefaultSnapTol);
            min_fraction = std::min(min_fraction, disc.fraction);
        }
        std::snprintf(detail, sizeof(detail), "max snapped count %d against bound %.4g",
                      worst_count, bound);
        rows.push_back({"switching_bound", bound_ok ? "PASS" : "FAIL", detail});

        const double budget = 1.0 - (bound + 2.0 * static_cast<double>(file.plant.n())) /
                                        static_cast<double>(nu);
        const bool disc_ok = min_fraction >= budget;
        std::snprintf(detail, sizeof(detail), "min on-level fraction %.4f, budget floor %.4f",
                      min_fraction, budget);
        rows.push_back({"discreteness_budget", disc_ok ? "PASS" : "FAIL", detail});
    }

    std::printf("%-22s %-6s %s\n", "check", "result", "detail");
    bool all_ok = true;
    std::string failing;
    for (const auto& row : rows) {
        std::printf("%-22s %-6s %s\n", row.name.c_str(), row.verdict.c_str(),
                    row.detail.c_str());
        if (row.verdict == "FAIL") {
            all_ok = false;
            failing += (failing.empty() ? "" : ", ") + row.name;
        }
    }
    if (!all_ok) {
        std::cerr << "failing checks: " << failing << "\n";
        return kExitCheckFailed;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete-valued optimal control via sum-of-absolute-values optimization"};
    app.require_subcommand(1);

    std::string problem_path;
    std::string solver_name;
    std::string out_path;
    std::string plot_path;
    bool snap = false;
    std::uint64_t seed = 1;
    int trials = 20;
    Index nu_override = 0;

    auto* solve_cmd = app.add_subcommand("solve", "Solve the open-loop problem from x0");
    solve_cmd->add_option("--problem", problem_path, "Problem file (JSON)")->required();
    solve_cmd->add_option("--solver", solver_name, "admm or lp (default: the file's choice)");
    solve_cmd->add_flag("--snap", snap, "Snap the written control to alphabet levels");
    solve_cmd->add_option("--out", out_path, "Output CSV path")->required();
    solve_cmd->add_option("--plot", plot_path, "Control staircase SVG path");

    auto* mpc_cmd = app.add_subcommand("mpc", "Run the receding-horizon loop");
    mpc_cmd->add_option("--problem", problem_path, "Problem file (JSON)")->required();
    mpc_cmd->add_option("--solver", solver_name, "admm or lp (default: the file's choice)");
    mpc_cmd->add_option("--out", out_path, "Trajectory CSV path")->required();
    mpc_cmd->add_option("--plot", plot_path,
                        "Control SVG path (state plot lands next to it as *_state.svg)");

    auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate the value function over a grid");
    sweep_cmd->add_option("--problem", problem_path, "Problem file (JSON)")->required();
    sweep_cmd->add_option("--out", out_path, "Sweep CSV path")->required();

    auto* check_cmd = app.add_subcommand("check", "Cross-solver and structural checks");
    check_cmd->add_option("--problem", problem_path, "Problem file (JSON)")->required();
    check_cmd->add_option("--seed", seed, "Random seed for the trials");
    check_cmd->add_option("--trials", trials, "Number of random initial states");
    check_cmd->add_option("--nu", nu_override,
                          "Grid size for the checks (default: min(file nu, 40))");

    CLI11_PARSE(app, argc, argv);

    try {
        const io::ProblemFile file = io::load_problem(problem_path);
        if (solve_cmd->parsed()) {
            return run_solve(file, solver_name, snap, out_path, plot_path);
        }
        if (mpc_cmd->parsed()) {
            return run_mpc_cmd(file, solver_name, out_path, plot_path);
        }
        if (sweep_cmd->parsed()) {
            return run_sweep(file, out_path);
        }
        if (check_cmd->parsed()) {
            return run_check(file, seed, trials, nu_override);
        }
    } catch (const ValidationError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitInput;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
