#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args, const std::string& env = "") {
    const std::string command =
        (env.empty() ? "" : env + " ") + std::string(SOAV_CLI_PATH) + " " + args + " 2>&1";
    std::array<char, 4096> buffer{};
    RunResult result;
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (std::fgets(buffer.data(), buffer.size(), pipe) != nullptr) {
        result.output += buffer.data();
    }
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

fs::path work_dir() {
    const fs::path dir = fs::current_path() / "cli_work";
    fs::create_directories(dir);
    return dir;
}

fs::path write_file(const std::string& name, const std::string& text) {
    const fs::path path = work_dir() / name;
    std::ofstream out(path);
    out << text;
    return path;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// Small test problem on the example plant; nu kept low so the LP oracle
// stays fast.
std::string small_problem(const std::string& extra) {
    return R"({
  "schema": 1,
  "A": [[0, 1], [-2, -1]],
  "B": [0, 1],
  "levels": [0, 0.2, 0.6, 1],
  "weights": [0.1, 0.2, 0.3, 0.4],
  "T": 2,
  "nu": 24,
  "x0": [1, -1],
  "solver": {"gamma": 0.1, "max_iter": 400000, "eps_primal": 1e-6, "eps_dual": 1e-6})" +
           extra + "\n}\n";
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty() || line.front() == '#') {
            continue;
        }
        std::vector<std::string> fields;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            fields.push_back(cell);
        }
        rows.push_back(std::move(fields));
    }
    return rows;
}

}  // namespace

TEST_CASE("solve writes the CSV and reports the expected metrics") {
    const auto problem = write_file("solve.json", small_problem(""));
    const auto csv = work_dir() / "solve_out.csv";
    const auto result =
        run_cli("solve --problem " + problem.string() + " --solver lp --out " + csv.string());
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("objective") != std::string::npos);
    CHECK(result.output.find("jmin") != std::string::npos);
    CHECK(result.output.find("switching count") != std::string::npos);
    CHECK(result.output.find("discreteness") != std::string::npos);

    const auto rows = parse_csv(slurp(csv));
    REQUIRE(rows.size() == 26);  // header + nu + 1
    CHECK(rows[0] == std::vector<std::string>{"t", "u", "x1", "x2", "V"});
    // terminal state is steered to the origin
    CHECK(std::abs(std::stod(rows.back()[2])) <= 1e-7);
    CHECK(std::abs(std::stod(rows.back()[3])) <= 1e-7);
}

TEST_CASE("solving from the origin yields the zero control at cost jmin") {
    const auto problem = write_file("origin.json", R"({
  "schema": 1,
  "A": [[0, 1], [-2, -1]],
  "B": [0, 1],
  "levels": [0, 0.2, 0.6, 1],
  "weights": [0.1, 0.2, 0.3, 0.4],
  "T": 5,
  "nu": 50,
  "x0": [0, 0]
})");
    const auto csv = work_dir() / "origin_out.csv";
    const auto result =
        run_cli("solve --problem " + problem.string() + " --solver lp --out " + csv.string());
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("objective           6.2") != std::string::npos);
    for (const auto& row : parse_csv(slurp(csv))) {
        if (row[0] == "t") {
            continue;
        }
        CHECK(std::abs(std::stod(row[1])) <= 1e-9);
    }
}

TEST_CASE("unreachable initial states exit with code 2") {
    const auto problem = write_file("far.json", R"({
  "schema": 1,
  "A": [[0, 1], [-2, -1]],
  "B": [0, 1],
  "levels": [0, 0.2, 0.6, 1],
  "weights": [0.1, 0.2, 0.3, 0.4],
  "T": 2,
  "nu": 20,
  "x0": [1e6, 1e6],
  "solver": {"max_iter": 500}
})");
    const auto lp = run_cli("solve --problem " + problem.string() + " --solver lp --out " +
                            (work_dir() / "far.csv").string());
    CHECK(lp.exit_code == 2);
    CHECK(lp.output.find("infeasible") != std::string::npos);
    const auto admm = run_cli("solve --problem " + problem.string() + " --solver admm --out " +
                              (work_dir() / "far2.csv").string());
    CHECK(admm.exit_code == 2);
    CHECK(admm.output.find("infeasible_suspected") != std::string::npos);
}

TEST_CASE("parse and validation failures exit with code 1") {
    const auto broken = write_file("broken.json", "{\n  \"schema\": 1,\n  oops\n}");
    const auto result = run_cli("solve --problem " + broken.string() + " --out /dev/null");
    CHECK(result.exit_code == 1);
    CHECK(result.output.find("line 3") != std::string::npos);

    const auto unknown = write_file("unknown.json", small_problem(R"(, "bogus": true)"));
    const auto rejected = run_cli("solve --problem " + unknown.string() + " --out /dev/null");
    CHECK(rejected.exit_code == 1);
    CHECK(rejected.output.find("unknown key 'bogus'") != std::string::npos);

    const auto missing = run_cli("solve --problem " + (work_dir() / "nope.json").string() +
                                 " --out /dev/null");
    CHECK(missing.exit_code == 1);

    const auto plain = write_file("plain.json", small_problem(""));
    const auto no_mpc = run_cli("mpc --problem " + plain.string() + " --out /dev/null");
    CHECK(no_mpc.exit_code == 1);
    CHECK(no_mpc.output.find("no 'mpc' section") != std::string::npos);
    const auto no_sweep = run_cli("sweep --problem " + plain.string() + " --out /dev/null");
    CHECK(no_sweep.exit_code == 1);
    CHECK(no_sweep.output.find("no 'sweep' section") != std::string::npos);
}

TEST_CASE("--snap writes a control that sits exactly on the levels") {
    // the file picks the lp method; no --solver flag needed
    const auto problem = write_file("snap.json", R"({
  "schema": 1,
  "A": [[0, 1], [-2, -1]],
  "B": [0, 1],
  "levels": [0, 0.2, 0.6, 1],
  "weights": [0.1, 0.2, 0.3, 0.4],
  "T": 2,
  "nu": 24,
  "x0": [1, -1],
  "solver": {"method": "lp"}
})");
    const auto csv = work_dir() / "snap_out.csv";
    const auto result =
        run_cli("solve --problem " + problem.string() + " --snap --out " + csv.string());
    CHECK(result.exit_code == 0);
    const std::vector<double> levels{-1.0, -0.6, -0.2, 0.0, 0.2, 0.6, 1.0};
    int off = 0;
    for (const auto& row : parse_csv(slurp(csv))) {
        if (row[0] == "t") {
            continue;
        }
        const double u = std::stod(row[1]);
        bool on_level = false;
        for (double level : levels) {
            on_level = on_level || u == level;
        }
        off += !on_level;
    }
    // everything except the grid cells straddling a switching instant
    CHECK(off <= 2);
}

TEST_CASE("CSV output is byte-deterministic") {
    const auto problem = write_file("det.json", small_problem(""));
    const auto csv_a = work_dir() / "det_a.csv";
    const auto csv_b = work_dir() / "det_b.csv";
    CHECK(run_cli("solve --problem " + problem.string() + " --solver admm --out " +
                  csv_a.string())
              .exit_code == 0);
    CHECK(run_cli("solve --problem " + problem.string() + " --solver admm --out " +
                  csv_b.string())
              .exit_code == 0);
    CHECK(slurp(csv_a) == slurp(csv_b));
}

TEST_CASE("mpc writes the trajectory and both plots") {
    const auto problem = write_file(
        "mpc.json", small_problem(R"(, "mpc": {"sampling_instants": [1, 2], "end_time": 2})"));
    const auto csv = work_dir() / "mpc_out.csv";
    const auto svg = work_dir() / "mpc_plot.svg";
    const auto result = run_cli("mpc --problem " + problem.string() + " --solver lp --out " +
                                csv.string() + " --plot " + svg.string());
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("value monotone      yes") != std::string::npos);

    const auto rows = parse_csv(slurp(csv));
    CHECK(rows.size() == 26);  // header + end/h + 1
    CHECK(fs::exists(svg));
    CHECK(fs::exists(work_dir() / "mpc_plot_state.svg"));
    const std::string plot = slurp(svg);
    CHECK(plot.find("<svg") != std::string::npos);
    CHECK(plot.find("</svg>") != std::string::npos);

    // V column repeats within each sampling interval
    CHECK(rows[1][4] == rows[5][4]);
}

TEST_CASE("mpc with a zero end time emits a single row") {
    const auto problem = write_file(
        "mpc0.json", small_problem(R"(, "mpc": {"sampling_instants": [1], "end_time": 0})"));
    const auto csv = work_dir() / "mpc0_out.csv";
    const auto result =
        run_cli("mpc --problem " + problem.string() + " --solver lp --out " + csv.string());
    CHECK(result.exit_code == 0);
    const auto rows = parse_csv(slurp(csv));
    REQUIRE(rows.size() == 2);
    CHECK(std::stod(rows[1][2]) == 1.0);   // x0 echoed back
    CHECK(std::stod(rows[1][3]) == -1.0);
}

TEST_CASE("mpc aborts with exit 3 and a flagged partial CSV when the solver fails") {
    const auto problem = write_file("mpc_abort.json", R"({
  "schema": 1,
  "A": [[0, 1], [-2, -1]],
  "B": [0, 1],
  "levels": [0, 0.2, 0.6, 1],
  "weights": [0.1, 0.2, 0.3, 0.4],
  "T": 2,
  "nu": 20,
  "x0": [1e6, 1e6],
  "solver": {"max_iter": 300},
  "mpc": {"sampling_instants": [1, 2], "end_time": 2}
})");
    const auto csv = work_dir() / "mpc_abort.csv";
    const auto result =
        run_cli("mpc --problem " + problem.string() + " --solver admm --out " + csv.string());
    CHECK(result.exit_code == 3);
    CHECK(slurp(csv).find("# aborted at t=0") != std::string::npos);
}

TEST_CASE("two different schedules both keep the value function safe") {
    for (const std::string schedule : {"[0.5, 1, 1.5, 2]", "[1.5, 2]"}) {
        const auto problem = write_file(
            "mpc_sched.json",
            small_problem(R"(, "mpc": {"sampling_instants": )" + schedule +
                          R"(, "end_time": 2})"));
        const auto csv = work_dir() / "mpc_sched.csv";
        const auto result =
            run_cli("mpc --problem " + problem.string() + " --solver lp --out " + csv.string());
        CHECK(result.exit_code == 0);
        CHECK(result.output.find("value monotone      yes") != std::string::npos);
    }
}

TEST_CASE("sweep on a single origin cell reports jmin and skips convexity") {
    const auto problem = write_file("sweep1.json", R"({
  "schema": 1,
  "A": [[0, 1], [-2, -1]],
  "B": [0, 1],
  "levels": [0, 0.2, 0.6, 1],
  "weights": [0.1, 0.2, 0.3, 0.4],
  "T": 5,
  "nu": 16,
  "x0": [0, 0],
  "sweep": {"lo": [0, 0], "hi": [0, 0], "counts": [1, 1]}
})");
    const auto csv = work_dir() / "sweep1.csv";
    const auto result = run_cli("sweep --problem " + problem.string() + " --out " + csv.string());
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("not applicable") != std::string::npos);
    const auto rows = parse_csv(slurp(csv));
    REQUIRE(rows.size() == 2);
    CHECK(std::stod(rows[1][2]) == doctest::Approx(6.2).epsilon(1e-9));
    CHECK(rows[1][3] == "1");
}

TEST_CASE("a sweep straddling the reachable boundary sees both classes and symmetry") {
    const auto problem = write_file("sweep2.json", R"({
  "schema": 1,
  "A": [[0, 1], [-2, -1]],
  "B": [0, 1],
  "levels": [0, 0.2, 0.6, 1],
  "weights": [0.1, 0.2, 0.3, 0.4],
  "T": 2,
  "nu": 16,
  "x0": [0, 0],
  "sweep": {"lo": [-4, -4], "hi": [4, 4], "counts": [7, 7]}
})");
    const auto csv = work_dir() / "sweep2.csv";
    const auto result = run_cli("sweep --problem " + problem.string() + " --out " + csv.string());
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("convexity           pass") != std::string::npos);

    const auto rows = parse_csv(slurp(csv));
    REQUIRE(rows.size() == 50);
    int feasible = 0;
    int infeasible = 0;
    for (std::size_t k = 1; k < rows.size(); ++k) {
        feasible += rows[k][3] == "1";
        infeasible += rows[k][3] == "0";
    }
    CHECK(feasible > 0);
    CHECK(infeasible > 0);
    // V(xi) = V(-xi): row k mirrors row 50-k on this symmetric grid
    for (std::size_t k = 1; k < rows.size(); ++k) {
        const auto& a = rows[k];
        const auto& b = rows[rows.size() - k];
        REQUIRE(a[3] == b[3]);
        if (a[3] == "1") {
            CHECK(std::stod(a[2]) == doctest::Approx(std::stod(b[2])).epsilon(1e-6));
        }
    }
}

TEST_CASE("sweep output is identical under different SOAV_THREADS settings") {
    const auto problem = write_file("sweep_thr.json", R"({
  "schema": 1,
  "A": [[0, 1], [-2, -1]],
  "B": [0, 1],
  "levels": [0, 0.2, 0.6, 1],
  "weights": [0.1, 0.2, 0.3, 0.4],
  "T": 2,
  "nu": 12,
  "x0": [0, 0],
  "sweep": {"lo": [-2, -2], "hi": [2, 2], "counts": [5, 5]}
})");
    const auto csv_one = work_dir() / "sweep_thr1.csv";
    const auto csv_many = work_dir() / "sweep_thr4.csv";
    CHECK(run_cli("sweep --problem " + problem.string() + " --out " + csv_one.string(),
                  "SOAV_THREADS=1")
              .exit_code == 0);
    CHECK(run_cli("sweep --problem " + problem.string() + " --out " + csv_many.string(),
                  "SOAV_THREADS=4")
              .exit_code == 0);
    CHECK(slurp(csv_one) == slurp(csv_many));
}

TEST_CASE("check passes on the small example") {
    const auto problem = write_file("check.json", small_problem(""));
    const auto ok = run_cli("check --problem " + problem.string() + " --trials 5 --seed 7");
    CHECK(ok.exit_code == 0);
    CHECK(ok.output.find("admm_lp_equivalence    PASS") != std::string::npos);
    CHECK(ok.output.find("cost_floor             PASS") != std::string::npos);
}

TEST_CASE("check exits 4 when a solver cannot certify its side of the comparison") {
    // strongly non-normal dynamics: the reachability map is so badly
    // conditioned that ADMM cannot certify convergence within its budget,
    // and the failed comparison is reported honestly
    const auto problem = write_file("check_fail.json", R"({
  "schema": 1,
  "A": [[3, 4, 0, 0], [-4, 3, 2, 0], [0, 0, -3, 5], [0, 0, -5, -3]],
  "B": [1, 0.5, -0.5, 1],
  "levels": [0, 1],
  "weights": [0.5, 0.5],
  "T": 3,
  "nu": 40,
  "x0": [0.1, 0.1, 0.1, 0.1]
})");
    const auto result = run_cli("check --problem " + problem.string() + " --trials 2 --seed 1");
    CHECK(result.exit_code == 4);
    CHECK(result.output.find("failing checks: admm_lp_equivalence") != std::string::npos);
}

TEST_CASE("check gates its hypotheses on singular and uncontrollable plants") {
    const auto singular = write_file("check_singular.json", R"({
  "schema": 1,
  "A": [[0]],
  "B": [1],
  "levels": [0, 1],
  "weights": [0.5, 0.5],
  "T": 2,
  "nu": 20,
  "x0": [0.5]
})");
    const auto sing = run_cli("check --problem " + singular.string() + " --trials 5");
    CHECK(sing.exit_code == 0);
    CHECK(sing.output.find("not applicable: A is singular") != std::string::npos);
    CHECK(sing.output.find("admm_lp_equivalence    PASS") != std::string::npos);
    CHECK(sing.output.find("cost_floor             PASS") != std::string::npos);

    const auto uncontrollable = write_file("check_unctrb.json", R"({
  "schema": 1,
  "A": [[1, 0], [0, 1]],
  "B": [1, 0],
  "levels": [0, 1],
  "weights": [0.5, 0.5],
  "T": 2,
  "nu": 20,
  "x0": [0.1, 0]
})");
    const auto unc = run_cli("check --problem " + uncontrollable.string() + " --trials 3");
    CHECK(unc.output.find("skipped: (A, B) is not controllable") != std::string::npos);
}
