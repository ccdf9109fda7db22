#pragma once

#include <optional>
#include <string>
#include <vector>

#include "soav/admm.hpp"
#include "soav/plant.hpp"
#include "soav/types.hpp"

namespace soav::io {

struct SolverSection {
    double gamma = 1.0;
    int max_iter = 100000;
    double eps_primal = 1e-6;
    double eps_dual = 1e-6;
    std::string method = "admm";  // admm | lp
};

struct MpcSection {
    std::vector<double> sampling_instants;  // after t_0 = 0
    double end_time = 0.0;
};

struct SweepSection {
    Vector lo;
    Vector hi;
    std::vector<Index> counts;
};

// Parsed and normalized problem description. Unknown keys anywhere in the
// document are rejected; the schema version field is required.
struct ProblemFile {
    int schema = 1;
    Plant plant;        // normalized (B absorbed the level scale)
    Alphabet alphabet;  // normalized (U_N = 1, weights sum to 1)
    double horizon = 0.0;
    Index nu = 0;
    Vector x0;
    std::optional<double> omega;  // override for the switching bound
    SolverSection solver;
    std::optional<MpcSection> mpc;
    std::optional<SweepSection> sweep;
    std::vector<std::string> warnings;
};

ProblemFile parse_problem(const std::string& text, const std::string& origin);
ProblemFile load_problem(const std::string& path);

admm::AdmmParams admm_params(const ProblemFile& file);

}  // namespace soav::io
