#include "soav/problem_file.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace soav::io {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& message) {
    throw ValidationError(origin + ": " + message);
}

void reject_unknown_keys(const json& object, std::initializer_list<const char*> known,
                         const std::string& origin, const std::string& where) {
    for (const auto& item : object.items()) {
        bool found = false;
        for (const char* key : known) {
            if (item.key() == key) {
                found = true;
                break;
            }
        }
        if (!found) {
            fail(origin, "unknown key '" + item.key() + "' in " + where);
        }
    }
}

const json& require(const json& object, const char* key, const std::string& origin,
                    const std::string& where) {
    const auto it = object.find(key);
    if (it == object.end()) {
        fail(origin, "missing key '" + std::string(key) + "' in " + where);
    }
    return *it;
}

double as_number(const json& value, const std::string& origin, const std::string& where) {
    if (!value.is_number()) {
        fail(origin, where + " must be a number");
    }
    return value.get<double>();
}

std::vector<double> as_number_list(const json& value, const std::string& origin,
                                   const std::string& where) {
    if (!value.is_array() || value.empty()) {
        fail(origin, where + " must be a nonempty array of numbers");
    }
    std::vector<double> out;
    out.reserve(value.size());
    for (const auto& entry : value) {
        out.push_back(as_number(entry, origin, where));
    }
    return out;
}

Vector as_vector(const json& value, const std::string& origin, const std::string& where) {
    const std::vector<double> list = as_number_list(value, origin, where);
    Vector out(static_cast<Index>(list.size()));
    for (std::size_t i = 0; i < list.size(); ++i) {
        out(static_cast<Index>(i)) = list[i];
    }
    return out;
}

Matrix as_matrix(const json& value, const std::string& origin, const std::string& where) {
    if (!value.is_array() || value.empty()) {
        fail(origin, where + " must be an array of rows");
    }
    const std::size_t rows = value.size();
    std::size_t cols = 0;
    Matrix out;
    for (std::size_t i = 0; i < rows; ++i) {
        const std::vector<double> row = as_number_list(value[i], origin,
                                                       where + " row " + std::to_string(i + 1));
        if (i == 0) {
            cols = row.size();
            out.resize(static_cast<Index>(rows), static_cast<Index>(cols));
        } else if (row.size() != cols) {
            fail(origin, where + " rows have inconsistent lengths");
        }
        for (std::size_t j = 0; j < cols; ++j) {
            out(static_cast<Index>(i), static_cast<Index>(j)) = row[j];
        }
    }
    return out;
}

}  // namespace

ProblemFile parse_problem(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& err) {
        // nlohmann reports "parse error at line L, column C: ..."
        throw ValidationError(origin + ": " + err.what());
    }
    if (!doc.is_object()) {
        fail(origin, "document must be a JSON object");
    }

    reject_unknown_keys(doc,
                        {"schema", "A", "B", "levels", "weights", "T", "nu", "x0", "omega",
                         "solver", "mpc", "sweep"},
                        origin, "the problem file");

    ProblemFile file;
    const json& schema = require(doc, "schema", origin, "the problem file");
    if (!schema.is_number_integer() || schema.get<int>() != 1) {
        fail(origin, "unsupported schema version (expected 1)");
    }

    Plant raw_plant;
    raw_plant.a = as_matrix(require(doc, "A", origin, "the problem file"), origin, "'A'");
    const Vector b = as_vector(require(doc, "B", origin, "the problem file"), origin, "'B'");
    raw_plant.b = b;

    Alphabet raw_alphabet;
    raw_alphabet.levels =
        as_number_list(require(doc, "levels", origin, "the problem file"), origin, "'levels'");
    raw_alphabet.weights =
        as_number_list(require(doc, "weights", origin, "the problem file"), origin, "'weights'");

    file.horizon = as_number(require(doc, "T", origin, "the problem file"), origin, "'T'");
    if (doc.contains("nu")) {
        const json& nu = doc["nu"];
        if (!nu.is_number_integer() || nu.get<long long>() < 1) {
            fail(origin, "'nu' must be a positive integer");
        }
        file.nu = static_cast<Index>(nu.get<long long>());
    } else {
        // default grid step h = 0.01 (nu = 500 at T = 5)
        file.nu = static_cast<Index>(std::llround(file.horizon / 0.01));
        if (file.nu < 1) {
            fail(origin, "'T' too small for the default grid; give 'nu' explicitly");
        }
    }
    file.x0 = as_vector(require(doc, "x0", origin, "the problem file"), origin, "'x0'");

    if (doc.contains("omega")) {
        file.omega = as_number(doc["omega"], origin, "'omega'");
    }

    if (doc.contains("solver")) {
        const json& solver = doc["solver"];
        if (!solver.is_object()) {
            fail(origin, "'solver' must be an object");
        }
        reject_unknown_keys(solver, {"gamma", "max_iter", "eps_primal", "eps_dual", "method"},
                            origin, "'solver'");
        if (solver.contains("gamma")) {
            file.solver.gamma = as_number(solver["gamma"], origin, "'solver.gamma'");
        }
        if (solver.contains("max_iter")) {
            if (!solver["max_iter"].is_number_integer() || solver["max_iter"].get<long long>() < 1) {
                fail(origin, "'solver.max_iter' must be a positive integer");
            }
            file.solver.max_iter = static_cast<int>(solver["max_iter"].get<long long>());
        }
        if (solver.contains("eps_primal")) {
            file.solver.eps_primal = as_number(solver["eps_primal"], origin, "'solver.eps_primal'");
        }
        if (solver.contains("eps_dual")) {
            file.solver.eps_dual = as_number(solver["eps_dual"], origin, "'solver.eps_dual'");
        }
        if (solver.contains("method")) {
            if (!solver["method"].is_string()) {
                fail(origin, "'solver.method' must be \"admm\" or \"lp\"");
            }
            file.solver.method = solver["method"].get<std::string>();
            if (file.solver.method != "admm" && file.solver.method != "lp") {
                fail(origin, "'solver.method' must be \"admm\" or \"lp\"");
            }
        }
    }

    if (doc.contains("mpc")) {
        const json& mpc = doc["mpc"];
        if (!mpc.is_object()) {
            fail(origin, "'mpc' must be an object");
        }
        reject_unknown_keys(mpc, {"sampling_instants", "end_time"}, origin, "'mpc'");
        MpcSection section;
        section.sampling_instants = as_number_list(
            require(mpc, "sampling_instants", origin, "'mpc'"), origin, "'mpc.sampling_instants'");
        section.end_time =
            as_number(require(mpc, "end_time", origin, "'mpc'"), origin, "'mpc.end_time'");
        file.mpc = std::move(section);
    }

    if (doc.contains("sweep")) {
        const json& sweep = doc["sweep"];
        if (!sweep.is_object()) {
            fail(origin, "'sweep' must be an object");
        }
        reject_unknown_keys(sweep, {"lo", "hi", "counts"}, origin, "'sweep'");
        SweepSection section;
        section.lo = as_vector(require(sweep, "lo", origin, "'sweep'"), origin, "'sweep.lo'");
        section.hi = as_vector(require(sweep, "hi", origin, "'sweep'"), origin, "'sweep.hi'");
        const json& counts = require(sweep, "counts", origin, "'sweep'");
        if (!counts.is_array() || counts.empty()) {
            fail(origin, "'sweep.counts' must be a nonempty array of integers");
        }
        for (const auto& c : counts) {
            if (!c.is_number_integer() || c.get<long long>() < 1) {
                fail(origin, "'sweep.counts' entries must be positive integers");
            }
            section.counts.push_back(static_cast<Index>(c.get<long long>()));
        }
        file.sweep = std::move(section);
    }

    NormalizeResult normalized = normalize(raw_plant, raw_alphabet);
    file.plant = std::move(normalized.plant);
    file.alphabet = std::move(normalized.alphabet);
    file.warnings = std::move(normalized.warnings);

    if (file.x0.size() != file.plant.n()) {
        fail(origin, "'x0' has size " + std::to_string(file.x0.size()) + ", expected " +
                         std::to_string(file.plant.n()));
    }
    if (!(file.horizon > 0.0)) {
        fail(origin, "'T' must be positive");
    }
    return file;
}

ProblemFile load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError(path + ": cannot open problem file");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_problem(buffer.str(), path);
}

admm::AdmmParams admm_params(const ProblemFile& file) {
    admm::AdmmParams params;
    params.gamma = file.solver.gamma;
    params.max_iter = file.solver.max_iter;
    params.eps_primal = file.solver.eps_primal;
    params.eps_dual = file.solver.eps_dual;
    return params;
}

}  // namespace soav::io
