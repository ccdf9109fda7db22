#include "soav/plant.hpp"

#include <cmath>

#include "soav/numerics.hpp"

namespace soav {

void validate(const Plant& plant) {
    if (plant.a.rows() != plant.a.cols()) {
        throw DimensionError("plant: A must be square, got " + std::to_string(plant.a.rows()) +
                             "x" + std::to_string(plant.a.cols()));
    }
    if (plant.b.rows() != plant.a.rows() || plant.b.cols() != 1) {
        throw DimensionError("plant: B must be " + std::to_string(plant.a.rows()) +
                             "x1, got " + std::to_string(plant.b.rows()) + "x" +
                             std::to_string(plant.b.cols()));
    }
    if (!plant.a.allFinite() || !plant.b.allFinite()) {
        throw DomainError("plant: A and B must be finite");
    }
}

void validate(const Alphabet& alphabet) {
    const int n = alphabet.size();
    if (n < 2) {
        throw ValidationError("alphabet: at least two levels required, got " + std::to_string(n));
    }
    if (alphabet.weights.size() != alphabet.levels.size()) {
        throw ValidationError("alphabet: " + std::to_string(n) + " levels but " +
                              std::to_string(alphabet.weights.size()) + " weights");
    }
    if (alphabet.levels.front() < 0.0) {
        throw ValidationError("alphabet: levels must be nonnegative");
    }
    for (int i = 0; i + 1 < n; ++i) {
        if (!(alphabet.levels[i] < alphabet.levels[i + 1])) {
            throw ValidationError("alphabet: levels must be strictly increasing (level " +
                                  std::to_string(i + 2) + " does not exceed level " +
                                  std::to_string(i + 1) + ")");
        }
    }
    for (int i = 0; i < n; ++i) {
        if (!(alphabet.weights[i] > 0.0) || !std::isfinite(alphabet.weights[i])) {
            throw ValidationError("alphabet: weight " + std::to_string(i + 1) +
                                  " must be positive and finite");
        }
        if (!std::isfinite(alphabet.levels[i])) {
            throw ValidationError("alphabet: level " + std::to_string(i + 1) + " must be finite");
        }
    }
}

NormalizeResult normalize(const Plant& plant, const Alphabet& alphabet) {
    validate(plant);
    validate(alphabet);

    NormalizeResult out;
    out.plant = plant;
    out.alphabet = alphabet;

    const double top = alphabet.levels.back();
    if (top <= 0.0) {
        throw ValidationError("alphabet: largest level must be positive");
    }
    if (top != 1.0) {
        out.plant.b *= top;
        for (double& level : out.alphabet.levels) {
            level /= top;
        }
        out.alphabet.levels.back() = 1.0;
        out.warnings.push_back("levels rescaled so the largest is 1 (B scaled by " +
                               std::to_string(top) + ")");
    }

    double wsum = 0.0;
    for (double w : out.alphabet.weights) {
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > 1e-12) {
        for (double& w : out.alphabet.weights) {
            w /= wsum;
        }
        out.warnings.push_back("weights rescaled to sum to 1 (sum was " + std::to_string(wsum) +
                               ")");
    }
    return out;
}

RenamedLevels renamed_levels(const Alphabet& alphabet) {
    const int n = alphabet.size();
    RenamedLevels out;
    out.r.resize(2 * n);
    out.p.resize(2 * n);
    for (int i = 0; i < n; ++i) {
        out.r[i] = -alphabet.levels[n - 1 - i];
        out.r[n + i] = alphabet.levels[i];
        out.p[i] = alphabet.weights[n - 1 - i];
        out.p[n + i] = alphabet.weights[i];
    }
    return out;
}

DiscreteProblem discretize(const Plant& plant, const Alphabet& alphabet, double horizon,
                           Index nu, const Vector& xi) {
    validate(plant);
    validate(alphabet);
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw ValidationError("discretize: horizon must be positive, got " +
                              std::to_string(horizon));
    }
    if (nu < 1) {
        throw ValidationError("discretize: grid count must be at least 1, got " +
                              std::to_string(nu));
    }
    const Index n = plant.n();
    if (xi.size() != n) {
        throw DimensionError("discretize: initial state has size " + std::to_string(xi.size()) +
                             ", expected " + std::to_string(n));
    }
    if (!xi.allFinite()) {
        throw DomainError("discretize: initial state must be finite");
    }

    DiscreteProblem pb;
    pb.h = horizon / static_cast<double>(nu);
    pb.nu = nu;

    // [[A, B], [0, 0]] * h exponentiates to [[A_d, B_d], [0, I]].
    Matrix aug = Matrix::Zero(n + 1, n + 1);
    aug.topLeftCorner(n, n) = plant.a;
    aug.topRightCorner(n, 1) = plant.b;
    const Matrix exp_aug = numerics::expm(aug * pb.h);
    pb.a_d = exp_aug.topLeftCorner(n, n);
    pb.b_d = exp_aug.topRightCorner(n, 1);

    pb.phi = Matrix(n, nu);
    pb.phi.col(nu - 1) = pb.b_d;
    for (Index l = nu - 1; l > 0; --l) {
        pb.phi.col(l - 1) = pb.a_d * pb.phi.col(l);
    }

    pb.a_d_pow = Matrix::Identity(n, n);
    for (Index l = 0; l < nu; ++l) {
        pb.a_d_pow = pb.a_d * pb.a_d_pow;
    }
    pb.zeta = pb.a_d_pow * xi;

    RenamedLevels renamed = renamed_levels(alphabet);
    pb.r = std::move(renamed.r);
    pb.p = std::move(renamed.p);
    return pb;
}

Vector zeta_for(const DiscreteProblem& problem, const Vector& xi) {
    if (xi.size() != problem.n()) {
        throw DimensionError("zeta_for: state size mismatch");
    }
    return problem.a_d_pow * xi;
}

double discrete_objective(const DiscreteProblem& problem, const Vector& z) {
    double total = 0.0;
    for (std::size_t i = 0; i < problem.r.size(); ++i) {
        total += problem.p[i] * (z.array() - problem.r[i]).abs().sum();
    }
    return problem.h * total;
}

Matrix simulate(const DiscreteProblem& problem, const Vector& xi, const Vector& u) {
    if (u.size() > problem.nu) {
        throw DimensionError("simulate: control longer than the grid");
    }
    Matrix x(problem.n(), u.size() + 1);
    x.col(0) = xi;
    for (Index l = 0; l < u.size(); ++l) {
        x.col(l + 1) = problem.a_d * x.col(l) + problem.b_d * u(l);
    }
    return x;
}

}  // namespace soav
