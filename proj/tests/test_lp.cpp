#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include <Eigen/LU>

#include "soav/admm.hpp"
#include "soav/cost.hpp"
#include "soav/lp.hpp"

#include "test_support.hpp"

using soav::Alphabet;
using soav::DiscreteProblem;
using soav::Index;
using soav::Matrix;
using soav::Plant;
using soav::Vector;
namespace lp = soav::lp;

namespace {

Plant example_plant() {
    Plant plant;
    plant.a = Matrix(2, 2);
    plant.a << 0, 1, -2, -1;
    plant.b = Matrix(2, 1);
    plant.b << 0, 1;
    return plant;
}

Alphabet example_alphabet() {
    return Alphabet{{0.0, 0.2, 0.6, 1.0}, {0.1, 0.2, 0.3, 0.4}};
}

DiscreteProblem binary_problem(const Matrix& phi, const Vector& zeta, Index nu, double h = 1.0) {
    DiscreteProblem pb;
    const Index n = phi.rows();
    pb.a_d = Matrix::Identity(n, n);
    pb.b_d = Matrix::Zero(n, 1);
    pb.phi = phi;
    pb.zeta = zeta;
    pb.a_d_pow = Matrix::Identity(n, n);
    pb.h = h;
    pb.nu = nu;
    pb.r = {-1.0, 1.0};
    pb.p = {0.5, 0.5};
    return pb;
}

}  // namespace

TEST_CASE("reformulate on a one-sample two-level program") {
    const DiscreteProblem pb = binary_problem(Matrix(0, 1), Vector(0), 1);
    const lp::StandardLp standard = lp::reformulate(pb);
    CHECK(standard.num_structural == 1 + 2);
    CHECK(standard.aeq.rows() == 2 * 2 * 1 + 0);
    CHECK(standard.c.size() == 1 * (1 + 3 * 2));

    const lp::LpResult result = lp::simplex(standard);
    REQUIRE(result.status == lp::LpStatus::optimal);
    // 0.5 (|z+1| + |z-1|) = 1 on the whole box
    CHECK(result.value == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(result.x(0)) <= 1.0 + 1e-12);
}

TEST_CASE("reformulate dimension counting") {
    const auto pb = soav::discretize(example_plant(), example_alphabet(), 1.0, 5,
                                     Vector::Zero(2));
    const lp::StandardLp standard = lp::reformulate(pb);
    const Index nu = 5;
    const Index levels = 8;
    CHECK(standard.num_structural == nu * (1 + levels));
    CHECK(standard.aeq.rows() == 2 * levels * nu + 2);
    CHECK(standard.c.size() == nu * (1 + levels) + 2 * levels * nu);
    CHECK(standard.beq.size() == standard.aeq.rows());
}

TEST_CASE("the zero problem is minimized by the zero control") {
    DiscreteProblem pb = binary_problem(Matrix::Zero(1, 3), Vector::Zero(1), 3);
    pb.r = {-1.0, -0.6, -0.2, 0.0, 0.0, 0.2, 0.6, 1.0};
    pb.p = {0.4, 0.3, 0.2, 0.1, 0.1, 0.2, 0.3, 0.4};
    const lp::LpResult result = lp::simplex(lp::reformulate(pb));
    REQUIRE(result.status == lp::LpStatus::optimal);
    double per_sample = 0.0;
    for (std::size_t i = 0; i < pb.r.size(); ++i) {
        per_sample += pb.p[i] * std::abs(pb.r[i]);
    }
    CHECK(result.value == doctest::Approx(3.0 * per_sample).epsilon(1e-10));
    CHECK(result.x.head(3).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("textbook bounds-only LP") {
    lp::StandardLp standard;
    standard.c = Vector::Constant(1, -1.0);
    standard.aeq = Matrix(0, 1);
    standard.beq = Vector(0);
    standard.lower = Vector::Constant(1, 0.0);
    standard.upper = Vector::Constant(1, 1.0);
    const lp::LpResult result = lp::simplex(standard);
    REQUIRE(result.status == lp::LpStatus::optimal);
    CHECK(result.x(0) == 1.0);
    CHECK(result.value == -1.0);
}

TEST_CASE("contradictory constraints are infeasible") {
    // x <= 1 via its bound, x >= 2 via x - t = 2 with t >= 0.
    lp::StandardLp standard;
    standard.c = Vector::Zero(2);
    standard.aeq = Matrix(1, 2);
    standard.aeq << 1.0, -1.0;
    standard.beq = Vector::Constant(1, 2.0);
    standard.lower = Vector(2);
    standard.lower << -5.0, 0.0;
    standard.upper = Vector(2);
    standard.upper << 1.0, lp::kInfinity;
    CHECK(lp::simplex(standard).status == lp::LpStatus::infeasible);
}

TEST_CASE("unbounded ray is reported") {
    lp::StandardLp standard;
    standard.c = Vector(2);
    standard.c << -1.0, 0.0;
    standard.aeq = Matrix(1, 2);
    standard.aeq << 1.0, -1.0;  // x = t, both unbounded above
    standard.beq = Vector::Zero(1);
    standard.lower = Vector::Zero(2);
    standard.upper = Vector::Constant(2, lp::kInfinity);
    CHECK(lp::simplex(standard).status == lp::LpStatus::unbounded);
}

TEST_CASE("planted vertex solutions are recovered exactly") {
    std::mt19937_64 rng(51);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> positive(0.1, 2.0);
    for (int trial = 0; trial < 40; ++trial) {
        const Index m = 3 + trial % 4;
        const Index nv = m + 4 + trial % 5;
        Matrix a(m, nv);
        for (Index i = 0; i < m; ++i) {
            for (Index j = 0; j < nv; ++j) {
                a(i, j) = gauss(rng);
            }
        }
        // Basis = first m columns; planted solution positive there, zero
        // elsewhere; costs built from a dual vector plus strictly positive
        // reduced costs off the basis.
        Vector x_star = Vector::Zero(nv);
        for (Index i = 0; i < m; ++i) {
            x_star(i) = positive(rng);
        }
        const Vector b = a * x_star;
        Vector y(m);
        for (Index i = 0; i < m; ++i) {
            y(i) = gauss(rng);
        }
        Vector c = a.transpose() * y;
        for (Index j = m; j < nv; ++j) {
            c(j) += positive(rng);
        }

        lp::StandardLp standard;
        standard.c = c;
        standard.aeq = a;
        standard.beq = b;
        standard.lower = Vector::Zero(nv);
        standard.upper = Vector::Constant(nv, lp::kInfinity);
        const lp::LpResult result = lp::simplex(standard);
        REQUIRE(result.status == lp::LpStatus::optimal);
        CHECK((result.x - x_star).cwiseAbs().maxCoeff() <= 1e-8);
        CHECK(result.value == doctest::Approx(c.dot(x_star)).epsilon(1e-8));
        CHECK(result.phase2_monotone);
        // optimal solutions satisfy the equalities and the bounds
        CHECK((a * result.x - b).cwiseAbs().maxCoeff() <= 1e-8);
        CHECK(result.x.minCoeff() >= -1e-9);
    }
}

TEST_CASE("solve_reference from the origin returns zero at cost jmin") {
    const auto pb = soav::discretize(example_plant(), example_alphabet(), 2.0, 20,
                                     Vector::Zero(2));
    const auto result = lp::solve_reference(pb);
    REQUIRE(result.converged);
    CHECK(result.z.cwiseAbs().maxCoeff() <= 1e-9);
    const soav::CostProfile profile(example_alphabet());
    CHECK(result.objective == doctest::Approx(soav::jmin(profile, 2.0)).epsilon(1e-10));
}

TEST_CASE("example-plant instance stays within the reachability ceiling") {
    Vector xi(2);
    xi << 5.0, 5.0;
    const auto pb = soav::discretize(example_plant(), example_alphabet(), 5.0, 40, xi);
    const auto result = lp::solve_reference(pb);
    REQUIRE(result.converged);
    const soav::CostProfile profile(example_alphabet());
    CHECK(result.objective >= soav::jmin(profile, 5.0) - 1e-9);
    CHECK(result.objective <= 2.0 * 5.0 + 1e-6);
    CHECK(result.terminal_residual <= 1e-8);
}

TEST_CASE("states beyond the certified reach bound are infeasible") {
    Vector xi(2);
    xi << 1e6, 1e6;
    const auto pb = soav::discretize(example_plant(), example_alphabet(), 5.0, 30, xi);
    CHECK(lp::certified_unreachable(pb));
    const auto result = lp::solve_reference(pb);
    CHECK_FALSE(result.converged);
    CHECK(result.status == soav::SolveStatus::infeasible);
}

TEST_CASE("vertex solutions sit exactly on alphabet levels up to the switching budget") {
    // at least nu - bound - n*L entries land on levels exactly
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> box(-0.9, 0.9);
    const Index nu = 60;
    const double horizon = 1.5;
    auto pb = soav::discretize(example_plant(), example_alphabet(), horizon, nu,
                               Vector::Zero(2));
    const soav::CostProfile profile(example_alphabet());
    for (int trial = 0; trial < 5; ++trial) {
        Vector z_gen(nu);
        for (Index l = 0; l < nu; ++l) {
            z_gen(l) = box(rng);
        }
        pb.zeta = soav::zeta_for(pb, soav::testing::feasible_state(pb, z_gen));
        const auto result = lp::solve_reference(pb);
        REQUIRE(result.converged);
        const auto report = soav::switch_analysis(result.z, profile, example_plant(), horizon,
                                                  1e-9);
        Index exact = 0;
        for (Index l = 0; l < nu; ++l) {
            exact += std::abs(result.z(l) - soav::nearest_level(result.z(l), profile)) <= 1e-9;
        }
        const double budget = static_cast<double>(nu) - report.bound -
                              2.0 * static_cast<double>(pb.num_levels());
        CHECK(static_cast<double>(exact) >= budget);
    }
}

TEST_CASE("ADMM and the LP oracle agree on random feasible instances") {
    std::mt19937_64 rng(52);
    std::uniform_real_distribution<double> box(-0.9, 0.9);
    std::uniform_int_distribution<Index> nu_pick(15, 35);
    int done = 0;
    int attempts = 0;
    while (done < 8) {
        REQUIRE(++attempts <= 40);
        const Index n = 2 + done % 2;
        const Plant plant = soav::testing::oscillatory_plant(rng, n);
        if (!soav::testing::controllable(plant)) {
            continue;
        }

        const Index nu = nu_pick(rng);
        auto pb = soav::discretize(plant, example_alphabet(), 2.0, nu, Vector::Zero(n));
        Vector z_gen(nu);
        for (Index l = 0; l < nu; ++l) {
            z_gen(l) = box(rng);
        }
        pb.zeta = soav::zeta_for(pb, soav::testing::feasible_state(pb, z_gen));

        const auto reference = lp::solve_reference(pb);
        REQUIRE(reference.converged);
        soav::admm::AdmmParams params;
        params.gamma = 0.1;
        params.eps_primal = 1e-7;
        params.eps_dual = 1e-7;
        params.max_iter = 500000;
        const auto iterative = soav::admm::solve(pb, params);
        if (!iterative.converged) {
            continue;  // near-degenerate optimal face; draw a fresh instance
        }

        CHECK(std::abs(iterative.objective - reference.objective) <=
              1e-4 * std::max(1.0, std::abs(reference.objective)));
        CHECK((iterative.z - reference.z).cwiseAbs().maxCoeff() <= 1e-3);
        ++done;
    }
}
