#include "soav/numerics.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace soav::numerics {

namespace {

void require_square_finite(const Matrix& m, const char* op) {
    if (m.rows() != m.cols()) {
        throw DimensionError(std::string(op) + ": matrix must be square, got " +
                             std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
    if (!m.allFinite()) {
        throw DomainError(std::string(op) + ": matrix has non-finite entries");
    }
}

}  // namespace

Matrix expm(const Matrix& m) {
    require_square_finite(m, "expm");
    const Index n = m.rows();
    if (n == 0) {
        return Matrix(0, 0);
    }

    // Scale so the infinity norm is at most 0.5, sum the Taylor series,
    // then square back.
    const double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    if (norm > 0.5) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    }
    const Matrix x = m / std::ldexp(1.0, squarings);

    Matrix result = Matrix::Identity(n, n);
    Matrix term = Matrix::Identity(n, n);
    for (int k = 1; k <= 30; ++k) {
        term = (term * x) / static_cast<double>(k);
        result += term;
        if (term.cwiseAbs().maxCoeff() < 1e-18) {
            break;
        }
    }
    for (int i = 0; i < squarings; ++i) {
        result = result * result;
    }
    return result;
}

std::vector<std::complex<double>> eigenvalues(const Matrix& m) {
    require_square_finite(m, "eigenvalues");
    const Index n = m.rows();
    if (n > 50) {
        throw DimensionError("eigenvalues: dense solver limited to dimension 50, got " +
                             std::to_string(n));
    }
    std::vector<std::complex<double>> eigs;
    if (n == 0) {
        return eigs;
    }

    const int budget_per_row = 40;
    Eigen::RealSchur<Matrix> schur(n);
    schur.setMaxIterations(budget_per_row * static_cast<int>(n));
    schur.compute(m, /*computeU=*/false);
    if (schur.info() != Eigen::Success) {
        throw ConvergenceError("eigenvalues: QR iteration did not converge within " +
                               std::to_string(budget_per_row * n) + " iterations");
    }

    // Walk the quasi-triangular factor: 1x1 blocks are real eigenvalues,
    // 2x2 blocks hold complex-conjugate pairs.
    const Matrix& t = schur.matrixT();
    eigs.reserve(n);
    Index i = 0;
    while (i < n) {
        if (i == n - 1 || t(i + 1, i) == 0.0) {
            eigs.emplace_back(t(i, i), 0.0);
            ++i;
        } else {
            const double mean = 0.5 * (t(i, i) + t(i + 1, i + 1));
            const double half_gap = 0.5 * (t(i, i) - t(i + 1, i + 1));
            const double disc = half_gap * half_gap + t(i + 1, i) * t(i, i + 1);
            if (disc < 0.0) {
                const double im = std::sqrt(-disc);
                eigs.emplace_back(mean, im);
                eigs.emplace_back(mean, -im);
            } else {
                const double root = std::sqrt(disc);
                eigs.emplace_back(mean + root, 0.0);
                eigs.emplace_back(mean - root, 0.0);
            }
            i += 2;
        }
    }
    return eigs;
}

double largest_imag_part(const Matrix& m) {
    double omega = 0.0;
    for (const auto& eig : eigenvalues(m)) {
        omega = std::max(omega, std::abs(eig.imag()));
    }
    return omega;
}

SpdFactorization::SpdFactorization(const Matrix& m) {
    require_square_finite(m, "factor");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw DefinitenessError("factor: matrix is not symmetric");
    }
    llt_.compute(m);
    if (llt_.info() != Eigen::Success) {
        throw DefinitenessError("factor: matrix is not positive definite");
    }
    dim_ = m.rows();
}

Vector SpdFactorization::solve(const Vector& rhs) const {
    if (rhs.size() != dim_) {
        throw DimensionError("solve: right-hand side has size " + std::to_string(rhs.size()) +
                             ", factorization has dimension " + std::to_string(dim_));
    }
    return llt_.solve(rhs);
}

}  // namespace soav::numerics
