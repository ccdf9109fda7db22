#pragma once

#include <complex>
#include <vector>

#include <Eigen/Cholesky>

#include "soav/types.hpp"

namespace soav::numerics {

/// Matrix exponential e^M by scaling-and-squaring with a truncated-Taylor
/// core. The input is scaled so its infinity norm is at most 0.5 before the
/// series is summed; repeated squaring restores the result.
Matrix expm(const Matrix& m);

/// All eigenvalues of a real dense matrix (dimension <= 50) via the real
/// Schur form. Throws ConvergenceError if the QR iteration does not settle
/// within its budget.
std::vector<std::complex<double>> eigenvalues(const Matrix& m);

/// Largest imaginary part over the spectrum of m (the Omega of the
/// switching bound).
double largest_imag_part(const Matrix& m);

// Cholesky factorization of a symmetric positive definite matrix, cached so
// repeated solves against the same matrix cost one triangular sweep each.
class SpdFactorization {
  public:
    explicit SpdFactorization(const Matrix& m);

    Vector solve(const Vector& rhs) const;
    Index dim() const { return dim_; }

  private:
    Eigen::LLT<Matrix> llt_;
    Index dim_ = 0;
};

inline SpdFactorization factor(const Matrix& m) { return SpdFactorization(m); }
inline Vector solve(const SpdFactorization& f, const Vector& rhs) { return f.solve(rhs); }

}  // namespace soav::numerics
