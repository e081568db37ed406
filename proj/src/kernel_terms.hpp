#pragma once

// Per-member terms shared by the serial and OpenMP kernels.

#include <cmath>

#include "spdmean/kernels.hpp"

namespace spdmean::kernels::detail {

inline Matrix log_congruence_term(const Matrix& c, const Matrix& w) {
    return raw::logm(symmetrize(w * c * w.transpose()));
}

inline Matrix inverse_midpoint_term(const Matrix& c, const Matrix& m) {
    return raw::inverse(symmetrize((c + m) * 0.5));
}

inline MajorizerTerms majorizer_term(const Matrix& sqrt_c, const Matrix& invsqrt_c,
                                     const Matrix& m) {
    const Matrix x = symmetrize(invsqrt_c * m * invsqrt_c);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(x);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("mm_accumulate: eigensolver failed");
    }
    const Vector& lam = solver.eigenvalues();
    raw::check_spd(lam.reverse());
    const Matrix& u = solver.eigenvectors();
    const Eigen::Index n = lam.size();
    Vector lower(n);
    Vector upper(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double psi = std::log(lam(i));
        const double s = std::sqrt(psi * psi + 1.0);
        lower(i) = (s - psi) * lam(i);
        upper(i) = (s + psi) / lam(i);
    }
    const Matrix inner1 = u * lower.asDiagonal() * u.transpose();
    const Matrix inner2 = u * upper.asDiagonal() * u.transpose();
    return {symmetrize(sqrt_c * inner1 * sqrt_c), symmetrize(invsqrt_c * inner2 * invsqrt_c)};
}

}  // namespace spdmean::kernels::detail
