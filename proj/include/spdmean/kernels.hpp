#pragma once

// Per-set reductions that dominate the cost of every iterative mean.
//
// Each kernel evaluates one independent matrix function per set member and
// sums the results. The OpenMP versions compute the per-member terms in
// parallel and then add them in member order, so their output is
// bit-identical to the serial reference regardless of thread count.

#include <span>

#include "spdmean/linalg.hpp"

namespace spdmean::kernels {

/// (1/K) sum_k ln(W C_k W^T).
Matrix mean_log_congruence(std::span<const Matrix> cs, const Matrix& w);
Matrix mean_log_congruence_serial(std::span<const Matrix> cs, const Matrix& w);

/// (1/K) sum_k ln C_k.
Matrix mean_log(std::span<const Matrix> cs);
Matrix mean_log_serial(std::span<const Matrix> cs);

/// sum_k ((C_k + M) / 2)^{-1}.
Matrix sum_inverse_midpoints(std::span<const Matrix> cs, const Matrix& m);
Matrix sum_inverse_midpoints_serial(std::span<const Matrix> cs, const Matrix& m);

/// Majorizer accumulators for the MM Karcher-mean iteration. With
/// Psi_k = ln(C_k^{-1/2} M C_k^{-1/2}) and S_k = (Psi_k^2 + I)^{1/2}:
///   phi1 = sum_k C_k^{1/2} (S_k - Psi_k) exp(Psi_k) C_k^{1/2}
///   phi2 = sum_k C_k^{-1/2} (S_k + Psi_k) exp(-Psi_k) C_k^{-1/2}
struct MajorizerTerms {
    Matrix phi1;
    Matrix phi2;
};

MajorizerTerms mm_accumulate(std::span<const Matrix> sqrt_cs, std::span<const Matrix> invsqrt_cs,
                             const Matrix& m);
MajorizerTerms mm_accumulate_serial(std::span<const Matrix> sqrt_cs,
                                    std::span<const Matrix> invsqrt_cs, const Matrix& m);

/// sqrt / invsqrt of every member, in order.
std::vector<Matrix> map_sqrtm(std::span<const Matrix> cs);
std::vector<Matrix> map_invsqrtm(std::span<const Matrix> cs);

}  // namespace spdmean::kernels
