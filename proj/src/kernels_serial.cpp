// Serial reference implementations. Kept for testing the OpenMP kernels and
// as the baseline in the kernel benchmark.

#include "kernel_terms.hpp"

namespace spdmean::kernels {

namespace {

void require_nonempty(std::span<const Matrix> cs, const char* who) {
    if (cs.empty()) throw DimensionError(std::string(who) + ": empty set");
}

}  // namespace

Matrix mean_log_congruence_serial(std::span<const Matrix> cs, const Matrix& w) {
    require_nonempty(cs, "mean_log_congruence");
    Matrix acc = Matrix::Zero(cs[0].rows(), cs[0].cols());
    for (const Matrix& c : cs) acc += detail::log_congruence_term(c, w);
    return acc / static_cast<double>(cs.size());
}

Matrix mean_log_serial(std::span<const Matrix> cs) {
    require_nonempty(cs, "mean_log");
    Matrix acc = Matrix::Zero(cs[0].rows(), cs[0].cols());
    for (const Matrix& c : cs) acc += raw::logm(c);
    return acc / static_cast<double>(cs.size());
}

Matrix sum_inverse_midpoints_serial(std::span<const Matrix> cs, const Matrix& m) {
    require_nonempty(cs, "sum_inverse_midpoints");
    Matrix acc = Matrix::Zero(m.rows(), m.cols());
    for (const Matrix& c : cs) acc += detail::inverse_midpoint_term(c, m);
    return acc;
}

MajorizerTerms mm_accumulate_serial(std::span<const Matrix> sqrt_cs,
                                    std::span<const Matrix> invsqrt_cs, const Matrix& m) {
    require_nonempty(sqrt_cs, "mm_accumulate");
    MajorizerTerms acc{Matrix::Zero(m.rows(), m.cols()), Matrix::Zero(m.rows(), m.cols())};
    for (std::size_t k = 0; k < sqrt_cs.size(); ++k) {
        const MajorizerTerms t = detail::majorizer_term(sqrt_cs[k], invsqrt_cs[k], m);
        acc.phi1 += t.phi1;
        acc.phi2 += t.phi2;
    }
    return acc;
}

}  // namespace spdmean::kernels
