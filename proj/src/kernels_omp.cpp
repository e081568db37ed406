#include <exception>
#include <vector>

#include "kernel_terms.hpp"

namespace spdmean::kernels {

namespace {

// Evaluates fn(k) for k in [0, count) in parallel and returns the results in
// index order. The first exception thrown by any iteration is rethrown.
template <typename T, typename Fn>
std::vector<T> parallel_terms(std::size_t count, Fn&& fn) {
    std::vector<T> out(count);
    std::exception_ptr error;
    const auto n = static_cast<long>(count);
#pragma omp parallel for schedule(static)
    for (long k = 0; k < n; ++k) {
        try {
            out[static_cast<std::size_t>(k)] = fn(static_cast<std::size_t>(k));
        } catch (...) {
#pragma omp critical(spdmean_kernel_error)
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
    return out;
}

void require_nonempty(std::span<const Matrix> cs, const char* who) {
    if (cs.empty()) throw DimensionError(std::string(who) + ": empty set");
}

Matrix ordered_sum(const std::vector<Matrix>& terms) {
    Matrix acc = Matrix::Zero(terms[0].rows(), terms[0].cols());
    for (const Matrix& t : terms) acc += t;
    return acc;
}

}  // namespace

Matrix mean_log_congruence(std::span<const Matrix> cs, const Matrix& w) {
    require_nonempty(cs, "mean_log_congruence");
    auto terms = parallel_terms<Matrix>(
        cs.size(), [&](std::size_t k) { return detail::log_congruence_term(cs[k], w); });
    return ordered_sum(terms) / static_cast<double>(cs.size());
}

Matrix mean_log(std::span<const Matrix> cs) {
    require_nonempty(cs, "mean_log");
    auto terms = parallel_terms<Matrix>(cs.size(), [&](std::size_t k) { return raw::logm(cs[k]); });
    return ordered_sum(terms) / static_cast<double>(cs.size());
}

Matrix sum_inverse_midpoints(std::span<const Matrix> cs, const Matrix& m) {
    require_nonempty(cs, "sum_inverse_midpoints");
    auto terms = parallel_terms<Matrix>(
        cs.size(), [&](std::size_t k) { return detail::inverse_midpoint_term(cs[k], m); });
    return ordered_sum(terms);
}

MajorizerTerms mm_accumulate(std::span<const Matrix> sqrt_cs, std::span<const Matrix> invsqrt_cs,
                             const Matrix& m) {
    require_nonempty(sqrt_cs, "mm_accumulate");
    auto terms = parallel_terms<MajorizerTerms>(sqrt_cs.size(), [&](std::size_t k) {
        return detail::majorizer_term(sqrt_cs[k], invsqrt_cs[k], m);
    });
    MajorizerTerms acc{Matrix::Zero(m.rows(), m.cols()), Matrix::Zero(m.rows(), m.cols())};
    for (const MajorizerTerms& t : terms) {
        acc.phi1 += t.phi1;
        acc.phi2 += t.phi2;
    }
    return acc;
}

std::vector<Matrix> map_sqrtm(std::span<const Matrix> cs) {
    return parallel_terms<Matrix>(cs.size(), [&](std::size_t k) { return raw::sqrtm(cs[k]); });
}

std::vector<Matrix> map_invsqrtm(std::span<const Matrix> cs) {
    return parallel_terms<Matrix>(cs.size(), [&](std::size_t k) { return raw::invsqrtm(cs[k]); });
}

}  // namespace spdmean::kernels
