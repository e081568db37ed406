#pragma once

#include <gtest/gtest.h>

#include <cstdint>
#include <vector>

#include "spdmean/simgen.hpp"

namespace spdmean::test {

inline Matrix diag(std::initializer_list<double> d) {
    Vector v(static_cast<Eigen::Index>(d.size()));
    Eigen::Index i = 0;
    for (double x : d) v(i++) = x;
    return v.asDiagonal();
}

inline std::uint64_t key(std::uint64_t index, std::uint64_t salt = 0) {
    return stream_seed(1234 + salt, StreamRole::test_data, index);
}

inline MatrixSet random_set(int n, int k, std::uint64_t salt, double spread = 0.5) {
    std::vector<SpdMatrix> m;
    for (int i = 0; i < k; ++i) m.push_back(random_spd(n, key(static_cast<std::uint64_t>(i), salt), spread));
    return MatrixSet(std::move(m));
}

inline GeneratedSet model_set(int n, int k, double sigma, std::uint64_t seed) {
    GeneratorConfig cfg;
    cfg.dim = n;
    cfg.count = k;
    cfg.noise_sigma = sigma;
    cfg.seed = seed;
    return generate(cfg);
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace spdmean::test
