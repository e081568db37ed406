#pragma once

// Synthetic SPD sets following the noisy instantaneous-mixing model
//
//   C_k = 10 (A D_k A^T + Sigma_k),   Sigma_k = (1/N) Q_k Q_k^T,
//
// with A standard Gaussian (or built with a prescribed condition number),
// D_k = max(g^2, eig_floor) for standard Gaussian g, and Q_k ~ N(0, sigma^2).
//
// Randomness: xoshiro256** seeded through splitmix64. Each (role, k, attempt)
// triple gets its own stream derived from the user seed, so members can be
// regenerated or produced in any order without disturbing the others.
// Normals come from the Box-Muller transform (cosine branch first).

#include <cstdint>
#include <optional>
#include <vector>

#include "spdmean/matrix_set.hpp"

namespace spdmean {

inline constexpr const char* kRngName = "xoshiro256** (splitmix64 stream keys) + Box-Muller";

class Xoshiro256 {
public:
    explicit Xoshiro256(std::uint64_t seed);
    std::uint64_t next();
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();

private:
    std::uint64_t s_[4];
};

class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}
    double next();

private:
    Xoshiro256 rng_;
    std::optional<double> spare_;
};

enum class StreamRole : std::uint64_t {
    mixing = 1,
    sources = 2,
    noise = 3,
    left_rotation = 4,
    right_rotation = 5,
    test_data = 6,
};

/// Deterministic stream key for (seed, role, index, attempt).
std::uint64_t stream_seed(std::uint64_t seed, StreamRole role, std::uint64_t index,
                          std::uint64_t attempt = 0);

struct GeneratorConfig {
    int dim = 10;
    int count = 100;
    double noise_sigma = 0.1;
    double eig_floor = 1e-4;
    std::optional<double> cond_target;
    std::uint64_t seed = 0;

    void validate() const;
};

struct GeneratedSet {
    MatrixSet set;
    Matrix a_true;
    std::vector<Vector> d_true;
    std::vector<Matrix> sigma_noise;
    /// Members that failed the SPD check and were redrawn.
    int regenerated = 0;
};

GeneratedSet generate(const GeneratorConfig& cfg);

/// U diag(s) V^T with Haar-random orthogonal U, V and singular values
/// log-spaced from 1 down to 1/kappa.
Matrix generate_conditioned_mixing(int n, double kappa, std::uint64_t seed);

/// N x N matrix of independent standard normals from one stream.
Matrix gaussian_matrix(int rows, int cols, std::uint64_t stream);

/// Haar-distributed orthogonal matrix via QR of a Gaussian matrix.
Matrix random_orthogonal(int n, std::uint64_t stream);

/// Random SPD matrix exp(S) with S symmetric Gaussian scaled by `spread`.
SpdMatrix random_spd(int n, std::uint64_t stream, double spread = 0.5);

/// Mean over members of ||10 Sigma_k||_F / ||C_k||_F.
double noise_ratio(const GeneratedSet& g);

}  // namespace spdmean
