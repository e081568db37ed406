#include "spdmean/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spdmean {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t mix(std::uint64_t x) {
    return splitmix64(x);
}

std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

constexpr int kMaxAttempts = 100;

}  // namespace

Xoshiro256::Xoshiro256(std::uint64_t seed) {
    std::uint64_t state = seed;
    for (auto& word : s_) word = splitmix64(state);
}

std::uint64_t Xoshiro256::next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Xoshiro256::uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double GaussianStream::next() {
    if (spare_) {
        const double z = *spare_;
        spare_.reset();
        return z;
    }
    const double u1 = 1.0 - rng_.uniform();  // (0, 1]
    const double u2 = rng_.uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    return radius * std::cos(angle);
}

std::uint64_t stream_seed(std::uint64_t seed, StreamRole role, std::uint64_t index,
                          std::uint64_t attempt) {
    std::uint64_t key = mix(seed);
    key = mix(key ^ mix(static_cast<std::uint64_t>(role)));
    key = mix(key ^ mix(index + 0x5851F42D4C957F2DULL));
    key = mix(key ^ mix(attempt + 0x14057B7EF767814FULL));
    return key;
}

void GeneratorConfig::validate() const {
    if (dim < 2) throw std::invalid_argument("GeneratorConfig: dim must be >= 2");
    if (count < 2) throw std::invalid_argument("GeneratorConfig: count must be >= 2");
    if (!(noise_sigma >= 0.0)) throw std::invalid_argument("GeneratorConfig: sigma must be >= 0");
    if (!(eig_floor > 0.0)) throw std::invalid_argument("GeneratorConfig: eig_floor must be > 0");
    if (cond_target && !(*cond_target >= 1.0)) {
        throw std::invalid_argument("GeneratorConfig: condition number must be >= 1");
    }
}

Matrix gaussian_matrix(int rows, int cols, std::uint64_t stream) {
    GaussianStream g(stream);
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = g.next();
    return m;
}

Matrix random_orthogonal(int n, std::uint64_t stream) {
    const Matrix g = gaussian_matrix(n, n, stream);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(n, n);
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix signs so that R has a positive diagonal; this makes Q Haar-distributed.
    for (int j = 0; j < n; ++j) {
        if (r(j, j) < 0) q.col(j) = -q.col(j);
    }
    return q;
}

Matrix generate_conditioned_mixing(int n, double kappa, std::uint64_t seed) {
    if (!(kappa >= 1.0)) throw std::invalid_argument("condition number must be >= 1");
    if (n < 1) throw std::invalid_argument("dimension must be >= 1");
    const Matrix u = random_orthogonal(n, stream_seed(seed, StreamRole::left_rotation, 0));
    const Matrix v = random_orthogonal(n, stream_seed(seed, StreamRole::right_rotation, 0));
    Vector s(n);
    for (int i = 0; i < n; ++i) {
        const double frac = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
        s(i) = std::pow(kappa, -frac);
    }
    return u * s.asDiagonal() * v.transpose();
}

SpdMatrix random_spd(int n, std::uint64_t stream, double spread) {
    const Matrix g = gaussian_matrix(n, n, stream);
    return SpdMatrix::assume_spd(raw::expm(symmetrize(g) * spread));
}

GeneratedSet generate(const GeneratorConfig& cfg) {
    cfg.validate();
    const int n = cfg.dim;
    const Matrix a = cfg.cond_target
                         ? generate_conditioned_mixing(n, *cfg.cond_target, cfg.seed)
                         : gaussian_matrix(n, n, stream_seed(cfg.seed, StreamRole::mixing, 0));

    std::vector<SpdMatrix> members;
    std::vector<Vector> ds;
    std::vector<Matrix> noises;
    members.reserve(cfg.count);
    int regenerated = 0;
    for (int k = 0; k < cfg.count; ++k) {
        bool accepted = false;
        for (int attempt = 0; attempt < kMaxAttempts && !accepted; ++attempt) {
            GaussianStream src(stream_seed(cfg.seed, StreamRole::sources, k, attempt));
            Vector d(n);
            for (int i = 0; i < n; ++i) {
                const double g = src.next();
                d(i) = std::max(g * g, cfg.eig_floor);
            }
            Matrix q = gaussian_matrix(n, n, stream_seed(cfg.seed, StreamRole::noise, k, attempt));
            q *= cfg.noise_sigma;
            const Matrix sigma = symmetrize(q * q.transpose() / static_cast<double>(n));
            const Matrix c = symmetrize(10.0 * (a * d.asDiagonal() * a.transpose() + sigma));
            try {
                members.emplace_back(c);
            } catch (const NotPositiveDefinite&) {
                ++regenerated;
                continue;
            }
            ds.push_back(std::move(d));
            noises.push_back(sigma);
            accepted = true;
        }
        if (!accepted) {
            throw NumericalError("generate: member " + std::to_string(k) +
                                 " failed the SPD check on every attempt");
        }
    }
    return GeneratedSet{MatrixSet(std::move(members)), a, std::move(ds), std::move(noises),
                        regenerated};
}

double noise_ratio(const GeneratedSet& g) {
    double total = 0.0;
    for (std::size_t k = 0; k < g.set.size(); ++k) {
        total += (10.0 * g.sigma_noise[k]).norm() / g.set[k].matrix().norm();
    }
    return total / static_cast<double>(g.set.size());
}

}  // namespace spdmean
