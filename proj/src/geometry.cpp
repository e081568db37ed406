#include "spdmean/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace spdmean {

namespace {

void require_same_dim(const SpdMatrix& a, const SpdMatrix& b, const char* who) {
    if (a.dim() != b.dim()) {
        std::ostringstream os;
        os << who << ": dimension mismatch " << a.dim() << " vs " << b.dim();
        throw DimensionError(os.str());
    }
}

// Lexicographic order on entries. Evaluating symmetric functions with the
// arguments in this order makes f(a, b) and f(b, a) bit-identical.
bool entrywise_less(const Matrix& a, const Matrix& b) {
    const auto n = a.size();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (a.data()[i] != b.data()[i]) return a.data()[i] < b.data()[i];
    }
    return false;
}

std::pair<const SpdMatrix*, const SpdMatrix*> canonical(const SpdMatrix& a, const SpdMatrix& b) {
    if (entrywise_less(b.matrix(), a.matrix())) return {&b, &a};
    return {&a, &b};
}

}  // namespace

GeodesicParam::GeodesicParam(double beta) : beta_(beta) {
    if (!(beta >= 0.0 && beta <= 1.0)) {
        throw std::out_of_range("GeodesicParam: beta must lie in [0, 1]");
    }
}

namespace raw {

double fi_distance(const Matrix& c1, const Matrix& c2) {
    const Matrix w = invsqrtm(c1);
    const Matrix inner = symmetrize(w * c2 * w);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(inner, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("fi_distance: eigensolver failed");
    }
    const Vector& lam = solver.eigenvalues();
    check_spd(lam.reverse());
    return std::sqrt(lam.array().log().square().sum());
}

}  // namespace raw

double fi_distance(const SpdMatrix& c1, const SpdMatrix& c2) {
    require_same_dim(c1, c2, "fi_distance");
    auto [a, b] = canonical(c1, c2);
    return raw::fi_distance(a->matrix(), b->matrix());
}

double fi_norm(const SpdMatrix& c) {
    return raw::logm(c.matrix()).norm();
}

double le_distance(const SpdMatrix& c1, const SpdMatrix& c2) {
    require_same_dim(c1, c2, "le_distance");
    auto [a, b] = canonical(c1, c2);
    return (raw::logm(a->matrix()) - raw::logm(b->matrix())).norm();
}

double bhat_divergence(const SpdMatrix& c1, const SpdMatrix& c2) {
    require_same_dim(c1, c2, "bhat_divergence");
    auto [a, b] = canonical(c1, c2);
    const Matrix mid = (a->matrix() + b->matrix()) * 0.5;
    const double d =
        raw::logdet(mid) - 0.5 * raw::logdet(a->matrix()) - 0.5 * raw::logdet(b->matrix());
    return std::max(d, 0.0);
}

SpdMatrix geodesic(const SpdMatrix& omega, const SpdMatrix& phi, GeodesicParam beta) {
    require_same_dim(omega, phi, "geodesic");
    if (beta.value() == 0.0) return omega;
    if (beta.value() == 1.0) return phi;
    const Matrix half = raw::sqrtm(omega.matrix());
    const Matrix inv_half = raw::invsqrtm(omega.matrix());
    const Matrix inner = raw::powm(symmetrize(inv_half * phi.matrix() * inv_half), beta.value());
    return SpdMatrix::assume_spd(half * inner * half);
}

SpdMatrix exp_map(const SpdMatrix& omega, const SymmetricMatrix& v) {
    if (omega.dim() != v.dim()) throw DimensionError("exp_map: dimension mismatch");
    const Matrix half = raw::sqrtm(omega.matrix());
    const Matrix inv_half = raw::invsqrtm(omega.matrix());
    const Matrix inner = raw::expm(symmetrize(inv_half * v.matrix() * inv_half));
    return SpdMatrix::assume_spd(half * inner * half);
}

SymmetricMatrix log_map(const SpdMatrix& omega, const SpdMatrix& phi) {
    require_same_dim(omega, phi, "log_map");
    const Matrix half = raw::sqrtm(omega.matrix());
    const Matrix inv_half = raw::invsqrtm(omega.matrix());
    const Matrix inner = raw::logm(symmetrize(inv_half * phi.matrix() * inv_half));
    return SymmetricMatrix(half * inner * half);
}

SpdMatrix geomean2(const SpdMatrix& c1, const SpdMatrix& c2) {
    require_same_dim(c1, c2, "geomean2");
    auto [a, b] = canonical(c1, c2);
    return geodesic(*a, *b, GeodesicParam(0.5));
}

}  // namespace spdmean
