#include "spdmean/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace spdmean {

namespace {

void require_square(const Matrix& m, const char* who) {
    if (m.rows() == 0 || m.rows() != m.cols()) {
        std::ostringstream os;
        os << who << ": expected a non-empty square matrix, got " << m.rows() << "x" << m.cols();
        throw DimensionError(os.str());
    }
}

// Eigenvalues at which exp overflows a double.
const double kExpOverflow = std::log(std::numeric_limits<double>::max());

}  // namespace

Matrix symmetrize(const Matrix& m) {
    return (m + m.transpose()) * 0.5;
}

// --- SymmetricMatrix ---------------------------------------------------------

SymmetricMatrix::SymmetricMatrix(const Matrix& m) {
    require_square(m, "SymmetricMatrix");
    m_ = symmetrize(m);
}

SymmetricMatrix SymmetricMatrix::zero(Eigen::Index n) {
    return SymmetricMatrix(Matrix::Zero(n, n));
}

SymmetricMatrix SymmetricMatrix::identity(Eigen::Index n) {
    return SymmetricMatrix(Matrix::Identity(n, n));
}

// --- SpdMatrix ---------------------------------------------------------------

SpdMatrix::SpdMatrix(const Matrix& m) : s_(m) {
    raw::check_spd(sym_eigen(s_).values);
}

SpdMatrix::SpdMatrix(const SymmetricMatrix& s) : s_(s) {
    raw::check_spd(sym_eigen(s_).values);
}

SpdMatrix SpdMatrix::assume_spd(const Matrix& m) {
    return SpdMatrix(Trusted{}, m);
}

SpdMatrix SpdMatrix::identity(Eigen::Index n) {
    return SpdMatrix(Trusted{}, Matrix::Identity(n, n));
}

SpdMatrix SpdMatrix::diagonal(const Vector& d) {
    return SpdMatrix(Matrix(d.asDiagonal()));
}

// --- eigendecomposition ------------------------------------------------------

EigenPair sym_eigen(const Matrix& s) {
    require_square(s, "sym_eigen");
    if (!s.allFinite()) {
        throw NumericalError("sym_eigen: matrix has non-finite entries (dim " +
                             std::to_string(s.rows()) + ")");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(s);
    if (solver.info() != Eigen::Success) {
        std::ostringstream os;
        os << "sym_eigen: eigensolver did not converge (dim " << s.rows()
           << ", Frobenius norm " << s.norm() << ")";
        throw NumericalError(os.str());
    }
    const Eigen::Index n = s.rows();
    EigenPair out{Matrix(n, n), Vector(n)};
    // Descending; ties keep the solver's order so that e.g. I gives U = I.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return solver.eigenvalues()(a) > solver.eigenvalues()(b);
    });
    for (Eigen::Index j = 0; j < n; ++j) {
        out.values(j) = solver.eigenvalues()(order[static_cast<std::size_t>(j)]);
        out.vectors.col(j) = solver.eigenvectors().col(order[static_cast<std::size_t>(j)]);
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        auto col = out.vectors.col(j);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (std::abs(col(i)) > 1e-12) {
                if (col(i) < 0) col = -col;
                break;
            }
        }
    }
    return out;
}

EigenPair sym_eigen(const SymmetricMatrix& s) {
    return sym_eigen(s.matrix());
}

// --- raw kernels -------------------------------------------------------------

namespace raw {

void check_spd(const Vector& w) {
    const double top = w.maxCoeff();
    const double bottom = w.minCoeff();
    if (!(top > 0.0) || !(bottom > kPdTol * top)) {
        std::ostringstream os;
        os << "matrix is not positive definite: smallest eigenvalue " << bottom
           << ", largest " << top;
        throw NotPositiveDefinite(os.str(), bottom);
    }
}

Matrix spectral_map(const Matrix& s, const std::function<double(double)>& f, bool require_pd) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(s);
    if (solver.info() != Eigen::Success || !s.allFinite()) {
        std::ostringstream os;
        os << "spectral_map: eigensolver failed (dim " << s.rows() << ", Frobenius norm "
           << s.norm() << ")";
        throw NumericalError(os.str());
    }
    Vector w = solver.eigenvalues();
    if (require_pd) check_spd(w);
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = f(w(i));
    const Matrix& u = solver.eigenvectors();
    return symmetrize(u * w.asDiagonal() * u.transpose());
}

Matrix logm(const Matrix& spd) {
    return spectral_map(spd, [](double x) { return std::log(x); }, true);
}

Matrix expm(const Matrix& sym) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success || !sym.allFinite()) {
        throw NumericalError("expm: eigensolver failed (dim " + std::to_string(sym.rows()) + ")");
    }
    Vector w = solver.eigenvalues();
    const double top = w.maxCoeff();
    if (top >= kExpOverflow) {
        std::ostringstream os;
        os << "expm: largest eigenvalue " << top << " overflows exp";
        throw RangeError(os.str());
    }
    w = w.array().exp();
    const Matrix& u = solver.eigenvectors();
    return symmetrize(u * w.asDiagonal() * u.transpose());
}

Matrix sqrtm(const Matrix& spd) {
    return spectral_map(spd, [](double x) { return std::sqrt(x); }, true);
}

Matrix invsqrtm(const Matrix& spd) {
    return spectral_map(spd, [](double x) { return 1.0 / std::sqrt(x); }, true);
}

Matrix inverse(const Matrix& spd) {
    return spectral_map(spd, [](double x) { return 1.0 / x; }, true);
}

Matrix powm(const Matrix& spd, double p) {
    return spectral_map(spd, [p](double x) { return std::pow(x, p); }, true);
}

double logdet(const Matrix& spd) {
    Eigen::LLT<Matrix> llt(spd);
    if (llt.info() != Eigen::Success) {
        throw NotPositiveDefinite("logdet: Cholesky factorization failed", 0.0);
    }
    return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

}  // namespace raw

// --- typed matrix functions --------------------------------------------------

SymmetricMatrix spd_function(const SpdMatrix& c, Spectral f) {
    switch (f) {
        case Spectral::inverse:
            return SymmetricMatrix(raw::inverse(c.matrix()));
        case Spectral::sqrt:
            return SymmetricMatrix(raw::sqrtm(c.matrix()));
        case Spectral::invsqrt:
            return SymmetricMatrix(raw::invsqrtm(c.matrix()));
        case Spectral::log:
            return SymmetricMatrix(raw::logm(c.matrix()));
    }
    throw std::invalid_argument("spd_function: unknown spectral function");
}

SpdMatrix inverse(const SpdMatrix& c) {
    return SpdMatrix::assume_spd(raw::inverse(c.matrix()));
}

SpdMatrix sqrtm(const SpdMatrix& c) {
    return SpdMatrix::assume_spd(raw::sqrtm(c.matrix()));
}

SpdMatrix invsqrtm(const SpdMatrix& c) {
    return SpdMatrix::assume_spd(raw::invsqrtm(c.matrix()));
}

SymmetricMatrix logm(const SpdMatrix& c) {
    return SymmetricMatrix(raw::logm(c.matrix()));
}

SpdMatrix powm(const SpdMatrix& c, double p) {
    return SpdMatrix::assume_spd(raw::powm(c.matrix(), p));
}

SpdMatrix sym_exp(const SymmetricMatrix& s) {
    return SpdMatrix::assume_spd(raw::expm(s.matrix()));
}

SymmetricMatrix congruence(const SymmetricMatrix& c, const Matrix& f) {
    if (f.rows() != c.dim() || f.cols() != c.dim()) {
        std::ostringstream os;
        os << "congruence: transform is " << f.rows() << "x" << f.cols() << ", matrix dim "
           << c.dim();
        throw DimensionError(os.str());
    }
    return SymmetricMatrix(f * c.matrix() * f.transpose());
}

SpdMatrix congruence(const SpdMatrix& c, const Matrix& f) {
    return SpdMatrix(congruence(c.symmetric(), f));
}

double logdet(const SpdMatrix& c) {
    return raw::logdet(c.matrix());
}

double frobenius_distance(const Matrix& a, const Matrix& b) {
    return (a - b).norm();
}

}  // namespace spdmean
