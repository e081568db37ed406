#pragma once

// Dense symmetric linear algebra used by every other part of the library.
//
// All matrix functions go through the symmetric eigendecomposition
// C = U diag(w) U^T and return U diag(f(w)) U^T, re-symmetrized.

#include <Eigen/Dense>

#include <cstddef>
#include <functional>

#include "spdmean/errors.hpp"

namespace spdmean {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Relative floor: an SPD matrix must have lambda_min > kPdTol * lambda_max.
inline constexpr double kPdTol = 1e-12;

/// Returns (m + m^T) / 2. The result is exactly symmetric.
Matrix symmetrize(const Matrix& m);

class SymmetricMatrix {
public:
    /// Symmetrizes its input. Throws DimensionError for empty or non-square input.
    explicit SymmetricMatrix(const Matrix& m);

    static SymmetricMatrix zero(Eigen::Index n);
    static SymmetricMatrix identity(Eigen::Index n);

    Eigen::Index dim() const { return m_.rows(); }
    const Matrix& matrix() const { return m_; }
    double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

private:
    Matrix m_;
};

class SpdMatrix {
public:
    /// Symmetrizes, then checks positive definiteness against the relative
    /// floor. Throws NotPositiveDefinite carrying the offending eigenvalue.
    explicit SpdMatrix(const Matrix& m);
    explicit SpdMatrix(const SymmetricMatrix& s);

    /// Wraps a matrix that is SPD by construction (e.g. an exponential).
    /// Symmetrizes but skips the eigenvalue check.
    static SpdMatrix assume_spd(const Matrix& m);

    static SpdMatrix identity(Eigen::Index n);
    static SpdMatrix diagonal(const Vector& d);

    Eigen::Index dim() const { return s_.dim(); }
    const Matrix& matrix() const { return s_.matrix(); }
    const SymmetricMatrix& symmetric() const { return s_; }
    double operator()(Eigen::Index i, Eigen::Index j) const { return s_(i, j); }

private:
    struct Trusted {};
    SpdMatrix(Trusted, const Matrix& m) : s_(m) {}

    SymmetricMatrix s_;
};

/// Orthogonal eigenvectors (columns) and eigenvalues in descending order.
/// Each eigenvector has its first non-negligible component positive.
struct EigenPair {
    Matrix vectors;
    Vector values;
};

EigenPair sym_eigen(const SymmetricMatrix& s);

/// Same as sym_eigen but takes a raw matrix assumed symmetric.
EigenPair sym_eigen(const Matrix& s);

enum class Spectral { inverse, sqrt, invsqrt, log };

/// U f(W) U^T for f in {inverse, sqrt, invsqrt, log}. The log branch is
/// generally indefinite, so the generic form returns a SymmetricMatrix;
/// the typed wrappers below return SpdMatrix where the result is SPD.
SymmetricMatrix spd_function(const SpdMatrix& c, Spectral f);

SpdMatrix inverse(const SpdMatrix& c);
SpdMatrix sqrtm(const SpdMatrix& c);
SpdMatrix invsqrtm(const SpdMatrix& c);
SymmetricMatrix logm(const SpdMatrix& c);
SpdMatrix powm(const SpdMatrix& c, double p);

/// exp(S); throws RangeError when the largest eigenvalue overflows exp.
SpdMatrix sym_exp(const SymmetricMatrix& s);

/// F C F^T, re-symmetrized. Throws DimensionError if F is not N x N.
SymmetricMatrix congruence(const SymmetricMatrix& c, const Matrix& f);
SpdMatrix congruence(const SpdMatrix& c, const Matrix& f);

/// ln det C via Cholesky.
double logdet(const SpdMatrix& c);

/// Frobenius distance between two matrices.
double frobenius_distance(const Matrix& a, const Matrix& b);

// Raw kernels on Eigen matrices. Inputs are assumed symmetric; these skip the
// wrapper checks and are what the iterative solvers call in their loops.
namespace raw {

/// U diag(f(w)) U^T, re-symmetrized. Throws NotPositiveDefinite when
/// require_pd is set and the spectrum fails the relative floor.
Matrix spectral_map(const Matrix& s, const std::function<double(double)>& f, bool require_pd);

Matrix logm(const Matrix& spd);
Matrix expm(const Matrix& sym);
Matrix sqrtm(const Matrix& spd);
Matrix invsqrtm(const Matrix& spd);
Matrix inverse(const Matrix& spd);
Matrix powm(const Matrix& spd, double p);

/// ln det of an SPD matrix via Cholesky; throws NotPositiveDefinite.
double logdet(const Matrix& spd);

/// Throws NotPositiveDefinite if the relative floor is violated.
void check_spd(const Vector& eigenvalues_desc);

}  // namespace raw

}  // namespace spdmean
