#pragma once

// Exact joint diagonalization of two SPD matrices and approximate joint
// diagonalization (AJD) of a set under Pham's log-det criterion
//
//   J(B) = sum_k w_k (ln|diag(B C_k B^T)| - ln|B C_k B^T|)  >= 0,
//
// which vanishes iff every B C_k B^T is diagonal.

#include <optional>
#include <vector>

#include "spdmean/matrix_set.hpp"

namespace spdmean {

/// An invertible demixing matrix B with its inverse A and criterion value.
/// Solutions are only defined up to row permutation and row scaling.
class Diagonalizer {
public:
    /// Throws SingularMatrix when B is numerically singular.
    Diagonalizer(Matrix b, double criterion_value);

    const Matrix& b() const { return b_; }
    const Matrix& a() const { return a_; }
    double criterion_value() const { return criterion_; }

private:
    Matrix b_;
    Matrix a_;
    double criterion_;
};

struct AjdConfig {
    /// Stop when 10 log10(sweep decrement / initial criterion) drops below this.
    double stop_db = -100.0;
    int max_sweeps = 1000;
    /// Once a sweep's decrement drops below newton_switch_db, try a full
    /// relative-Newton step on all off-diagonal parameters before falling
    /// back to a pairwise sweep. Either way the criterion strictly decreases.
    bool newton_polish = true;
    double newton_switch_db = -20.0;
};

struct AjdReport {
    Diagonalizer diagonalizer;
    /// Criterion after initialization, then after every sweep. A final sweep
    /// that cannot measurably decrease it repeats the last value.
    std::vector<double> criterion_trace;
    /// Per-sweep decrement relative to the initial criterion, in dB. For a
    /// final step whose decrease is below the rounding of the criterion this
    /// is the Newton model's prediction, capped by that rounding bound.
    std::vector<double> decrement_db;
    int sweeps = 0;
    bool converged = false;
};

/// Generalized eigendecomposition: rows of B are the eigenvectors of
/// C1^{-1/2} C2 C1^{-1/2}, right-multiplied by C1^{-1/2}.
/// Then B C1 B^T = I and B C2 B^T = diag(lambda).
Diagonalizer jd2(const SpdMatrix& c1, const SpdMatrix& c2);

/// jd2 with rows scaled so (B C1 B^T)(B C2 B^T) = I; then A A^T = C1 # C2.
Diagonalizer jd2_unit_scaled(const SpdMatrix& c1, const SpdMatrix& c2);

/// Pham's criterion. Throws SingularMatrix if B is singular and
/// DimensionError on shape mismatch.
double ajd_criterion(const Matrix& b, const MatrixSet& set);

/// Jacobi-like sweeps of pairwise row transforms, each a Newton-type step on
/// the 2x2 subproblem of the criterion. Starts from pham::initial_transform
/// unless `init` is given. Hitting the sweep cap is reported through
/// `converged`, not thrown.
AjdReport ajd_pham(const MatrixSet& set, const AjdConfig& config = {},
                   const std::optional<Matrix>& init = std::nullopt);

namespace pham {

/// Joint diagonalizer of the arithmetic and harmonic means of the members
/// normalized to unit determinant. Unlike invsqrt(arithmetic mean) this start
/// is unaffected by rescaling members and follows congruence C -> F C F^T up
/// to row scaling, so the whole AJD run inherits both invariances.
Matrix initial_transform(const MatrixSet& set);

/// One sweep over all row pairs (i, j), i > j, starting from B.
Matrix sweep(const MatrixSet& set, Matrix b);

struct NewtonStep {
    Matrix b;
    /// Decrease of the criterion predicted by the local quadratic model.
    /// Unlike a difference of two criterion values it has no cancellation,
    /// so it stays meaningful below the rounding level of the criterion.
    double predicted_decrement = 0.0;
};

/// Newton step B <- (I + E) B on the off-diagonal entries of E, using the
/// exact Hessian of the criterion at E = 0. Empty when that Hessian is not
/// positive definite.
std::optional<NewtonStep> newton_step(const MatrixSet& set, const Matrix& b);

/// Frobenius norm of the relative gradient: off-diagonal entries of the
/// weighted mean of (B C_k B^T)_ij / (B C_k B^T)_ii.
double gradient_norm(const MatrixSet& set, const Matrix& b);

/// Scales rows of B so that diag(B R B^T) = I.
void normalize_rows(Matrix& b, const Matrix& reference);

}  // namespace pham

/// Throws SingularMatrix when the ratio of extreme singular values of m is
/// below 1e-14.
void require_invertible(const Matrix& m, const char* who);

}  // namespace spdmean
