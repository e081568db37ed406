#include "spdmean/ajd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace spdmean {

void require_invertible(const Matrix& m, const char* who) {
    if (m.rows() == 0 || m.rows() != m.cols()) {
        throw DimensionError(std::string(who) + ": expected a square matrix");
    }
    if (!m.allFinite()) throw SingularMatrix(std::string(who) + ": non-finite entries");
    Eigen::JacobiSVD<Matrix> svd(m);
    const Vector& s = svd.singularValues();
    if (!(s(s.size() - 1) > 1e-14 * s(0))) {
        std::ostringstream os;
        os << who << ": matrix is numerically singular (singular values " << s(0) << " .. "
           << s(s.size() - 1) << ")";
        throw SingularMatrix(os.str());
    }
}

Diagonalizer::Diagonalizer(Matrix b, double criterion_value)
    : b_(std::move(b)), criterion_(criterion_value) {
    require_invertible(b_, "Diagonalizer");
    a_ = b_.inverse();
}

namespace {

struct CriterionValue {
    double value;
    /// Rounding bound of the evaluation; decrements below it are not measurable.
    double resolution;
};

CriterionValue evaluate_criterion(const Matrix& b, const MatrixSet& set) {
    if (b.rows() != set.dim() || b.cols() != set.dim()) {
        throw DimensionError("ajd_criterion: transform does not match set dimension");
    }
    require_invertible(b, "ajd_criterion");
    double total = 0.0;
    double magnitude = 0.0;
    for (std::size_t k = 0; k < set.size(); ++k) {
        const Matrix m = symmetrize(b * set.raw()[k] * b.transpose());
        const double log_diag = m.diagonal().array().log().sum();
        const double log_det = raw::logdet(m);
        total += set.weights()[k] * std::max(log_diag - log_det, 0.0);
        magnitude += set.weights()[k] * (std::abs(log_diag) + std::abs(log_det) + 1.0);
    }
    const double eps = std::numeric_limits<double>::epsilon();
    return {total, 8.0 * static_cast<double>(set.dim()) * eps * magnitude};
}

}  // namespace

double ajd_criterion(const Matrix& b, const MatrixSet& set) {
    return evaluate_criterion(b, set).value;
}

Diagonalizer jd2(const SpdMatrix& c1, const SpdMatrix& c2) {
    if (c1.dim() != c2.dim()) throw DimensionError("jd2: dimension mismatch");
    const Matrix w = raw::invsqrtm(c1.matrix());
    const EigenPair ep = sym_eigen(symmetrize(w * c2.matrix() * w));
    Matrix b = ep.vectors.transpose() * w;
    const double j = ajd_criterion(b, MatrixSet({c1, c2}));
    return Diagonalizer(std::move(b), j);
}

Diagonalizer jd2_unit_scaled(const SpdMatrix& c1, const SpdMatrix& c2) {
    if (c1.dim() != c2.dim()) throw DimensionError("jd2_unit_scaled: dimension mismatch");
    const Matrix w = raw::invsqrtm(c1.matrix());
    const EigenPair ep = sym_eigen(symmetrize(w * c2.matrix() * w));
    raw::check_spd(ep.values);
    // Row i of B currently gives d1 = 1, d2 = lambda_i; scale it by lambda_i^{-1/4}.
    const Vector scale = ep.values.array().pow(-0.25);
    Matrix b = scale.asDiagonal() * ep.vectors.transpose() * w;
    const double j = ajd_criterion(b, MatrixSet({c1, c2}));
    return Diagonalizer(std::move(b), j);
}

namespace pham {

void normalize_rows(Matrix& b, const Matrix& reference) {
    const Matrix br = b * reference;
    for (Eigen::Index i = 0; i < b.rows(); ++i) {
        const double d = br.row(i).dot(b.row(i));
        if (!(d > 0.0)) throw SingularMatrix("normalize_rows: non-positive row energy");
        b.row(i) /= std::sqrt(d);
    }
}

Matrix sweep(const MatrixSet& set, Matrix b) {
    const Eigen::Index n = b.rows();
    const std::size_t count = set.size();
    std::vector<Matrix> ms;
    ms.reserve(count);
    for (const Matrix& c : set.raw()) ms.push_back(symmetrize(b * c * b.transpose()));

    double weight_sum = 0.0;
    for (double w : set.weights()) weight_sum += w;
    std::vector<double> w(count);
    for (std::size_t k = 0; k < count; ++k) w[k] = set.weights()[k] / weight_sum;

    for (Eigen::Index i = 1; i < n; ++i) {
        for (Eigen::Index j = 0; j < i; ++j) {
            double g12 = 0.0, g21 = 0.0, omega21 = 0.0, omega12 = 0.0;
            for (std::size_t k = 0; k < count; ++k) {
                const Matrix& m = ms[k];
                const double cii = m(i, i), cjj = m(j, j), cij = m(i, j);
                g12 += w[k] * cij / cii;
                g21 += w[k] * cij / cjj;
                omega21 += w[k] * cii / cjj;
                omega12 += w[k] * cjj / cii;
            }
            // Solve [omega12 1; 1 omega21] [e_ij; e_ji] = [g12; g21]; h = 2e.
            const double omega = std::sqrt(omega12 * omega21);
            const double ratio = std::sqrt(omega21 / omega12);
            const double t1 = (ratio * g12 + g21) / (omega + 1.0);
            const double t2 = (ratio * g12 - g21) / std::max(omega - 1.0, 1e-9);
            const double h12 = t1 + t2;
            const double h21 = (t1 - t2) / ratio;
            const double denom = 1.0 + std::sqrt(std::max(1.0 - h12 * h21, 0.0));
            const double t12 = -h12 / denom;
            const double t21 = -h21 / denom;

            const Eigen::RowVectorXd bi = b.row(i);
            const Eigen::RowVectorXd bj = b.row(j);
            b.row(i) = bi + t12 * bj;
            b.row(j) = t21 * bi + bj;
            for (Matrix& m : ms) {
                const Eigen::RowVectorXd ri = m.row(i);
                const Eigen::RowVectorXd rj = m.row(j);
                m.row(i) = ri + t12 * rj;
                m.row(j) = t21 * ri + rj;
                const Vector ci = m.col(i);
                const Vector cj = m.col(j);
                m.col(i) = ci + t12 * cj;
                m.col(j) = t21 * ci + cj;
            }
        }
    }
    return b;
}

double gradient_norm(const MatrixSet& set, const Matrix& b) {
    const Eigen::Index n = b.rows();
    double weight_sum = 0.0;
    for (double w : set.weights()) weight_sum += w;
    Matrix g = Matrix::Zero(n, n);
    for (std::size_t k = 0; k < set.size(); ++k) {
        const Matrix m = symmetrize(b * set.raw()[k] * b.transpose());
        const double w = set.weights()[k] / weight_sum;
        for (Eigen::Index i = 0; i < n; ++i) g.row(i) += (w / m(i, i)) * m.row(i);
    }
    g.diagonal().setZero();
    return g.norm();
}

Matrix initial_transform(const MatrixSet& set) {
    const Eigen::Index n = set.dim();
    Matrix arith = Matrix::Zero(n, n);
    Matrix harm = Matrix::Zero(n, n);
    for (const Matrix& c : set.raw()) {
        const double scale = std::exp(raw::logdet(c) / static_cast<double>(n));
        arith += c / scale;
        harm += raw::inverse(c) * scale;
    }
    harm = raw::inverse(symmetrize(harm));
    const Matrix w = raw::invsqrtm(symmetrize(arith));
    const EigenPair ep = sym_eigen(symmetrize(w * harm * w));
    return ep.vectors.transpose() * w;
}

std::optional<NewtonStep> newton_step(const MatrixSet& set, const Matrix& b) {
    const Eigen::Index n = b.rows();
    const std::size_t count = set.size();
    if (n < 2) return std::nullopt;
    const Eigen::Index params = n * (n - 1);
    // Row-major index of the off-diagonal entry E(i, j).
    auto idx = [n](Eigen::Index i, Eigen::Index j) { return i * (n - 1) + (j < i ? j : j - 1); };

    double weight_sum = 0.0;
    for (double w : set.weights()) weight_sum += w;

    Matrix hess = Matrix::Zero(params, params);
    Vector grad = Vector::Zero(params);
    for (std::size_t k = 0; k < count; ++k) {
        const double w = set.weights()[k] / weight_sum;
        const Matrix m = symmetrize(b * set.raw()[k] * b.transpose());
        for (Eigen::Index i = 0; i < n; ++i) {
            const double mii = m(i, i);
            for (Eigen::Index p = 0; p < n; ++p) {
                if (p == i) continue;
                grad(idx(i, p)) += w * m(i, p) / mii;
                for (Eigen::Index q = 0; q < n; ++q) {
                    if (q == i) continue;
                    hess(idx(i, p), idx(i, q)) +=
                        w * (m(p, q) / mii - 2.0 * m(p, i) * m(q, i) / (mii * mii));
                }
            }
        }
    }
    // Coupling from -2 ln|det(I + E)|.
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (i != j) hess(idx(i, j), idx(j, i)) += 1.0;

    Eigen::LLT<Matrix> llt(symmetrize(hess));
    if (llt.info() != Eigen::Success) return std::nullopt;
    const Vector step = llt.solve(-grad);
    if (!step.allFinite()) return std::nullopt;

    Matrix t = Matrix::Identity(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (i != j) t(i, j) = step(idx(i, j));
    // grad and hess above are half the derivatives of the weight-normalized
    // criterion, so the model decrease g^T H^{-1} g needs no extra factor.
    return NewtonStep{t * b, -weight_sum * grad.dot(step)};
}

}  // namespace pham

AjdReport ajd_pham(const MatrixSet& set, const AjdConfig& config,
                   const std::optional<Matrix>& init) {
    const Eigen::Index n = set.dim();
    Matrix arith = Matrix::Zero(n, n);
    for (const Matrix& c : set.raw()) arith += c;
    arith /= static_cast<double>(set.size());

    Matrix b = init ? *init : pham::initial_transform(set);
    if (b.rows() != n || b.cols() != n) {
        throw DimensionError("ajd_pham: initial transform does not match set dimension");
    }
    require_invertible(b, "ajd_pham");
    pham::normalize_rows(b, arith);

    CriterionValue current = evaluate_criterion(b, set);
    const double initial = current.value;
    std::vector<double> trace{current.value};
    std::vector<double> decrement_db;
    int sweeps = 0;
    // J >= 0, so a value inside its own rounding bound is a zero criterion.
    bool converged = initial <= current.resolution;

    bool near_optimum = false;
    while (!converged && sweeps < config.max_sweeps) {
        std::optional<Matrix> next;
        std::optional<double> predicted;
        CriterionValue value{0.0, 0.0};
        bool flat = false;
        if (near_optimum && config.newton_polish) {
            if (auto step = pham::newton_step(set, b)) {
                next = std::move(step->b);
                predicted = step->predicted_decrement;
            }
            if (next) {
                try {
                    pham::normalize_rows(*next, arith);
                    value = evaluate_criterion(*next, set);
                } catch (const std::domain_error&) {
                    next.reset();
                }
            }
            if (next && !(value.value < current.value)) {
                // Below the rounding of the criterion only the gradient still
                // tells whether the step moved towards the minimum.
                flat = value.value - current.value <= std::max(current.resolution, value.resolution) &&
                       pham::gradient_norm(set, *next) < pham::gradient_norm(set, b);
                if (!flat) next.reset();
            }
        }
        if (!next) {
            predicted.reset();
            next = pham::sweep(set, b);
            require_invertible(*next, "ajd_pham sweep");
            pham::normalize_rows(*next, arith);
            value = evaluate_criterion(*next, set);
        }
        if (!std::isfinite(value.value)) {
            throw NumericalError("ajd_pham: criterion became non-finite");
        }
        ++sweeps;
        const double decrement = current.value - value.value;
        if (flat || !(decrement > 0.0)) {
            // No measurable decrease: the evaluation resolution bounds the true
            // decrement; a Newton step's model prediction refines that bound.
            // Either way stop here. A flat Newton step is kept; its criterion
            // equals the previous one up to rounding.
            double bound = std::max(current.resolution, value.resolution);
            if (flat && predicted && *predicted >= 0.0) bound = std::min(bound, *predicted);
            const double db = 10.0 * std::log10(bound / initial);
            if (flat) {
                b = std::move(*next);
                current = {std::min(current.value, value.value), value.resolution};
            }
            trace.push_back(current.value);
            decrement_db.push_back(db);
            converged = db < config.stop_db || current.value <= bound;
            break;
        }
        b = std::move(*next);
        current = value;
        trace.push_back(current.value);
        const double db = 10.0 * std::log10(decrement / initial);
        decrement_db.push_back(db);
        if (db < config.newton_switch_db) near_optimum = true;
        if (db < config.stop_db) converged = true;
    }

    return AjdReport{Diagonalizer(std::move(b), current.value), std::move(trace),
                     std::move(decrement_db), sweeps, converged};
}

}  // namespace spdmean
