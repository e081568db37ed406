#include "spdmean/means.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "spdmean/geometry.hpp"
#include "spdmean/kernels.hpp"

namespace spdmean {

namespace {

Matrix raw_arithmetic(const MatrixSet& set) {
    Matrix acc = Matrix::Zero(set.dim(), set.dim());
    for (const Matrix& c : set.raw()) acc += c;
    return acc / static_cast<double>(set.size());
}

Matrix starting_point(const MatrixSet& set, const SolverConfig& cfg) {
    if (cfg.warm_start) {
        if (cfg.warm_start->rows() != set.dim() || cfg.warm_start->cols() != set.dim()) {
            throw DimensionError("warm start does not match set dimension");
        }
        return SpdMatrix(*cfg.warm_start).matrix();
    }
    return raw_arithmetic(set);
}

// Tracks the stopping rule shared by the iterative solvers: absolute
// (criterion < epsilon) or relative to the first recorded value in dB.
class StopRule {
public:
    explicit StopRule(const SolverConfig& cfg) : cfg_(cfg) {}

    bool reached(double value) {
        if (!has_first_) {
            first_ = value;
            has_first_ = true;
        }
        if (!cfg_.stop_db) return value < cfg_.epsilon;
        if (value <= 0.0) return true;
        if (first_ <= 0.0) return true;
        return 10.0 * std::log10(value / first_) <= *cfg_.stop_db;
    }

private:
    const SolverConfig& cfg_;
    double first_ = 0.0;
    bool has_first_ = false;
};

Matrix congruence_raw(const Matrix& half, const Matrix& inner) {
    return symmetrize(half * inner * half);
}

}  // namespace

void SolverConfig::validate() const {
    if (!(epsilon > 0.0)) throw std::invalid_argument("SolverConfig: epsilon must be > 0");
    if (max_iter < 1) throw std::invalid_argument("SolverConfig: max_iter must be >= 1");
    if (!(initial_step > 0.0)) throw std::invalid_argument("SolverConfig: initial_step must be > 0");
    if (ajd.max_sweeps < 0) throw std::invalid_argument("SolverConfig: negative AJD sweep cap");
}

// --- closed forms ------------------------------------------------------------

SpdMatrix arithmetic_mean(const MatrixSet& set) {
    return SpdMatrix::assume_spd(raw_arithmetic(set));
}

SpdMatrix harmonic_mean(const MatrixSet& set) {
    Matrix acc = Matrix::Zero(set.dim(), set.dim());
    for (const Matrix& c : set.raw()) acc += raw::inverse(c);
    acc /= static_cast<double>(set.size());
    return SpdMatrix::assume_spd(raw::inverse(symmetrize(acc)));
}

SpdMatrix le_mean(const MatrixSet& set) {
    return SpdMatrix::assume_spd(raw::expm(kernels::mean_log(set.raw())));
}

double karcher_residual(const MatrixSet& set, const SpdMatrix& m) {
    return kernels::mean_log_congruence(set.raw(), raw::invsqrtm(m.matrix())).norm();
}

double bhat_residual(const MatrixSet& set, const SpdMatrix& m) {
    const Matrix s = kernels::sum_inverse_midpoints(set.raw(), m.matrix());
    return (s / static_cast<double>(set.size()) - raw::inverse(m.matrix())).norm();
}

// --- Bhattacharyya -----------------------------------------------------------

SolverReport bhat_mean(const MatrixSet& set, const SolverConfig& cfg) {
    cfg.validate();
    const double count = static_cast<double>(set.size());
    Matrix m = starting_point(set, cfg);
    StopRule stop(cfg);
    SolverReport rep{SpdMatrix::assume_spd(m)};
    for (int it = 1; it <= cfg.max_iter; ++it) {
        const Matrix s = kernels::sum_inverse_midpoints(set.raw(), m);
        Matrix next = raw::inverse(symmetrize(s)) * count;
        next = symmetrize(next);
        const double step = raw::fi_distance(m, next);
        m = std::move(next);
        rep.iterations = it;
        rep.criterion_trace.push_back(step);
        rep.trace_iterations.push_back(it);
        rep.final_residual = step;
        if (stop.reached(step)) {
            rep.converged = true;
            break;
        }
    }
    rep.mean = SpdMatrix::assume_spd(m);
    rep.equation_residual = bhat_residual(set, rep.mean);
    return rep;
}

// --- FI mean: gradient descent -----------------------------------------------

SolverReport fi_mean_gd(const MatrixSet& set, const SolverConfig& cfg) {
    cfg.validate();
    Matrix m = starting_point(set, cfg);
    double v = cfg.initial_step;
    double tau = std::numeric_limits<double>::max();
    StopRule stop(cfg);

    Matrix grad = kernels::mean_log_congruence(set.raw(), raw::invsqrtm(m));
    double r = grad.norm();
    SolverReport rep{SpdMatrix::assume_spd(m)};
    rep.criterion_trace.push_back(r);
    rep.trace_iterations.push_back(0);
    bool done = stop.reached(r);

    int it = 0;
    while (!done && it < cfg.max_iter) {
        ++it;
        const double h = v * r;
        if (h < tau) {
            const Matrix half = raw::sqrtm(m);
            m = congruence_raw(half, raw::expm(grad * v));
            v *= 0.95;
            tau = h;
            grad = kernels::mean_log_congruence(set.raw(), raw::invsqrtm(m));
            r = grad.norm();
            rep.criterion_trace.push_back(r);
            rep.trace_iterations.push_back(it);
            done = stop.reached(r);
        } else {
            v *= 0.5;
        }
        if (v < cfg.epsilon) break;
    }
    rep.mean = SpdMatrix::assume_spd(m);
    rep.iterations = it;
    rep.converged = done;
    rep.final_residual = r;
    rep.equation_residual = r;
    return rep;
}

// --- FI mean: majorization-minimization --------------------------------------

SolverReport fi_mean_mm(const MatrixSet& set, const SolverConfig& cfg) {
    cfg.validate();
    const std::vector<Matrix> sqrt_cs = kernels::map_sqrtm(set.raw());
    const std::vector<Matrix> invsqrt_cs = kernels::map_invsqrtm(set.raw());
    Matrix m = starting_point(set, cfg);
    StopRule stop(cfg);
    SolverReport rep{SpdMatrix::assume_spd(m)};
    for (int it = 1; it <= cfg.max_iter; ++it) {
        const kernels::MajorizerTerms terms = kernels::mm_accumulate(sqrt_cs, invsqrt_cs, m);
        Matrix p1_half;
        Matrix inner;
        try {
            p1_half = raw::sqrtm(terms.phi1);
            inner = raw::invsqrtm(symmetrize(p1_half * terms.phi2 * p1_half));
        } catch (const NotPositiveDefinite& e) {
            std::ostringstream os;
            os << "fi_mean_mm: majorizer accumulator lost positive definiteness at iteration "
               << it << ": " << e.what();
            throw NotPositiveDefinite(os.str(), e.eigenvalue());
        }
        Matrix next = congruence_raw(p1_half, inner);
        const double step = raw::fi_distance(m, next);
        m = std::move(next);
        rep.iterations = it;
        rep.criterion_trace.push_back(step);
        rep.trace_iterations.push_back(it);
        rep.final_residual = step;
        if (stop.reached(step)) {
            rep.converged = true;
            break;
        }
    }
    rep.mean = SpdMatrix::assume_spd(m);
    rep.equation_residual = karcher_residual(set, rep.mean);
    return rep;
}

// --- ALE ---------------------------------------------------------------------

AleResult ale_from_diagonalizer(const MatrixSet& set, const Matrix& b_in, const SolverConfig& cfg,
                                double alpha) {
    cfg.validate();
    if (!(alpha > 0.0)) throw std::invalid_argument("ale: alpha must be > 0");
    require_invertible(b_in, "ale");
    const double n = static_cast<double>(set.dim());
    Matrix b = b_in;
    StopRule stop(cfg);
    SolverReport rep{SpdMatrix::identity(set.dim())};
    for (int it = 1; it <= cfg.max_iter; ++it) {
        const Matrix t = kernels::mean_log_congruence(set.raw(), b);
        const Vector delta = raw::expm(t).diagonal() / alpha;
        b = delta.array().rsqrt().matrix().asDiagonal() * b;
        const double dist = std::sqrt(delta.array().log().square().sum()) / n;
        rep.iterations = it;
        rep.criterion_trace.push_back(dist);
        rep.trace_iterations.push_back(it);
        rep.final_residual = dist;
        if (stop.reached(dist)) {
            rep.converged = true;
            break;
        }
    }
    const Matrix t = kernels::mean_log_congruence(set.raw(), b);
    const Matrix e = raw::expm(t);
    Diagonalizer scaled(b, ajd_criterion(b, set));
    rep.mean = SpdMatrix::assume_spd(scaled.a() * e * scaled.a().transpose());
    // diag(B G B^T) = diag(exp(T)) should equal alpha.
    rep.equation_residual = (e.diagonal().array() - alpha).abs().maxCoeff();
    return AleResult{std::move(rep), AjdReport{scaled, {}, {}, 0, true}, scaled};
}

AleResult ale_mean_full(const MatrixSet& set, const SolverConfig& cfg, double alpha) {
    cfg.validate();
    AjdReport ajd = ajd_pham(set, cfg.ajd);
    AleResult out = ale_from_diagonalizer(set, ajd.diagonalizer.b(), cfg, alpha);
    out.report.converged = out.report.converged && ajd.converged;
    out.ajd = std::move(ajd);
    return out;
}

SolverReport ale_mean(const MatrixSet& set, const SolverConfig& cfg) {
    return ale_mean_full(set, cfg).report;
}

// --- square-root iterations --------------------------------------------------

SolverReport fi_mean_sqrt_iter(const MatrixSet& set, const SolverConfig& cfg, RootMode mode) {
    cfg.validate();
    const Matrix m0 = starting_point(set, cfg);
    Matrix a = raw::sqrtm(m0);
    Matrix b = raw::invsqrtm(m0);
    double v = cfg.initial_step;
    double tau = std::numeric_limits<double>::max();
    StopRule stop(cfg);

    Matrix grad = kernels::mean_log_congruence(set.raw(), b);
    double r = grad.norm();
    SolverReport rep{SpdMatrix::assume_spd(m0)};
    rep.criterion_trace.push_back(r);
    rep.trace_iterations.push_back(0);
    bool done = stop.reached(r);
    bool diverged = false;
    int growth = 0;

    int it = 0;
    while (!done && it < cfg.max_iter) {
        ++it;
        const double h = v * r;
        if (h < tau) {
            if (mode == RootMode::inverse_sqrt) {
                b = raw::expm(grad * (-0.5 * v)) * b;
            } else {
                a = a * raw::expm(grad * (0.5 * v));
                b = a.inverse();
            }
            v *= 0.95;
            tau = h;
            grad = kernels::mean_log_congruence(set.raw(), b);
            const double prev = r;
            r = grad.norm();
            rep.criterion_trace.push_back(r);
            rep.trace_iterations.push_back(it);
            done = stop.reached(r);
            growth = r > prev ? growth + 1 : 0;
            if (growth >= 10) {
                diverged = true;
                break;
            }
        } else {
            v *= 0.5;
        }
        if (v < cfg.epsilon) break;
    }

    const Matrix m = mode == RootMode::inverse_sqrt ? Matrix((b.transpose() * b).inverse())
                                                    : Matrix(a * a.transpose());
    rep.mean = SpdMatrix::assume_spd(m);
    rep.iterations = it;
    rep.converged = done && !diverged;
    rep.final_residual = r;
    rep.equation_residual = karcher_residual(set, rep.mean);
    return rep;
}

// --- AleBuffer ---------------------------------------------------------------

AleBuffer::AleBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw std::invalid_argument("AleBuffer: capacity must be >= 1");
}

MatrixSet AleBuffer::snapshot() const {
    if (members_.empty()) throw std::logic_error("AleBuffer: empty buffer");
    return MatrixSet({members_.begin(), members_.end()}, {weights_.begin(), weights_.end()});
}

void AleBuffer::push(const SpdMatrix& c, int n_sweeps, double weight) {
    if (!members_.empty() && c.dim() != members_.front().dim()) {
        std::ostringstream os;
        os << "AleBuffer::push: matrix dim " << c.dim() << ", buffer dim "
           << members_.front().dim();
        throw DimensionError(os.str());
    }
    if (n_sweeps < 0) throw std::invalid_argument("AleBuffer::push: negative sweep count");
    if (members_.size() == capacity_) {
        members_.pop_front();
        weights_.pop_front();
    }
    members_.push_back(c);
    weights_.push_back(weight);

    const MatrixSet set = snapshot();
    const Matrix arith = raw_arithmetic(set);
    Matrix b = b_ ? *b_ : raw::invsqrtm(arith);
    for (int s = 0; s < n_sweeps; ++s) {
        b = pham::sweep(set, b);
        pham::normalize_rows(b, arith);
    }
    SolverConfig cfg;
    cfg.max_iter = std::max(n_sweeps, 1);
    AleResult res = ale_from_diagonalizer(set, b, cfg);
    b_ = res.scaled.b();
    mean_ = res.report.mean;
}

const SpdMatrix& AleBuffer::mean() const {
    if (!mean_) throw std::logic_error("AleBuffer: empty buffer");
    return *mean_;
}

const Matrix& AleBuffer::demixing() const {
    if (!b_) throw std::logic_error("AleBuffer: empty buffer");
    return *b_;
}

}  // namespace spdmean
