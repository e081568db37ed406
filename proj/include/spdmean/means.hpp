#pragma once

// Mean estimators for sets of SPD matrices.
//
// Closed form: arithmetic, harmonic, log-Euclidean (LE).
// Iterative:   Bhattacharyya fixed point, Fisher-information (FI / Karcher)
//              mean by step-adaptive gradient descent (GD) and by
//              majorization-minimization (MM), the AJD-based log-Euclidean
//              mean (ALE), and GD variants that track a square root or an
//              inverse square root of the FI mean.
// Online:      AleBuffer keeps an ALE mean over a sliding window.

#include <deque>
#include <optional>
#include <vector>

#include "spdmean/ajd.hpp"
#include "spdmean/matrix_set.hpp"

namespace spdmean {

struct SolverConfig {
    double epsilon = 1e-9;
    int max_iter = 500;
    /// Initial GD step size v.
    double initial_step = 1.0;
    /// When set, stop once 10 log10(criterion / first criterion) <= stop_db
    /// instead of comparing the criterion against epsilon.
    std::optional<double> stop_db;
    /// Starting point; the arithmetic mean when absent.
    std::optional<Matrix> warm_start;
    /// AJD settings used by the ALE mean.
    AjdConfig ajd;

    /// Throws std::invalid_argument on a non-positive epsilon, step or cap.
    void validate() const;
};

struct SolverReport {
    explicit SolverReport(SpdMatrix m) : mean(std::move(m)) {}

    SpdMatrix mean;
    int iterations = 0;
    bool converged = false;
    /// Values of the solver's own stopping criterion, one per distinct iterate.
    std::vector<double> criterion_trace;
    /// Loop iteration at which each trace value was produced.
    std::vector<int> trace_iterations;
    /// Last value of the stopping criterion (<= epsilon when converged in
    /// absolute mode).
    double final_residual = 0.0;
    /// Residual of the defining fixed-point equation at the returned mean:
    /// Karcher equation for the FI solvers, the log-det equation for the
    /// Bhattacharyya mean, whitening defect for ALE.
    double equation_residual = 0.0;
};

/// ALE result with the scaled demixing matrix and the AJD run behind it.
struct AleResult {
    SolverReport report;
    AjdReport ajd;
    Diagonalizer scaled;
};

SpdMatrix arithmetic_mean(const MatrixSet& set);
SpdMatrix harmonic_mean(const MatrixSet& set);

/// exp((1/K) sum_k ln C_k).
SpdMatrix le_mean(const MatrixSet& set);

/// M <- K [sum_k ((C_k + M)/2)^{-1}]^{-1}; stops on fi_distance between
/// successive iterates.
SolverReport bhat_mean(const MatrixSet& set, const SolverConfig& cfg = {});

/// Gradient descent on the FI mean with the heuristic step-size schedule
/// (accepted step: v *= 0.95; rejected step: v *= 0.5).
SolverReport fi_mean_gd(const MatrixSet& set, const SolverConfig& cfg = {});

/// Majorization-minimization FI mean; each step solves M Phi2 M = Phi1.
SolverReport fi_mean_mm(const MatrixSet& set, const SolverConfig& cfg = {});

/// AJD, then rows of B rescaled until diag(exp((1/K) sum ln(B C_k B^T))) = I,
/// then G = A exp((1/K) sum_k ln(B C_k B^T)) A^T with A = B^{-1}.
SolverReport ale_mean(const MatrixSet& set, const SolverConfig& cfg = {});

/// Same as ale_mean, keeping the diagonalizers. `alpha` is the common
/// diagonal value targeted by the scaling loop; the mean does not depend on it.
AleResult ale_mean_full(const MatrixSet& set, const SolverConfig& cfg = {}, double alpha = 1.0);

/// ALE mean from a given demixing matrix, skipping the AJD.
AleResult ale_from_diagonalizer(const MatrixSet& set, const Matrix& b, const SolverConfig& cfg,
                                double alpha = 1.0);

enum class RootMode { inverse_sqrt, sqrt };

/// GD on B (inverse square root, returns (B^T B)^{-1}) or on A (square root,
/// returns A A^T). Reports non-convergence if the residual grows over 10
/// consecutive accepted steps.
SolverReport fi_mean_sqrt_iter(const MatrixSet& set, const SolverConfig& cfg, RootMode mode);

/// ||(1/K) sum_k ln(M^{-1/2} C_k M^{-1/2})||_F; zero exactly at the FI mean.
double karcher_residual(const MatrixSet& set, const SpdMatrix& m);

/// ||(2/K) sum_k (M + C_k)^{-1} - M^{-1}||_F; zero at the Bhattacharyya mean.
double bhat_residual(const MatrixSet& set, const SpdMatrix& m);

/// Sliding-window ALE mean. Each push evicts the oldest member when full,
/// then refines the cached diagonalizer with a few warm-started sweeps.
class AleBuffer {
public:
    explicit AleBuffer(std::size_t capacity);

    /// Throws DimensionError when c does not match the buffered dimension.
    void push(const SpdMatrix& c, int n_sweeps = 2, double weight = 1.0);

    std::size_t size() const { return members_.size(); }
    std::size_t capacity() const { return capacity_; }
    bool empty() const { return members_.empty(); }

    /// Throws std::logic_error on an empty buffer.
    const SpdMatrix& mean() const;
    const Matrix& demixing() const;

    MatrixSet snapshot() const;

private:
    std::size_t capacity_;
    std::deque<SpdMatrix> members_;
    std::deque<double> weights_;
    std::optional<Matrix> b_;
    std::optional<SpdMatrix> mean_;
};

}  // namespace spdmean
