#pragma once

// Experiment drivers behind the bench CLI. Each driver is a pure function of
// its options; rows come back sorted so the CSV bytes never depend on thread
// scheduling.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spdmean/means.hpp"
#include "spdmean/simgen.hpp"

namespace spdmean {

enum class Algorithm { GD, MM, Bha, LE, ALE, AjdPham, Arithmetic, Harmonic };

std::string_view algorithm_name(Algorithm a);
/// Exact, case-sensitive match against the registry names
/// (GD, MM, Bha, LE, ALE, AJD-Pham, Arithmetic, Harmonic).
std::optional<Algorithm> parse_algorithm(std::string_view name);
const std::vector<Algorithm>& all_algorithms();

/// Runs a mean estimator by registry name. Closed forms report zero
/// iterations and converged = true. Throws std::invalid_argument for AJD-Pham,
/// which does not produce a mean.
SolverReport run_mean(Algorithm a, const MatrixSet& set, const SolverConfig& cfg = {});

/// One row of any experiment. Unused fields stay at their defaults; the
/// per-figure CSV writers pick the columns they need. The duration is kept
/// out of every CSV so files stay byte-identical across runs.
struct ExperimentRecord {
    std::string experiment;
    std::uint64_t seed = 0;
    int dim = 0;
    int count = 0;
    double sigma = 0.0;
    Algorithm algorithm = Algorithm::GD;
    int iteration = 0;
    double criterion_db = 0.0;
    double trace = 0.0;
    double logdet_db = 0.0;
    double kappa = 1.0;
    int repeat = 0;
    double distance = 0.0;
    double duration_s = 0.0;
    /// Set when the producing solver did not converge.
    bool flagged = false;
};

struct ExperimentBase {
    int dim = 10;
    int count = 100;
    std::uint64_t seed = 1;
    double epsilon = 1e-9;
    /// Iteration cap for the iterative means (sweep cap for the AJD).
    int max_iter = 2000;
};

struct Fig5Options : ExperimentBase {
    std::vector<double> sigmas{0.01, 0.1, 1.0};
    double stop_db = -100.0;
};

struct Fig5Summary {
    double sigma = 0.0;
    Algorithm algorithm = Algorithm::GD;
    /// Iteration at which the criterion first reached stop_db, if it did.
    std::optional<int> iterations_to_stop;
};

struct Fig5Result {
    std::vector<ExperimentRecord> rows;
    std::vector<Fig5Summary> summary;
    bool flagged = false;
};

/// Convergence traces of GD, MM, Bha and the Pham AJD on one generated set
/// per sigma, each in dB relative to its first value.
Fig5Result run_fig5(const Fig5Options& opt);

struct Fig6Options : ExperimentBase {
    std::vector<double> sigmas{0.01, 0.05, 0.1, 0.2};
    /// GD and MM must land within this fi_distance of each other.
    double agreement_tol = 1e-6;
};

struct Fig6Result {
    std::vector<ExperimentRecord> rows;
    bool flagged = false;
};

/// Trace and 10 log10(det) of the GD, MM, LE, Bha and ALE means per sigma.
Fig6Result run_fig6(const Fig6Options& opt);

struct Fig7Options : ExperimentBase {
    std::vector<double> sigmas{0.01, 0.1, 1.0};
    std::vector<double> kappas{1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0};
    int repeats = 100;
};

struct Fig7Cell {
    double sigma = 0.0;
    double kappa = 1.0;
    double le = 0.0;
    double bha = 0.0;
    double ale = 0.0;
    int repeats = 0;
};

struct Fig7Result {
    /// Sorted by (sigma, kappa, repeat, algorithm).
    std::vector<ExperimentRecord> rows;
    /// Mean distances over the unflagged repeats of each cell.
    std::vector<Fig7Cell> cells;
    bool flagged = false;
};

/// Data seed of one Fig. 7 repeat. Shared across the (sigma, kappa) cells so
/// the cells differ only in the factors under study.
std::uint64_t fig7_repeat_seed(std::uint64_t seed, int repeat);

/// Distance of the LE, Bha and ALE means to the MM benchmark over a grid of
/// noise levels and mixing condition numbers. Repeats run in parallel.
/// A repeat whose benchmark fails to converge contributes a single flagged
/// MM row holding the benchmark's final step length.
Fig7Result run_fig7(const Fig7Options& opt);

void write_fig5_csv(std::ostream& os, const std::vector<ExperimentRecord>& rows);
void write_fig6_csv(std::ostream& os, const std::vector<ExperimentRecord>& rows);
void write_fig7_csv(std::ostream& os, const std::vector<ExperimentRecord>& rows);
/// sigma,kappa,algorithm,mean_distance: the values drawn in the Fig. 7 plot.
void write_fig7_means_csv(std::ostream& os, const std::vector<Fig7Cell>& cells);

}  // namespace spdmean
