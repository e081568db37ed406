#include "spdmean/experiments.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <exception>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "spdmean/geometry.hpp"
#include "spdmean/set_io.hpp"

namespace spdmean {

namespace {

constexpr std::array<std::pair<Algorithm, std::string_view>, 8> kNames{{
    {Algorithm::GD, "GD"},
    {Algorithm::MM, "MM"},
    {Algorithm::Bha, "Bha"},
    {Algorithm::LE, "LE"},
    {Algorithm::ALE, "ALE"},
    {Algorithm::AjdPham, "AJD-Pham"},
    {Algorithm::Arithmetic, "Arithmetic"},
    {Algorithm::Harmonic, "Harmonic"},
}};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double to_db(double value, double reference) {
    return 10.0 * std::log10(value / reference);
}

double logdet_db(const SpdMatrix& m) {
    return 10.0 * logdet(m) / std::numbers::ln10;
}

SolverConfig solver_config(const ExperimentBase& opt) {
    SolverConfig cfg;
    cfg.epsilon = opt.epsilon;
    cfg.max_iter = opt.max_iter;
    cfg.ajd.max_sweeps = opt.max_iter;
    return cfg;
}

GeneratedSet make_set(const ExperimentBase& opt, double sigma, std::uint64_t seed,
                      std::optional<double> kappa = std::nullopt) {
    GeneratorConfig g;
    g.dim = opt.dim;
    g.count = opt.count;
    g.noise_sigma = sigma;
    g.seed = seed;
    g.cond_target = kappa;
    return generate(g);
}

SolverReport closed_form_report(SpdMatrix m) {
    SolverReport rep{std::move(m)};
    rep.converged = true;
    return rep;
}

// Emits one row per recorded criterion value of an iterative mean.
void append_trace(std::vector<ExperimentRecord>& rows, const ExperimentRecord& proto,
                  const SolverReport& rep, double stop_db, std::optional<int>& reached) {
    if (rep.criterion_trace.empty()) return;
    const double ref = rep.criterion_trace.front();
    for (std::size_t i = 0; i < rep.criterion_trace.size(); ++i) {
        ExperimentRecord r = proto;
        r.iteration = rep.trace_iterations[i];
        const double value = rep.criterion_trace[i];
        // A zero step means the iterate stopped moving; report it at the threshold.
        r.criterion_db = value > 0.0 ? to_db(value, ref) : stop_db;
        if (!reached && r.criterion_db <= stop_db) reached = r.iteration;
        rows.push_back(r);
    }
}

template <class Fn>
void parallel_for(int count, Fn fn) {
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < count; ++i) {
        try {
            fn(i);
        } catch (...) {
#pragma omp critical(spdmean_experiment_error)
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace

std::string_view algorithm_name(Algorithm a) {
    for (const auto& [alg, name] : kNames)
        if (alg == a) return name;
    throw std::invalid_argument("unknown algorithm");
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
    for (const auto& [alg, n] : kNames)
        if (n == name) return alg;
    return std::nullopt;
}

const std::vector<Algorithm>& all_algorithms() {
    static const std::vector<Algorithm> algs = [] {
        std::vector<Algorithm> v;
        for (const auto& [alg, name] : kNames) v.push_back(alg);
        return v;
    }();
    return algs;
}

SolverReport run_mean(Algorithm a, const MatrixSet& set, const SolverConfig& cfg) {
    switch (a) {
        case Algorithm::GD: return fi_mean_gd(set, cfg);
        case Algorithm::MM: return fi_mean_mm(set, cfg);
        case Algorithm::Bha: return bhat_mean(set, cfg);
        case Algorithm::ALE: return ale_mean(set, cfg);
        case Algorithm::LE: return closed_form_report(le_mean(set));
        case Algorithm::Arithmetic: return closed_form_report(arithmetic_mean(set));
        case Algorithm::Harmonic: return closed_form_report(harmonic_mean(set));
        case Algorithm::AjdPham: break;
    }
    throw std::invalid_argument("AJD-Pham is a diagonalizer, not a mean");
}

// --- Fig. 5 ------------------------------------------------------------------

Fig5Result run_fig5(const Fig5Options& opt) {
    Fig5Result out;
    SolverConfig cfg = solver_config(opt);
    cfg.stop_db = opt.stop_db;
    AjdConfig ajd = cfg.ajd;
    ajd.stop_db = opt.stop_db;

    for (double sigma : opt.sigmas) {
        const GeneratedSet g = make_set(opt, sigma, opt.seed);
        ExperimentRecord proto;
        proto.experiment = "fig5";
        proto.seed = opt.seed;
        proto.dim = opt.dim;
        proto.count = opt.count;
        proto.sigma = sigma;

        for (Algorithm a : {Algorithm::GD, Algorithm::MM, Algorithm::Bha}) {
            const auto t0 = std::chrono::steady_clock::now();
            const SolverReport rep = run_mean(a, g.set, cfg);
            proto.algorithm = a;
            proto.duration_s = seconds_since(t0);
            proto.flagged = !rep.converged;
            Fig5Summary s{sigma, a, std::nullopt};
            append_trace(out.rows, proto, rep, opt.stop_db, s.iterations_to_stop);
            out.flagged = out.flagged || !rep.converged || !s.iterations_to_stop;
            out.summary.push_back(s);
        }

        const auto t0 = std::chrono::steady_clock::now();
        const AjdReport rep = ajd_pham(g.set, ajd);
        proto.algorithm = Algorithm::AjdPham;
        proto.duration_s = seconds_since(t0);
        proto.flagged = !rep.converged;
        Fig5Summary s{sigma, Algorithm::AjdPham, std::nullopt};
        for (std::size_t i = 0; i < rep.decrement_db.size(); ++i) {
            ExperimentRecord r = proto;
            r.iteration = static_cast<int>(i) + 1;
            r.criterion_db = rep.decrement_db[i];
            if (!s.iterations_to_stop && r.criterion_db <= opt.stop_db) {
                s.iterations_to_stop = r.iteration;
            }
            out.rows.push_back(r);
        }
        out.flagged = out.flagged || !rep.converged || !s.iterations_to_stop;
        out.summary.push_back(s);
    }
    return out;
}

// --- Fig. 6 ------------------------------------------------------------------

Fig6Result run_fig6(const Fig6Options& opt) {
    Fig6Result out;
    const SolverConfig cfg = solver_config(opt);
    for (double sigma : opt.sigmas) {
        const GeneratedSet g = make_set(opt, sigma, opt.seed);
        std::optional<SpdMatrix> gd_mean;
        for (Algorithm a : {Algorithm::GD, Algorithm::MM, Algorithm::LE, Algorithm::Bha,
                            Algorithm::ALE}) {
            const auto t0 = std::chrono::steady_clock::now();
            const SolverReport rep = run_mean(a, g.set, cfg);
            ExperimentRecord r;
            r.experiment = "fig6";
            r.seed = opt.seed;
            r.dim = opt.dim;
            r.count = opt.count;
            r.sigma = sigma;
            r.algorithm = a;
            r.trace = rep.mean.matrix().trace();
            r.logdet_db = logdet_db(rep.mean);
            r.duration_s = seconds_since(t0);
            r.flagged = !rep.converged;
            if (a == Algorithm::GD) gd_mean = rep.mean;
            if (a == Algorithm::MM && fi_distance(*gd_mean, rep.mean) >= opt.agreement_tol) {
                r.flagged = true;
            }
            out.flagged = out.flagged || r.flagged;
            out.rows.push_back(r);
        }
    }
    return out;
}

// --- Fig. 7 ------------------------------------------------------------------

std::uint64_t fig7_repeat_seed(std::uint64_t seed, int repeat) {
    return stream_seed(seed, StreamRole::test_data, static_cast<std::uint64_t>(repeat));
}

Fig7Result run_fig7(const Fig7Options& opt) {
    if (opt.repeats < 1) throw std::invalid_argument("fig7: repeats must be >= 1");
    const SolverConfig cfg = solver_config(opt);
    const int n_sigma = static_cast<int>(opt.sigmas.size());
    const int n_kappa = static_cast<int>(opt.kappas.size());
    const int tasks = n_sigma * n_kappa * opt.repeats;
    std::vector<std::vector<ExperimentRecord>> per_task(static_cast<std::size_t>(tasks));

    parallel_for(tasks, [&](int t) {
        const int repeat = t % opt.repeats;
        const int cell = t / opt.repeats;
        const double sigma = opt.sigmas[static_cast<std::size_t>(cell / n_kappa)];
        const double kappa = opt.kappas[static_cast<std::size_t>(cell % n_kappa)];
        const std::uint64_t seed = fig7_repeat_seed(opt.seed, repeat);
        const auto t0 = std::chrono::steady_clock::now();
        const GeneratedSet g = make_set(opt, sigma, seed, kappa);

        ExperimentRecord proto;
        proto.experiment = "fig7";
        proto.seed = seed;
        proto.dim = opt.dim;
        proto.count = opt.count;
        proto.sigma = sigma;
        proto.kappa = kappa;
        proto.repeat = repeat;

        auto& rows = per_task[static_cast<std::size_t>(t)];
        const SolverReport bench = fi_mean_mm(g.set, cfg);
        if (!bench.converged) {
            ExperimentRecord r = proto;
            r.algorithm = Algorithm::MM;
            r.distance = bench.final_residual;
            r.flagged = true;
            r.duration_s = seconds_since(t0);
            rows.push_back(r);
            return;
        }
        for (Algorithm a : {Algorithm::LE, Algorithm::Bha, Algorithm::ALE}) {
            const SolverReport rep = run_mean(a, g.set, cfg);
            ExperimentRecord r = proto;
            r.algorithm = a;
            r.distance = fi_distance(rep.mean, bench.mean);
            r.flagged = !rep.converged;
            r.duration_s = seconds_since(t0);
            rows.push_back(r);
        }
    });

    Fig7Result out;
    for (auto& rows : per_task)
        for (auto& r : rows) out.rows.push_back(std::move(r));
    std::sort(out.rows.begin(), out.rows.end(), [](const auto& a, const auto& b) {
        if (a.sigma != b.sigma) return a.sigma < b.sigma;
        if (a.kappa != b.kappa) return a.kappa < b.kappa;
        if (a.repeat != b.repeat) return a.repeat < b.repeat;
        return algorithm_name(a.algorithm) < algorithm_name(b.algorithm);
    });

    for (double sigma : opt.sigmas) {
        for (double kappa : opt.kappas) {
            Fig7Cell cell{sigma, kappa};
            std::vector<char> bad(static_cast<std::size_t>(opt.repeats), 0);
            for (const auto& r : out.rows)
                if (r.sigma == sigma && r.kappa == kappa && r.flagged)
                    bad[static_cast<std::size_t>(r.repeat)] = 1;
            for (const auto& r : out.rows) {
                if (r.sigma != sigma || r.kappa != kappa || bad[static_cast<std::size_t>(r.repeat)])
                    continue;
                if (r.algorithm == Algorithm::LE) cell.le += r.distance;
                if (r.algorithm == Algorithm::Bha) cell.bha += r.distance;
                if (r.algorithm == Algorithm::ALE) {
                    cell.ale += r.distance;
                    ++cell.repeats;
                }
            }
            if (cell.repeats > 0) {
                cell.le /= cell.repeats;
                cell.bha /= cell.repeats;
                cell.ale /= cell.repeats;
            }
            if (cell.repeats < opt.repeats) out.flagged = true;
            out.cells.push_back(cell);
        }
    }
    return out;
}

// --- CSV ---------------------------------------------------------------------

void write_fig5_csv(std::ostream& os, const std::vector<ExperimentRecord>& rows) {
    os << "sigma,algorithm,iteration,criterion_db\n";
    for (const auto& r : rows) {
        os << format_double(r.sigma) << ',' << algorithm_name(r.algorithm) << ',' << r.iteration
           << ',' << format_double(r.criterion_db) << '\n';
    }
}

void write_fig6_csv(std::ostream& os, const std::vector<ExperimentRecord>& rows) {
    os << "sigma,algorithm,trace,logdet_db\n";
    for (const auto& r : rows) {
        os << format_double(r.sigma) << ',' << algorithm_name(r.algorithm) << ','
           << format_double(r.trace) << ',' << format_double(r.logdet_db) << '\n';
    }
}

void write_fig7_csv(std::ostream& os, const std::vector<ExperimentRecord>& rows) {
    os << "sigma,kappa,repeat,algorithm,distance\n";
    for (const auto& r : rows) {
        os << format_double(r.sigma) << ',' << format_double(r.kappa) << ',' << r.repeat << ','
           << algorithm_name(r.algorithm) << ',' << format_double(r.distance) << '\n';
    }
}

void write_fig7_means_csv(std::ostream& os, const std::vector<Fig7Cell>& cells) {
    os << "sigma,kappa,algorithm,mean_distance\n";
    for (const auto& c : cells) {
        const std::string prefix = format_double(c.sigma) + ',' + format_double(c.kappa) + ',';
        os << prefix << "ALE," << format_double(c.ale) << '\n';
        os << prefix << "Bha," << format_double(c.bha) << '\n';
        os << prefix << "LE," << format_double(c.le) << '\n';
    }
}

}  // namespace spdmean
