// spdbench: generate matrix sets, compute means and AJDs on stored sets, and
// run the convergence / trace-determinant / distance experiments.
//
// Exit codes: 0 success, 1 usage or I/O error, 2 solver non-convergence,
// 3 an experiment or property run flagged a failure.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "spdmean/experiments.hpp"
#include "spdmean/plot.hpp"
#include "spdmean/properties.hpp"
#include "spdmean/set_io.hpp"

namespace fs = std::filesystem;
using namespace spdmean;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitSolver = 2;
constexpr int kExitFlag = 3;

// Thrown for bad input that CLI11 cannot catch itself (missing files, etc).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolverFlags {
    double eps = 1e-9;
    int max_iter = 2000;
};

struct FigFlags {
    ExperimentBase base;
    std::vector<double> sigmas;
    std::string out = ".";
    bool csv_only = false;
};

void add_solver_flags(CLI::App* cmd, SolverFlags& f) {
    cmd->add_option("--eps", f.eps, "stopping tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--max-iter", f.max_iter, "iteration cap")->check(CLI::PositiveNumber);
}

void add_fig_flags(CLI::App* cmd, FigFlags& f) {
    cmd->add_option("--seed", f.base.seed, "generator seed");
    cmd->add_option("--dim", f.base.dim, "matrix dimension N")->check(CLI::Range(2, 500));
    cmd->add_option("--count", f.base.count, "matrices per set K")->check(CLI::Range(2, 1000000));
    cmd->add_option("--eps", f.base.epsilon, "stopping tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--max-iter", f.base.max_iter, "iteration cap")->check(CLI::PositiveNumber);
    cmd->add_option("--sigmas", f.sigmas, "noise levels")->delimiter(',')->check(
        CLI::NonNegativeNumber);
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_flag("--csv-only", f.csv_only, "skip the SVG plot");
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot write " + path.string());
    return os;
}

fs::path prepare_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());
    return fs::path(dir);
}

MatrixSet load_input(const std::string& path) {
    if (path.empty()) throw UsageError("--in is required");
    return load_spdset(path);
}

SolverConfig solver_config(const SolverFlags& f) {
    SolverConfig cfg;
    cfg.epsilon = f.eps;
    cfg.max_iter = f.max_iter;
    cfg.ajd.max_sweeps = f.max_iter;
    return cfg;
}

const char* yes_no(bool b) { return b ? "true" : "false"; }

// --- generate ----------------------------------------------------------------

int cmd_generate(const GeneratorConfig& cfg, const std::string& out) {
    const GeneratedSet g = generate(cfg);
    save_spdset(out, g.set);
    const fs::path truth = truth_path_for(out);
    save_spdtruth(truth, g);
    std::cout << "wrote " << out << " and " << truth.string() << " (N=" << cfg.dim
              << " K=" << cfg.count << ", rng " << kRngName << ", regenerated "
              << g.regenerated << ")\n";
    return kExitOk;
}

// --- mean --------------------------------------------------------------------

int cmd_mean(const std::string& algo, const std::string& in, const SolverFlags& f,
             const std::string& out, const std::string& csv) {
    const auto alg = parse_algorithm(algo);
    if (!alg || *alg == Algorithm::AjdPham) {
        throw UsageError("--algo must be one of GD, MM, Bha, LE, ALE, Arithmetic, Harmonic");
    }
    const MatrixSet set = load_input(in);
    const SolverReport rep = run_mean(*alg, set, solver_config(f));

    const MatrixSet single({rep.mean});
    if (out.empty()) {
        write_spdset(std::cout, single);
    } else {
        save_spdset(out, single);
    }
    std::cout << "algorithm " << algo << '\n'
              << "iterations " << rep.iterations << '\n'
              << "converged " << yes_no(rep.converged) << '\n'
              << "final_residual " << format_double(rep.final_residual) << '\n';
    if (!csv.empty()) {
        auto os = open_out(csv);
        os << "iteration,criterion\n";
        for (std::size_t i = 0; i < rep.criterion_trace.size(); ++i) {
            os << rep.trace_iterations[i] << ',' << format_double(rep.criterion_trace[i]) << '\n';
        }
    }
    return rep.converged ? kExitOk : kExitSolver;
}

// --- ajd ---------------------------------------------------------------------

void write_ajd_report(std::ostream& os, const AjdReport& rep) {
    const Matrix& b = rep.diagonalizer.b();
    os << "criterion " << format_double(rep.diagonalizer.criterion_value()) << '\n'
       << "sweeps " << rep.sweeps << '\n'
       << "converged " << yes_no(rep.converged) << '\n'
       << 'B';
    for (Eigen::Index i = 0; i < b.rows(); ++i)
        for (Eigen::Index j = 0; j < b.cols(); ++j) os << ' ' << format_double(b(i, j));
    os << '\n';
}

int cmd_ajd(const std::string& in, const SolverFlags& f, const std::string& out,
            const std::string& csv) {
    const MatrixSet set = load_input(in);
    AjdConfig cfg;
    cfg.max_sweeps = f.max_iter;
    const AjdReport rep = ajd_pham(set, cfg);
    write_ajd_report(std::cout, rep);
    if (!out.empty()) {
        auto os = open_out(out);
        write_ajd_report(os, rep);
    }
    if (!csv.empty()) {
        auto os = open_out(csv);
        os << "sweep,criterion,decrement_db\n";
        for (std::size_t i = 0; i < rep.criterion_trace.size(); ++i) {
            os << i << ',' << format_double(rep.criterion_trace[i]) << ',';
            if (i > 0) os << format_double(rep.decrement_db[i - 1]);
            os << '\n';
        }
    }
    return rep.converged ? kExitOk : kExitSolver;
}

// --- figures -----------------------------------------------------------------

std::string sigma_title(double sigma) { return "sigma = " + format_double(sigma); }

int cmd_fig5(FigFlags& f) {
    Fig5Options opt;
    static_cast<ExperimentBase&>(opt) = f.base;
    if (!f.sigmas.empty()) opt.sigmas = f.sigmas;
    const fs::path dir = prepare_dir(f.out);
    const Fig5Result res = run_fig5(opt);
    {
        auto os = open_out(dir / "fig5.csv");
        write_fig5_csv(os, res.rows);
    }
    if (!f.csv_only) {
        std::vector<plot::Panel> panels;
        for (double sigma : opt.sigmas) {
            plot::Panel p{sigma_title(sigma), "iteration", "criterion (dB)", false, false, {}};
            std::map<Algorithm, plot::Series> series;
            for (const auto& r : res.rows) {
                if (r.sigma != sigma) continue;
                auto& s = series[r.algorithm];
                s.label = std::string(algorithm_name(r.algorithm));
                s.x.push_back(r.iteration);
                s.y.push_back(r.criterion_db);
            }
            for (auto& [alg, s] : series) p.series.push_back(std::move(s));
            panels.push_back(std::move(p));
        }
        plot::save_svg(dir / "fig5.svg", panels);
    }
    for (const auto& s : res.summary) {
        std::cout << "sigma " << format_double(s.sigma) << ' ' << algorithm_name(s.algorithm)
                  << ' ';
        if (s.iterations_to_stop) {
            std::cout << "reached " << format_double(opt.stop_db) << " dB at iteration "
                      << *s.iterations_to_stop << '\n';
        } else {
            std::cout << "did not reach " << format_double(opt.stop_db) << " dB\n";
        }
    }
    return res.flagged ? kExitFlag : kExitOk;
}

int cmd_fig6(FigFlags& f) {
    Fig6Options opt;
    static_cast<ExperimentBase&>(opt) = f.base;
    if (!f.sigmas.empty()) opt.sigmas = f.sigmas;
    const fs::path dir = prepare_dir(f.out);
    const Fig6Result res = run_fig6(opt);
    {
        auto os = open_out(dir / "fig6.csv");
        write_fig6_csv(os, res.rows);
    }
    if (!f.csv_only) {
        plot::Panel p{"means per noise level", "trace", "log det (dB)", false, false, {}};
        std::map<Algorithm, plot::Series> series;
        for (const auto& r : res.rows) {
            auto& s = series[r.algorithm];
            s.label = std::string(algorithm_name(r.algorithm));
            s.lines = false;
            s.markers = true;
            s.x.push_back(r.trace);
            s.y.push_back(r.logdet_db);
        }
        for (auto& [alg, s] : series) p.series.push_back(std::move(s));
        plot::save_svg(dir / "fig6.svg", {p});
    }
    for (const auto& r : res.rows) {
        std::cout << "sigma " << format_double(r.sigma) << ' ' << algorithm_name(r.algorithm)
                  << " trace " << format_double(r.trace) << " logdet_db "
                  << format_double(r.logdet_db) << (r.flagged ? " FLAGGED" : "") << '\n';
    }
    return res.flagged ? kExitFlag : kExitOk;
}

int cmd_fig7(FigFlags& f, const std::vector<double>& conds, int repeats) {
    Fig7Options opt;
    static_cast<ExperimentBase&>(opt) = f.base;
    if (!f.sigmas.empty()) opt.sigmas = f.sigmas;
    if (!conds.empty()) opt.kappas = conds;
    opt.repeats = repeats;
    const fs::path dir = prepare_dir(f.out);
    const Fig7Result res = run_fig7(opt);
    {
        auto os = open_out(dir / "fig7.csv");
        write_fig7_csv(os, res.rows);
    }
    {
        auto os = open_out(dir / "fig7_means.csv");
        write_fig7_means_csv(os, res.cells);
    }
    if (!f.csv_only) {
        std::vector<plot::Panel> panels;
        for (double sigma : opt.sigmas) {
            plot::Panel p{sigma_title(sigma), "condition number", "distance to FI mean", true,
                          true, {}};
            plot::Series le{"LE", {}, {}, true, true};
            plot::Series bha{"Bha", {}, {}, true, true};
            plot::Series ale{"ALE", {}, {}, true, true};
            for (const auto& c : res.cells) {
                if (c.sigma != sigma) continue;
                le.x.push_back(c.kappa);
                le.y.push_back(c.le);
                bha.x.push_back(c.kappa);
                bha.y.push_back(c.bha);
                ale.x.push_back(c.kappa);
                ale.y.push_back(c.ale);
            }
            p.series = {le, bha, ale};
            panels.push_back(std::move(p));
        }
        plot::save_svg(dir / "fig7.svg", panels);
    }
    for (const auto& c : res.cells) {
        std::cout << "sigma " << format_double(c.sigma) << " kappa " << format_double(c.kappa)
                  << " LE " << format_double(c.le) << " Bha " << format_double(c.bha) << " ALE "
                  << format_double(c.ale) << " (" << c.repeats << " repeats)\n";
    }
    return res.flagged ? kExitFlag : kExitOk;
}

// --- props -------------------------------------------------------------------

int cmd_props(const PropsOptions& opt, const std::string& out) {
    const auto outcomes = run_properties(opt);
    write_properties_report(std::cout, outcomes);
    if (!out.empty()) {
        auto os = open_out(out);
        write_properties_report(os, outcomes);
    }
    return all_ok(outcomes) ? kExitOk : kExitFlag;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SPD matrix means: generator, solvers and benchmark experiments"};
    app.require_subcommand(1);

    GeneratorConfig gen;
    std::string gen_out;
    double gen_cond = 0.0;
    auto* generate_cmd = app.add_subcommand("generate", "write a synthetic matrix set");
    generate_cmd->add_option("--dim", gen.dim, "matrix dimension N")->check(CLI::Range(2, 500));
    generate_cmd->add_option("--count", gen.count, "number of matrices K")
        ->check(CLI::Range(2, 1000000));
    generate_cmd->add_option("--sigma", gen.noise_sigma, "noise level")
        ->check(CLI::NonNegativeNumber);
    generate_cmd->add_option("--seed", gen.seed, "generator seed");
    generate_cmd->add_option("--cond", gen_cond, "condition number of the mixing matrix")
        ->check(CLI::Range(1.0, 1e12));
    generate_cmd->add_option("--out", gen_out, "output set file")->required();

    std::string algo, in, out, csv;
    SolverFlags solver;
    auto* mean_cmd = app.add_subcommand("mean", "compute a mean of a stored set");
    mean_cmd->add_option("--algo", algo, "GD, MM, Bha, LE, ALE, Arithmetic or Harmonic")
        ->required();
    mean_cmd->add_option("--in", in, "input set file")->required();
    mean_cmd->add_option("--out", out, "write the mean here instead of stdout");
    mean_cmd->add_option("--csv", csv, "write the convergence trace as CSV");
    add_solver_flags(mean_cmd, solver);

    auto* ajd_cmd = app.add_subcommand("ajd", "approximate joint diagonalization of a stored set");
    ajd_cmd->add_option("--in", in, "input set file")->required();
    ajd_cmd->add_option("--out", out, "also write the report here");
    ajd_cmd->add_option("--csv", csv, "write the per-sweep trace as CSV");
    add_solver_flags(ajd_cmd, solver);

    FigFlags fig;
    auto* fig5_cmd = app.add_subcommand("fig5", "convergence of GD, MM, Bha and the AJD");
    add_fig_flags(fig5_cmd, fig);
    auto* fig6_cmd = app.add_subcommand("fig6", "trace and determinant of the means");
    add_fig_flags(fig6_cmd, fig);
    std::vector<double> conds;
    int repeats = 100;
    auto* fig7_cmd = app.add_subcommand("fig7", "distance of LE, Bha and ALE to the FI mean");
    add_fig_flags(fig7_cmd, fig);
    fig7_cmd->add_option("--conds", conds, "mixing condition numbers")
        ->delimiter(',')
        ->check(CLI::Range(1.0, 1e12));
    fig7_cmd->add_option("--repeats", repeats, "repeats per cell")->check(CLI::PositiveNumber);

    PropsOptions props;
    auto* props_cmd = app.add_subcommand("props", "randomized property suite");
    props_cmd->add_option("--seed", props.seed, "suite seed");
    props_cmd->add_option("--trials", props.trials, "trials per property")
        ->check(CLI::PositiveNumber);
    props_cmd->add_option("--out", out, "also write the report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*generate_cmd) {
            if (generate_cmd->count("--cond") > 0) gen.cond_target = gen_cond;
            return cmd_generate(gen, gen_out);
        }
        if (*mean_cmd) return cmd_mean(algo, in, solver, out, csv);
        if (*ajd_cmd) return cmd_ajd(in, solver, out, csv);
        if (*fig5_cmd) return cmd_fig5(fig);
        if (*fig6_cmd) return cmd_fig6(fig);
        if (*fig7_cmd) return cmd_fig7(fig, conds, repeats);
        if (*props_cmd) return cmd_props(props, out);
    } catch (const ParseError& e) {
        std::cerr << "error: " << in << ": " << e.what() << '\n';
        return kExitUsage;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return kExitSolver;
    }
    return kExitUsage;
}
