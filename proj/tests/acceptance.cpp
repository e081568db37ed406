// End-to-end acceptance run: one PASS/FAIL line per criterion, nonzero exit
// if any fails. Each criterion is a pure function of fixed seeds.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "spdmean/experiments.hpp"
#include "spdmean/geometry.hpp"
#include "spdmean/properties.hpp"

using namespace spdmean;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;
};

int failures = 0;

template <class Fn>
void criterion(int id, const char* title, Fn fn) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = fn();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %d: %s (%s) [%.1fs]\n", v.pass ? "PASS" : "FAIL", id, title,
                v.detail.c_str(), s);
    std::fflush(stdout);
    if (!v.pass) ++failures;
}

GeneratedSet model(double sigma, std::uint64_t seed, int n = 10, int k = 100) {
    GeneratorConfig cfg;
    cfg.dim = n;
    cfg.count = k;
    cfg.noise_sigma = sigma;
    cfg.seed = seed;
    return generate(cfg);
}

double rel_det_gap(double logdet_mean, double target) {
    return std::abs(std::expm1(logdet_mean - target));
}

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

Verdict determinant_identity() {
    double worst = 0.0;
    double bha_least = INFINITY;
    for (double sigma : {0.01, 0.1, 1.0}) {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const GeneratedSet g = model(sigma, seed);
            double target = 0.0;
            for (const auto& c : g.set) target += logdet(c);
            target /= static_cast<double>(g.set.size());
            for (Algorithm a : {Algorithm::GD, Algorithm::MM, Algorithm::LE, Algorithm::ALE}) {
                const SolverReport rep = run_mean(a, g.set);
                if (!rep.converged) return {false, std::string(algorithm_name(a)) + " did not converge"};
                worst = std::max(worst, rel_det_gap(logdet(rep.mean), target));
            }
            if (sigma == 0.01) {
                bha_least = std::min(bha_least, rel_det_gap(logdet(bhat_mean(g.set).mean), target));
            }
        }
    }
    return {worst < 1e-6 && bha_least > 1e-4,
            "worst FI/LE/ALE gap " + sci(worst) + ", smallest Bha gap at sigma 0.01 " + sci(bha_least)};
}

Verdict fig7_ordering() {
    Fig7Options opt;
    opt.kappas = {1, 2, 5, 10, 20, 50};
    opt.repeats = 20;
    const Fig7Result res = run_fig7(opt);
    int ok = 0;
    double tightest = INFINITY;
    std::string where;
    for (const auto& c : res.cells) {
        const bool good = c.repeats == opt.repeats && c.ale < c.le && c.ale < c.bha;
        ok += good ? 1 : 0;
        const double margin = std::min(c.le, c.bha) / c.ale;
        if (margin < tightest) {
            tightest = margin;
            where = "sigma " + sci(c.sigma) + " kappa " + sci(c.kappa);
        }
    }
    const int cells = static_cast<int>(res.cells.size());
    return {ok == cells && !res.flagged, std::to_string(ok) + "/" + std::to_string(cells) +
                                             " cells, tightest min(LE,Bha)/ALE " + sci(tightest) + " at " + where};
}

Verdict fig6_trace_det() {
    bool pass = true;
    double worst_det = 0.0;
    int runs = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        Fig6Options opt;
        opt.seed = seed;
        const Fig6Result res = run_fig6(opt);
        pass = pass && !res.flagged;
        std::map<std::pair<double, Algorithm>, ExperimentRecord> by;
        for (const auto& r : res.rows) by[{r.sigma, r.algorithm}] = r;
        for (double sigma : opt.sigmas) {
            ++runs;
            const auto& fi = by[{sigma, Algorithm::MM}];
            const auto& le = by[{sigma, Algorithm::LE}];
            const auto& ale = by[{sigma, Algorithm::ALE}];
            pass = pass && le.trace > fi.trace;
            pass = pass && std::abs(ale.trace - fi.trace) / fi.trace < std::abs(le.trace - fi.trace) / fi.trace;
            const ExperimentRecord& gd = by[{sigma, Algorithm::GD}];
            for (const ExperimentRecord* r : {&le, &ale, &gd})
                worst_det = std::max(worst_det, std::abs(r->logdet_db - fi.logdet_db) / std::abs(fi.logdet_db));
        }
    }
    pass = pass && worst_det < 1e-6;
    return {pass, std::to_string(runs) + " runs, worst relative log-det gap " + sci(worst_det)};
}

Verdict fig5_ordering() {
    const Fig5Result res = run_fig5({});
    std::map<std::pair<double, Algorithm>, std::optional<int>> it;
    for (const auto& s : res.summary) it[{s.sigma, s.algorithm}] = s.iterations_to_stop;
    bool pass = !res.flagged;
    for (const auto& [k, v] : it) pass = pass && v.has_value();
    std::string detail;
    for (double sigma : {0.01, 0.1}) {
        const auto ajd = it[{sigma, Algorithm::AjdPham}];
        for (Algorithm a : {Algorithm::GD, Algorithm::MM, Algorithm::Bha})
            pass = pass && ajd && it[{sigma, a}] && *ajd < *it[{sigma, a}];
        detail += "sigma " + sci(sigma) + ": AJD " + std::to_string(ajd.value_or(-1)) + " GD " +
                  std::to_string(it[{sigma, Algorithm::GD}].value_or(-1)) + " MM " +
                  std::to_string(it[{sigma, Algorithm::MM}].value_or(-1)) + " Bha " +
                  std::to_string(it[{sigma, Algorithm::Bha}].value_or(-1)) + "; ";
    }
    return {pass, detail + "all reach -100 dB at sigma 0.01, 0.1, 1: " + (res.flagged ? "no" : "yes")};
}

// Not a criterion: how often the ordering holds on other seeds.
void fig5_seed_survey() {
    int held = 0;
    const int seeds = 20;
    for (int s = 0; s < seeds; ++s) {
        Fig5Options opt;
        opt.seed = static_cast<std::uint64_t>(s);
        opt.sigmas = {0.01, 0.1};
        const Fig5Result res = run_fig5(opt);
        std::map<std::pair<double, Algorithm>, std::optional<int>> it;
        for (const auto& x : res.summary) it[{x.sigma, x.algorithm}] = x.iterations_to_stop;
        bool ok = !res.flagged;
        for (double sigma : {0.01, 0.1})
            for (Algorithm a : {Algorithm::GD, Algorithm::MM, Algorithm::Bha})
                ok = ok && it[{sigma, Algorithm::AjdPham}] && it[{sigma, a}] &&
                     *it[{sigma, Algorithm::AjdPham}] < *it[{sigma, a}];
        held += ok ? 1 : 0;
    }
    std::printf("INFO criterion 4 survey: ordering holds on %d/%d seeds\n", held, seeds);
}

Verdict gd_mm_agreement() {
    double worst_d = 0.0;
    double worst_r = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const GeneratedSet g = model(0.1, 100 + seed);
        const SolverReport gd = fi_mean_gd(g.set);
        const SolverReport mm = fi_mean_mm(g.set);
        if (!gd.converged || !mm.converged) return {false, "non-convergence at seed " + std::to_string(seed)};
        worst_d = std::max(worst_d, fi_distance(gd.mean, mm.mean));
        worst_r = std::max({worst_r, karcher_residual(g.set, gd.mean), karcher_residual(g.set, mm.mean)});
    }
    return {worst_d < 1e-6 && worst_r < 1e-8,
            "worst distance " + sci(worst_d) + ", worst Karcher residual " + sci(worst_r)};
}

double permutation_scaling_defect(const Matrix& p) {
    std::set<Eigen::Index> cols;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
        Eigen::Index j = 0;
        const double dom = p.row(i).cwiseAbs().maxCoeff(&j);
        cols.insert(j);
        for (Eigen::Index c = 0; c < p.cols(); ++c)
            if (c != j) worst = std::max(worst, std::abs(p(i, c)) / dom);
    }
    return cols.size() == static_cast<std::size_t>(p.rows()) ? worst : INFINITY;
}

Verdict noiseless_collapse() {
    double worst_d = 0.0;
    double worst_p = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const GeneratedSet g = model(0.0, 200 + seed);
        const AleResult ale = ale_mean_full(g.set);
        const SolverReport mm = fi_mean_mm(g.set);
        if (!ale.report.converged || !mm.converged) return {false, "non-convergence"};
        worst_d = std::max(worst_d, fi_distance(ale.report.mean, mm.mean));
        worst_p = std::max(worst_p, permutation_scaling_defect(ale.ajd.diagonalizer.b() * g.a_true));
    }
    return {worst_d < 1e-6 && worst_p < 1e-6,
            "10 sets, worst ALE-MM distance " + sci(worst_d) + ", worst off-dominant ratio " + sci(worst_p)};
}

Verdict two_member_suite() {
    double worst_riccati = 0.0;
    double worst_d = 0.0;
    const int ns[] = {2, 5, 10};
    for (int t = 0; t < 50; ++t) {
        const int n = ns[t % 3];
        const auto key = [&](std::uint64_t i) { return stream_seed(7, StreamRole::test_data, 2 * static_cast<std::uint64_t>(t) + i); };
        const SpdMatrix c1 = random_spd(n, key(0), 0.7);
        const SpdMatrix c2 = random_spd(n, key(1), 0.7);
        const SpdMatrix g = geomean2(c1, c2);
        const Matrix x = g.matrix();
        worst_riccati = std::max(worst_riccati, (x * inverse(c2).matrix() * x - c1.matrix()).norm() / c1.matrix().norm());
        const MatrixSet set({c1, c2});
        for (const SolverReport& rep : {fi_mean_gd(set), fi_mean_mm(set), bhat_mean(set), ale_mean(set)}) {
            if (!rep.converged) return {false, "non-convergence on pair " + std::to_string(t)};
            worst_d = std::max(worst_d, fi_distance(rep.mean, g));
        }
    }
    return {worst_riccati < 1e-9 && worst_d < 1e-6,
            "50 pairs, worst relative Riccati residual " + sci(worst_riccati) + ", worst distance " + sci(worst_d)};
}

Verdict property_suite() {
    const auto out = run_properties({0, 100});
    int failed = 0;
    std::string first;
    for (const auto& o : out) {
        if (!o.ok()) {
            if (failed++ == 0) first = ", first failure " + o.name;
        }
    }
    return {failed == 0, std::to_string(out.size()) + " properties x 100 trials, " + std::to_string(failed) + " failed" + first};
}

}  // namespace

int main() {
    criterion(1, "determinant identity of FI, LE and ALE means", determinant_identity);
    criterion(2, "ALE closest to the FI mean in every noise/condition cell", fig7_ordering);
    criterion(3, "trace and determinant relations of LE, ALE and FI means", fig6_trace_det);
    criterion(4, "AJD reaches -100 dB in fewest iterations at low noise", fig5_ordering);
    fig5_seed_survey();
    criterion(5, "GD and MM converge to the same point", gd_mm_agreement);
    criterion(6, "noiseless model collapses to the FI mean", noiseless_collapse);
    criterion(7, "two-matrix means equal the closed-form geometric mean", two_member_suite);
    criterion(8, "property suite", property_suite);
    std::printf("%s: %d criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
    return failures == 0 ? 0 : 1;
}
