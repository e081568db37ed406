// Serial reference vs OpenMP kernels on generator-sized sets (N = 10, K = 100
// by default). Arguments: {N, K}.

#include <benchmark/benchmark.h>

#include "spdmean/kernels.hpp"
#include "spdmean/simgen.hpp"

using namespace spdmean;

namespace {

struct Fixture {
    std::vector<Matrix> cs;
    std::vector<Matrix> sq;
    std::vector<Matrix> isq;
    Matrix m;
    Matrix w;
};

Fixture make(int n, int k) {
    GeneratorConfig cfg;
    cfg.dim = n;
    cfg.count = k;
    cfg.seed = 42;
    const GeneratedSet g = generate(cfg);
    Fixture f;
    f.cs = g.set.raw();
    f.sq = kernels::map_sqrtm(f.cs);
    f.isq = kernels::map_invsqrtm(f.cs);
    f.m = g.set[0].matrix();
    f.w = g.a_true.inverse();
    return f;
}

void args(benchmark::internal::Benchmark* b) {
    b->Args({10, 100})->Args({30, 100})->Args({10, 1000})->Unit(benchmark::kMicrosecond);
}

template <bool Parallel>
void BM_MeanLog(benchmark::State& st) {
    const Fixture f = make(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
    for (auto _ : st) {
        benchmark::DoNotOptimize(Parallel ? kernels::mean_log(f.cs) : kernels::mean_log_serial(f.cs));
    }
}

template <bool Parallel>
void BM_MeanLogCongruence(benchmark::State& st) {
    const Fixture f = make(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
    for (auto _ : st) {
        benchmark::DoNotOptimize(Parallel ? kernels::mean_log_congruence(f.cs, f.w)
                                          : kernels::mean_log_congruence_serial(f.cs, f.w));
    }
}

template <bool Parallel>
void BM_SumInverseMidpoints(benchmark::State& st) {
    const Fixture f = make(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
    for (auto _ : st) {
        benchmark::DoNotOptimize(Parallel ? kernels::sum_inverse_midpoints(f.cs, f.m)
                                          : kernels::sum_inverse_midpoints_serial(f.cs, f.m));
    }
}

template <bool Parallel>
void BM_Majorizer(benchmark::State& st) {
    const Fixture f = make(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
    for (auto _ : st) {
        benchmark::DoNotOptimize(Parallel ? kernels::mm_accumulate(f.sq, f.isq, f.m)
                                          : kernels::mm_accumulate_serial(f.sq, f.isq, f.m));
    }
}

}  // namespace

BENCHMARK(BM_MeanLog<false>)->Apply(args);
BENCHMARK(BM_MeanLog<true>)->Apply(args);
BENCHMARK(BM_MeanLogCongruence<false>)->Apply(args);
BENCHMARK(BM_MeanLogCongruence<true>)->Apply(args);
BENCHMARK(BM_SumInverseMidpoints<false>)->Apply(args);
BENCHMARK(BM_SumInverseMidpoints<true>)->Apply(args);
BENCHMARK(BM_Majorizer<false>)->Apply(args);
BENCHMARK(BM_Majorizer<true>)->Apply(args);

BENCHMARK_MAIN();
