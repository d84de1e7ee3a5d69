// Recovery benchmarks: the OpenMP subset scan against its serial reference,
// and the exact scan against the l1 relaxation.

#include <benchmark/benchmark.h>

#include "bguard/attack.hpp"
#include "bguard/recover_convex.hpp"
#include "bguard/recover_exact.hpp"
#include "bguard/rng.hpp"
#include "bguard/system.hpp"

#include <random>

using namespace bguard;

namespace {

struct Fixture {
    SystemSpec sys;
    HankelMatrix H;
    Trajectory received;
};

Fixture make_fixture(int n_masses, int k, std::uint64_t seed) {
    Fixture f{discretize_zoh(mass_spring_chain(n_masses), 1.3), {}, {}};
    const int L = 3;
    const int T = n_masses == 3 ? 11 : 8 * n_masses;
    for (std::uint64_t redraw = 0;; ++redraw) {
        auto gen = substream(seed, Stream::data, redraw);
        std::normal_distribution<double> dist(0.0, 1.0);
        MatrixXd u(f.sys.m(), T);
        for (int i = 0; i < u.size(); ++i) u(i % f.sys.m(), i / f.sys.m()) = dist(gen);
        VectorXd x0(f.sys.n());
        for (int i = 0; i < f.sys.n(); ++i) x0[i] = dist(gen);
        f.H = build_hankel(simulate(f.sys, u, x0), L);
        if (check_gpe(f.H, f.sys.m(), f.sys.n()).holds) break;
    }
    auto gen = substream(seed, Stream::misc, 1);
    std::normal_distribution<double> dist(0.0, 1.0);
    MatrixXd u(f.sys.m(), L);
    for (int i = 0; i < u.size(); ++i) u(i % f.sys.m(), i / f.sys.m()) = dist(gen);
    VectorXd x0(f.sys.n());
    for (int i = 0; i < f.sys.n(); ++i) x0[i] = dist(gen);
    f.received = entry_attack_random(simulate(f.sys, u, x0), k, 8.0, seed).w;
    return f;
}

void BM_scan_parallel(benchmark::State& state) {
    const Fixture f = make_fixture(static_cast<int>(state.range(0)),
                                   static_cast<int>(state.range(1)), 7);
    RecoverOptions opt;
    opt.parallel = true;
    const int k = static_cast<int>(state.range(1));
    for (auto _ : state)
        benchmark::DoNotOptimize(recover_entries_bruteforce(f.H, f.received, k, opt));
}

void BM_scan_serial(benchmark::State& state) {
    const Fixture f = make_fixture(static_cast<int>(state.range(0)),
                                   static_cast<int>(state.range(1)), 7);
    RecoverOptions opt;
    opt.parallel = false;
    const int k = static_cast<int>(state.range(1));
    for (auto _ : state)
        benchmark::DoNotOptimize(recover_entries_bruteforce(f.H, f.received, k, opt));
}

void BM_recover_l1(benchmark::State& state) {
    const Fixture f = make_fixture(static_cast<int>(state.range(0)), 1, 7);
    for (auto _ : state) benchmark::DoNotOptimize(recover_l1(f.H, f.received));
}

}  // namespace

BENCHMARK(BM_scan_parallel)->Args({3, 1})->Args({3, 2})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_scan_serial)->Args({3, 1})->Args({3, 2})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_recover_l1)->Args({3})->Args({10})->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
