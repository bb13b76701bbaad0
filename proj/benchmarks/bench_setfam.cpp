#include <benchmark/benchmark.h>

#include <random>

#include "teamdim/setfam.hpp"

using namespace teamdim;

namespace {

SetFamily random_family(unsigned base, double density, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution pick(density);
    std::vector<Mask> members;
    Mask full = (base >= 32) ? ~Mask{0} : ((Mask{1} << base) - 1);
    for (Mask m = 0; m <= full; ++m)
        if (pick(rng)) members.push_back(m);
    if (members.empty()) members.push_back(0);
    return SetFamily(BaseSet{base}, members);
}

} // namespace

static void BM_CriticalSets(benchmark::State& state) {
    auto f = random_family(static_cast<unsigned>(state.range(0)), 0.3, 1234);
    for (auto _ : state) {
        auto crit = critical_sets(f);
        benchmark::DoNotOptimize(crit);
    }
    state.SetLabel(std::to_string(f.size()) + " members");
}
BENCHMARK(BM_CriticalSets)->Arg(8)->Arg(12)->Arg(16);

static void BM_ClosureProfile(benchmark::State& state) {
    auto f = random_family(static_cast<unsigned>(state.range(0)), 0.3, 99);
    for (auto _ : state) {
        auto p = closure_profile(f);
        benchmark::DoNotOptimize(p);
    }
}
BENCHMARK(BM_ClosureProfile)->Arg(8)->Arg(12)->Arg(16);

static void BM_ConvexShadow(benchmark::State& state) {
    auto f = random_family(static_cast<unsigned>(state.range(0)), 0.3, 7);
    Mask apex = f.member(f.size() - 1);
    for (auto _ : state) {
        auto sh = convex_shadow(f, apex);
        benchmark::DoNotOptimize(sh);
    }
}
BENCHMARK(BM_ConvexShadow)->Arg(12)->Arg(16);

BENCHMARK_MAIN();
