#include "gridroute/astar.hpp"
#include "gridroute/decompose.hpp"
#include "gridroute/env.hpp"
#include "gridroute/generate.hpp"
#include "gridroute/rng.hpp"

#include <benchmark/benchmark.h>

using namespace gridroute;

namespace {

Problem benchmark_problem(int nets, std::uint64_t seed) {
    GenSpec spec;
    spec.width = spec.height = 8;
    spec.net_count = nets;
    spec.normal_capacity = 3;
    spec.seed = seed;
    return generate(spec).front();
}

void BM_AStarTwoPin(benchmark::State& state) {
    const Problem p = benchmark_problem(1, 11);
    const GridGraph g = GridGraph::from_problem(p);
    Rng rng(5);
    for (auto _ : state) {
        const Gcell start{static_cast<int>(rng.below(8)), static_cast<int>(rng.below(8)), 0};
        const Gcell goal{static_cast<int>(rng.below(8)), static_cast<int>(rng.below(8)), 1};
        benchmark::DoNotOptimize(route_two_pin(g, start, goal));
    }
}
BENCHMARK(BM_AStarTwoPin);

void BM_RouteProblem50Nets(benchmark::State& state) {
    const Problem p = benchmark_problem(50, 12);
    for (auto _ : state)
        benchmark::DoNotOptimize(route_problem(p));
}
BENCHMARK(BM_RouteProblem50Nets);

void BM_GenerateReducedProblem(benchmark::State& state) {
    GenSpec spec;
    spec.width = spec.height = 8;
    spec.net_count = 50;
    spec.normal_capacity = 3;
    spec.reduced_edge_count = 3;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        spec.seed = seed++;
        benchmark::DoNotOptimize(generate(spec));
    }
}
BENCHMARK(BM_GenerateReducedProblem);

void BM_EnvEpisodePass(benchmark::State& state) {
    const Problem p = benchmark_problem(20, 13);
    const auto tasks = decompose_all(p);
    RoutingEnv env(p, {50});
    Rng rng(3);
    for (auto _ : state) {
        env.begin_episode();
        for (const auto& t : tasks) {
            env.reset(t);
            for (;;) {
                const auto legal = env.legal_actions();
                if (legal.empty())
                    break;
                const auto res = env.step(legal[rng.below(legal.size())]);
                if (res.done)
                    break;
            }
        }
    }
}
BENCHMARK(BM_EnvEpisodePass);

} // namespace

BENCHMARK_MAIN();
