#include "gridroute/astar.hpp"
#include "gridroute/dqn.hpp"
#include "gridroute/generate.hpp"
#include "gridroute/rng.hpp"

#include <benchmark/benchmark.h>

using namespace gridroute;

namespace {

std::vector<Transition> sample_transitions(size_t count) {
    GenSpec spec;
    spec.width = spec.height = 8;
    spec.net_count = 50;
    spec.normal_capacity = 3;
    spec.seed = 77;
    const Problem p = generate(spec).front();
    auto transitions = route_problem(p).transitions;
    while (transitions.size() < count)
        transitions.insert(transitions.end(), transitions.begin(), transitions.end());
    transitions.resize(count);
    return transitions;
}

void BM_QNetworkForward(benchmark::State& state) {
    Rng init(1);
    const QNetwork net(init);
    const auto ts = sample_transitions(64);
    size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(net.forward(ts[i % ts.size()].state));
        ++i;
    }
}
BENCHMARK(BM_QNetworkForward);

void BM_TrainBatch32(benchmark::State& state) {
    Rng init(2);
    QNetwork net(init);
    Optimizer opt(OptimizerKind::Adam, 1e-4);
    const auto ts = sample_transitions(32);
    std::vector<const Transition*> batch;
    for (const auto& t : ts)
        batch.push_back(&t);
    for (auto _ : state)
        benchmark::DoNotOptimize(train_batch(net, batch, 0.9, opt));
}
BENCHMARK(BM_TrainBatch32);

void BM_ReplaySample32(benchmark::State& state) {
    ReplayBuffer buf(50000);
    const auto ts = sample_transitions(4096);
    for (const auto& t : ts)
        buf.push(t);
    Rng rng(9);
    std::vector<const Transition*> batch;
    for (auto _ : state) {
        buf.sample(32, rng, batch);
        benchmark::DoNotOptimize(batch);
    }
}
BENCHMARK(BM_ReplaySample32);

} // namespace

BENCHMARK_MAIN();
