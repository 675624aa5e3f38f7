#include <benchmark/benchmark.h>

#include <vector>

#include "fadr/allocation.hpp"
#include "fadr/collision.hpp"
#include "fadr/radio.hpp"
#include "fadr/rng.hpp"
#include "fadr/simulator.hpp"

namespace {

using namespace fadr;

std::vector<NodeSnapshot> staircase(std::uint32_t n) {
    std::vector<NodeSnapshot> snaps;
    snaps.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        const double gain = -90.0 - 40.0 * static_cast<double>(i) / static_cast<double>(n);
        snaps.push_back({i, gain + 14.0, gain});
    }
    return snaps;
}

void BM_airtime(benchmark::State& state) {
    const RadioConfig radio;
    for (auto _ : state) {
        double total = 0.0;
        for (int sf = kMinSf; sf <= kMaxSf; ++sf) total += airtime_s(radio, sf, 80);
        benchmark::DoNotOptimize(total);
    }
}
BENCHMARK(BM_airtime);

void BM_power_ladder(benchmark::State& state) {
    const std::vector<NodeSnapshot> snaps = staircase(static_cast<std::uint32_t>(state.range(0)));
    const PowerLevelSet levels = PowerLevelSet::default_levels();
    for (auto _ : state) {
        const PowerAllocationResult r = fadr_power_allocation(snaps, levels, 6.0);
        benchmark::DoNotOptimize(r.spread_db);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_power_ladder)->Range(64, 4096)->Complexity(benchmark::oNLogN);

void BM_sf_groups(benchmark::State& state) {
    const std::vector<NodeSnapshot> snaps = staircase(static_cast<std::uint32_t>(state.range(0)));
    for (auto _ : state) {
        const std::vector<SfAssignment> sfs = fadr_sf_allocation(snaps, 50);
        benchmark::DoNotOptimize(sfs.size());
    }
}
BENCHMARK(BM_sf_groups)->Range(64, 4096);

void BM_collision_resolve(benchmark::State& state) {
    const CirMatrix cir = CirMatrix::uniform(6.0);
    std::mt19937_64 rng = make_stream(99, Stream::traffic);
    std::vector<Transmission> set(static_cast<std::size_t>(state.range(0)));
    for (std::size_t i = 0; i < set.size(); ++i) {
        Transmission& tx = set[i];
        tx.node_id = static_cast<std::uint32_t>(i);
        tx.sf = kMinSf + static_cast<int>(i % 6);
        tx.start_s = uniform01(rng);
        tx.end_s = tx.start_s + 0.5;
        tx.rssi_dbm = -120.0 + 30.0 * uniform01(rng);
    }
    for (auto _ : state) {
        int received = 0;
        for (const Transmission& tx : set)
            received += resolve(tx, set, cir) == Fate::received ? 1 : 0;
        benchmark::DoNotOptimize(received);
    }
}
BENCHMARK(BM_collision_resolve)->Range(8, 128);

void BM_cell_run(benchmark::State& state) {
    SimConfig cfg;
    cfg.node_count = static_cast<std::uint32_t>(state.range(0));
    cfg.cell_radius_m = 190.0;
    cfg.min_distance_m = 30.0;
    cfg.channel_count = 3;
    cfg.sim_time_s = 600.0;
    cfg.record_log = false;
    for (auto _ : state) {
        const RunResult result = run(cfg);
        benchmark::DoNotOptimize(result.nodes.size());
    }
}
BENCHMARK(BM_cell_run)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
