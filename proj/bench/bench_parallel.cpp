#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "swcurve/calibration.hpp"
#include "swcurve/stochastic_oracle.hpp"

using namespace swcurve;

namespace {

MarketCurve ten_year_market() {
    return MarketCurve::from_annual_rates({1, 2, 3, 4, 5, 6, 7, 8, 9, 10},
                                          std::vector<double>{0.02, 0.022, 0.024, 0.03, 0.032, 0.04, 0.05, 0.06,
                                                              0.0625, 0.075});
}

CurveConfig cp20() {
    CurveConfig c;
    c.cp = 20;
    return c;
}

SimulationConfig sim_config() {
    SimulationConfig c;
    c.alpha = 0.1;
    c.omega = std::log1p(0.042);
    c.n_paths = 20000;
    c.horizon = 10.0;
    return c;
}

void BM_ScanAlphaSerial(benchmark::State& state) {
    const auto m = ten_year_market();
    const auto c = cp20();
    for (auto _ : state) benchmark::DoNotOptimize(scan_alpha_serial(m, c, 0.05, 1.0, 1e-3));
}

void BM_ScanAlphaParallel(benchmark::State& state) {
    const auto m = ten_year_market();
    const auto c = cp20();
    for (auto _ : state) benchmark::DoNotOptimize(scan_alpha(m, c, 0.05, 1.0, 1e-3));
}

void BM_SimulateSerial(benchmark::State& state) {
    const auto c = sim_config();
    for (auto _ : state) benchmark::DoNotOptimize(simulate_paths_serial(c));
}

void BM_SimulateParallel(benchmark::State& state) {
    const auto c = sim_config();
    for (auto _ : state) benchmark::DoNotOptimize(simulate_paths(c));
}

}  // namespace

BENCHMARK(BM_ScanAlphaSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScanAlphaParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SimulateSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulateParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
