#include <benchmark/benchmark.h>

#include "starima/ccf.hpp"
#include "starima/isodata.hpp"
#include "starima/partition.hpp"
#include "starima/starima.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <vector>

namespace {

using namespace starima;

std::vector<double> noisy_series(long n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    double level = 60.0;
    for (long t = 0; t < n; ++t) {
        level = 60.0 + 0.8 * (level - 60.0) + noise(rng);
        out.push_back(level);
    }
    return out;
}

// Corridor where each station follows the previous one two slots later.
Eigen::MatrixXd chain_panel(int n_stations, long n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    Eigen::MatrixXd x(n, n_stations);
    for (long t = 0; t < n; ++t) {
        for (int m = 0; m < n_stations; ++m) {
            double v = 60.0 + noise(rng);
            if (t >= 1) v += 0.5 * (x(t - 1, m) - 60.0);
            if (m > 0 && t >= 2) v += 0.3 * (x(t - 2, m - 1) - 60.0);
            x(t, m) = v;
        }
    }
    return x;
}

StationNetwork corridor(int n_stations) {
    StationNetwork net;
    for (int n = 0; n < n_stations; ++n) {
        net.stations.push_back("s" + std::to_string(n + 1));
        net.positions_feet.push_back(4000.0 * n);
    }
    return net;
}

struct FittedChain {
    StationNetwork net = corridor(3);
    FlowPanel panel;
    StarimaSpec spec;
    WeightMatrices weights;
    std::vector<RegimeLags> lag_sets;
    DayPartition day;
    StarimaModel model;

    FittedChain() {
        panel = FlowPanel{net.stations, 30.0, 0, chain_panel(3, 2000, 11)};
        spec.lambda = 1;
        spec.d = 1;
        spec.q = 1;
        spec.m_k = {1};
        spec.lag_mode = LagMode::fixed_constant;
        spec.ar_order_l0 = {2, 2, 2};
        weights = build_weights(net, 1);
        LagMatrix lm;
        lm.order = 1;
        lm.entries.assign(3, std::vector<int>(3, LagMatrix::kUndefined));
        lm.entries[0][1] = 2;
        lm.entries[1][2] = 2;
        lag_sets = {RegimeLags{0, {lm}}};
        day.slot_seconds = 30.0;
        day.periods = {{0, 0, 4999, 50.0}};
        model = fit(panel, spec, weights, lag_sets, day);
    }
};

const FittedChain& fitted_chain() {
    static const FittedChain f;
    return f;
}

void bm_ccf_profile(benchmark::State& state) {
    const long n = state.range(0);
    const std::vector<double> u = noisy_series(n, 21);
    const std::vector<double> y = noisy_series(n, 22);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ccf_profile(u, y, 12));
    }
}
BENCHMARK(bm_ccf_profile)->Arg(480)->Arg(2880);

void bm_isodata(benchmark::State& state) {
    const long n = state.range(0);
    std::mt19937_64 rng(31);
    std::normal_distribution<double> congested(34.0, 5.0);
    std::normal_distribution<double> free_flow(82.0, 5.0);
    std::vector<double> speeds;
    for (long i = 0; i < n; ++i) speeds.push_back(i % 2 == 0 ? congested(rng) : free_flow(rng));
    const IsodataParams params{};
    for (auto _ : state) {
        benchmark::DoNotOptimize(isodata_1d(speeds, params));
    }
}
BENCHMARK(bm_isodata)->Arg(96)->Arg(960);

void bm_classify_periods(benchmark::State& state) {
    const long n = state.range(0);
    std::mt19937_64 rng(41);
    std::normal_distribution<double> jitter(0.0, 2.0);
    std::uniform_int_distribution<int> run_len(3, 20);
    SpeedClusterSet cs;
    cs.clusters = {{34.0, {}}, {82.0, {}}};
    std::vector<double> speeds;
    int label = 0;
    long next_flip = run_len(rng);
    for (long i = 0; i < n; ++i) {
        if (i == next_flip) {
            label = 1 - label;
            next_flip = i + run_len(rng);
        }
        cs.clusters[static_cast<std::size_t>(label)].members.push_back(
            static_cast<std::size_t>(i));
        speeds.push_back((label == 0 ? 34.0 : 82.0) + jitter(rng));
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(classify_periods(cs, speeds, 8));
    }
}
BENCHMARK(bm_classify_periods)->Arg(96)->Arg(960);

void bm_fit(benchmark::State& state) {
    const FittedChain& f = fitted_chain();
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit(f.panel, f.spec, f.weights, f.lag_sets, f.day));
    }
}
BENCHMARK(bm_fit);

void bm_forecast(benchmark::State& state) {
    const FittedChain& f = fitted_chain();
    for (auto _ : state) {
        benchmark::DoNotOptimize(forecast(f.model, f.panel, 30, f.day));
    }
}
BENCHMARK(bm_forecast);

} // namespace

BENCHMARK_MAIN();
