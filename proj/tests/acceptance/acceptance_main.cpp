// Acceptance harness. Each check prints one [PASS]/[FAIL]/[SKIP] line and
// the process exits nonzero if any mandatory check fails. The last check
// needs a real detector extract and is skipped unless STARIMA_NGSIM_DIR
// points at a directory holding network.csv and data.csv in this repo's
// formats.

#include "starima/ccf.hpp"
#include "starima/config.hpp"
#include "starima/csv.hpp"
#include "starima/isodata.hpp"
#include "starima/lags.hpp"
#include "starima/metrics.hpp"
#include "starima/model_io.hpp"
#include "starima/partition.hpp"
#include "starima/pipeline.hpp"
#include "starima/series.hpp"
#include "starima/starima.hpp"
#include "starima/synth.hpp"

#include "support/oracles.hpp"
#include "support/sim.hpp"
#include "support/tempdir.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace starima;

enum class Result { pass, fail, skip };

std::string pct(double fraction) {
    std::ostringstream oss;
    oss << std::fixed << std::setprecision(2) << 100.0 * fraction << "%";
    return oss.str();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) return {};
    std::ostringstream oss;
    oss << in.rdbuf();
    return oss.str();
}

StationNetwork corridor(int n_stations, double spacing_feet) {
    StationNetwork net;
    for (int n = 0; n < n_stations; ++n) {
        net.stations.push_back("s" + std::to_string(n + 1));
        net.positions_feet.push_back(spacing_feet * n);
    }
    return net;
}

DayPartition whole_day(long n_slots) {
    DayPartition day;
    day.slot_seconds = 30.0;
    day.periods = {{0, 0, n_slots - 1, 50.0}};
    return day;
}

bool cluster_invariants_ok(const SpeedClusterSet& cs, std::size_t n, const IsodataParams& p,
                           std::ostream& out) {
    if (cs.size() < 1 || cs.size() > static_cast<std::size_t>(p.k_max)) {
        out << "cluster count " << cs.size() << " outside [1, " << p.k_max << "]";
        return false;
    }
    std::vector<std::size_t> all;
    double prev_center = -1e300;
    for (const SpeedClusterSet::Cluster& c : cs.clusters) {
        if (c.center <= prev_center) {
            out << "centers not strictly ascending";
            return false;
        }
        prev_center = c.center;
        if (cs.size() > 1 && c.members.size() < static_cast<std::size_t>(p.n_min)) {
            out << "cluster of " << c.members.size() << " members below the floor " << p.n_min;
            return false;
        }
        for (std::size_t i = 1; i < c.members.size(); ++i) {
            if (c.members[i - 1] >= c.members[i]) {
                out << "members not ascending";
                return false;
            }
        }
        all.insert(all.end(), c.members.begin(), c.members.end());
    }
    std::sort(all.begin(), all.end());
    if (all.size() != n) {
        out << "membership covers " << all.size() << " of " << n << " slots";
        return false;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (all[i] != i) {
            out << "membership is not a partition of the slots";
            return false;
        }
    }
    return true;
}

std::vector<int> flatten_partition(const DayPartition& part, std::size_t n) {
    std::vector<int> out(n, -1);
    for (const TimeRange& tr : part.periods) {
        for (long t = tr.t_start; t <= tr.t_end; ++t) {
            out[static_cast<std::size_t>(t)] = tr.cluster_id;
        }
    }
    return out;
}

// 1. The two observed regime speeds give consistent distance estimates:
// speed times its integer slot delay agrees across regimes to under 1%.
Result check_speed_lag_product(std::ostream& out) {
    const double slow = 44.45 * 3.0;
    const double fast = 67.05 * 2.0;
    const double gap = std::abs(slow - fast) / fast;
    out << "44.45*3 = " << slow << ", 67.05*2 = " << fast << ", relative gap " << pct(gap);
    return gap < 0.01 ? Result::pass : Result::fail;
}

// 2. Cross-correlation recovers the planted per-regime delay on a noisy
// corridor and agrees with the travel-time law for every adjacent pair.
Result check_planted_delay(std::ostream& out) {
    SynthConfig sc;
    sc.n_stations = 4;
    sc.spacing_feet = 4000.0;
    // long regime windows keep the finite-sample bias of the correlation
    // estimate (which grows with lag) well below the propagated-noise spike
    sc.n_slots = 11520;
    sc.profile = BaseProfile::two_peak;
    sc.profile_amplitude = 100.0;
    sc.noise_sd = 1.25; // 4.8% of the signal sd (~26), under the 5% cap
    sc.blend = 1.0;
    sc.tau_seconds = 30.0;
    sc.seed = 2024;
    sc.regimes = {{0, 5759, 44.45, 0.5}, {5760, 11519, 67.05, 0.5}};
    const SynthResult r = generate(sc);

    bool ok = true;
    for (std::size_t ri = 0; ri < sc.regimes.size(); ++ri) {
        const SynthRegime& reg = sc.regimes[ri];
        const int expected = ri == 0 ? 3 : 2;
        const int law = travel_lag(sc.spacing_feet, reg.mean_speed, sc.tau_seconds);
        if (law != expected) {
            out << "travel lag at " << reg.mean_speed << " ft/s is " << law << ", expected "
                << expected << "; ";
            ok = false;
        }
        // skip the first slots of the regime so the delayed chain has settled
        const long a = reg.slot_start + 16;
        const long b = reg.slot_end;
        for (int n = 0; n + 1 < sc.n_stations; ++n) {
            std::vector<double> up, down;
            for (long t = a; t <= b; ++t) {
                up.push_back(r.flows.values(t, n));
                down.push_back(r.flows.values(t, n + 1));
            }
            const int got = lag_from_ccf(up, down, 8);
            if (got != expected) {
                out << "regime " << ri << " pair s" << n + 1 << "->s" << n + 2 << ": ccf lag "
                    << got << " != " << expected << "; ";
                ok = false;
            }
        }
    }
    if (ok) out << "slow/fast delays 3/2 recovered on all 3 adjacent pairs, matching the law";
    return ok ? Result::pass : Result::fail;
}

// 3. Clustering splits a two-mode speed mixture into exactly two clusters
// near the true means, and its structural invariants survive fuzzing.
Result check_clustering(std::ostream& out) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> congested(34.0, 5.0);
    std::normal_distribution<double> free_flow(82.0, 5.0);
    std::vector<double> speeds;
    for (int i = 0; i < 48; ++i) speeds.push_back(congested(rng));
    for (int i = 0; i < 48; ++i) speeds.push_back(free_flow(rng));

    const IsodataParams params{};
    const SpeedClusterSet got = isodata_1d(speeds, params);
    if (got.size() != 2) {
        out << "expected 2 clusters on the two-mode mixture, got " << got.size();
        return Result::fail;
    }
    const double lo = got.clusters.front().center;
    const double hi = got.clusters.back().center;
    if (std::abs(lo - 34.0) > 2.0 || std::abs(hi - 82.0) > 2.0) {
        out << "centers " << lo << "/" << hi << " not within 2.0 of 34/82";
        return Result::fail;
    }

    std::mt19937_64 fuzz(90210);
    for (int trial = 0; trial < 1000; ++trial) {
        std::uniform_int_distribution<int> len_dist(5, 120);
        const int len = len_dist(fuzz);
        std::uniform_int_distribution<int> modes_dist(1, 3);
        const int n_modes = modes_dist(fuzz);
        std::vector<std::normal_distribution<double>> modes;
        for (int m = 0; m < n_modes; ++m) {
            std::uniform_real_distribution<double> center(10.0, 90.0);
            std::uniform_real_distribution<double> sd(0.5, 8.0);
            modes.emplace_back(center(fuzz), sd(fuzz));
        }
        std::vector<double> values;
        std::uniform_int_distribution<int> pick(0, n_modes - 1);
        for (int i = 0; i < len; ++i) {
            values.push_back(std::max(0.0, modes[static_cast<std::size_t>(pick(fuzz))](fuzz)));
        }
        const SpeedClusterSet cs = isodata_1d(values, params);
        std::ostringstream why;
        if (!cluster_invariants_ok(cs, values.size(), params, why)) {
            out << "fuzz trial " << trial << ": " << why.str();
            return Result::fail;
        }
    }
    out << "centers " << lo << "/" << hi << "; invariants held on 1000 fuzzed inputs";
    return Result::pass;
}

// 4. The period classifier matches an independent transcription of the
// short-run reassignment rule on every 2-cluster label sequence of length
// <= 12, and recovers a planted regime boundary within 2 slots.
Result check_partition_rule(std::ostream& out) {
    long compared = 0;
    for (int len = 1; len <= 12; ++len) {
        for (unsigned mask = 0; mask < (1u << len); ++mask) {
            for (int delta = 1; delta <= std::min(4, len); ++delta) {
                std::vector<int> labels(static_cast<std::size_t>(len));
                std::vector<double> speeds(static_cast<std::size_t>(len));
                for (int i = 0; i < len; ++i) {
                    labels[static_cast<std::size_t>(i)] = (mask >> i) & 1u;
                    speeds[static_cast<std::size_t>(i)] =
                        30.0 + 40.0 * labels[static_cast<std::size_t>(i)] + 0.01 * i;
                }
                SpeedClusterSet cs;
                SpeedClusterSet::Cluster c0{30.0, {}}, c1{70.0, {}};
                for (int i = 0; i < len; ++i) {
                    (labels[static_cast<std::size_t>(i)] == 0 ? c0 : c1)
                        .members.push_back(static_cast<std::size_t>(i));
                }
                if (!c0.members.empty()) cs.clusters.push_back(c0);
                if (!c1.members.empty()) cs.clusters.push_back(c1);
                // the classifier reports cluster indexes, so the reference
                // rule must start from the same numbering
                std::vector<int> index_labels(static_cast<std::size_t>(len), 0);
                for (std::size_t ci = 0; ci < cs.size(); ++ci) {
                    for (std::size_t member : cs.clusters[ci].members) {
                        index_labels[member] = static_cast<int>(ci);
                    }
                }
                const DayPartition part = classify_periods(cs, speeds, delta);
                part.validate(static_cast<std::size_t>(len));
                for (const TimeRange& tr : part.periods) {
                    if (tr.length() < delta) {
                        out << "len " << len << " mask " << mask << " delta " << delta
                            << ": short period survived";
                        return Result::fail;
                    }
                }
                const auto oracle = testsup::partition_oracle(index_labels, speeds, delta);
                if (!oracle) continue;
                if (flatten_partition(part, static_cast<std::size_t>(len)) != *oracle) {
                    out << "len " << len << " mask " << mask << " delta " << delta
                        << ": label assignment differs from the reference rule";
                    return Result::fail;
                }
                ++compared;
            }
        }
    }

    for (std::uint64_t seed : {21ull, 22ull, 23ull, 24ull, 25ull}) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> congested(34.0, 5.0);
        std::normal_distribution<double> free_flow(82.0, 5.0);
        std::vector<double> speeds;
        for (int t = 0; t < 120; ++t) speeds.push_back(t < 60 ? congested(rng) : free_flow(rng));
        const SpeedClusterSet cs = isodata_1d(speeds, IsodataParams{});
        if (cs.size() != 2) {
            out << "seed " << seed << ": planted day clustered into " << cs.size();
            return Result::fail;
        }
        const DayPartition part = classify_periods(cs, speeds, 8);
        if (part.periods.size() != 2 || std::abs(part.periods.front().t_end - 59) > 2) {
            out << "seed " << seed << ": boundary at "
                << (part.periods.empty() ? -1 : part.periods.front().t_end)
                << " in " << part.periods.size() << " periods, expected 59 +/- 2";
            return Result::fail;
        }
    }
    out << compared << " label sequences matched the reference rule; planted boundary within 2";
    return Result::pass;
}

// 5. Fitting recovers known coefficients from simulated data, and the pure
// autoregressive path agrees with a direct least-squares solve to 1e-8.
Result check_estimator(std::ostream& out) {
    // (a) corridor chain with an own lag and a one-hop spatial lag
    const StationNetwork net = corridor(3, 4000.0);
    const Eigen::MatrixXd X = testsup::sim_chain(3, 5000, 0.5, 0.3, 2, 515);
    const FlowPanel panel{net.stations, 30.0, 0, X};
    StarimaSpec spec;
    spec.lambda = 1;
    spec.d = 0;
    spec.q = 0;
    spec.lag_mode = LagMode::fixed_constant;
    spec.ar_order_l0 = {1, 1, 1};
    LagMatrix lm;
    lm.order = 1;
    lm.entries.assign(3, std::vector<int>(3, LagMatrix::kUndefined));
    lm.entries[0][1] = 2;
    lm.entries[1][2] = 2;
    const StarimaModel m =
        fit(panel, spec, build_weights(net, 1), {RegimeLags{0, {lm}}}, whole_day(5000));
    if (std::abs(m.phi_own.at(0) - 0.5) > 0.05 || std::abs(m.phi_spatial.at(0) - 0.3) > 0.05) {
        out << "chain truth 0.5/0.3, fitted " << m.phi_own.at(0) << "/" << m.phi_spatial.at(0);
        return Result::fail;
    }

    // (b) single-station model with differencing
    const std::vector<double> diffs = testsup::sim_ar({0.4, 0.2}, 5000, 516);
    const std::vector<double> levels = testsup::integrate_once(diffs, 100.0);
    const SlotSeries series{"s1", SeriesKind::flow, 30.0, 0, levels};
    const StarimaModel am = fit_arima(series, 2, 1, 0);
    if (std::abs(am.phi_own.at(0) - 0.4) > 0.05 || std::abs(am.phi_own.at(1) - 0.2) > 0.05) {
        out << "differenced truth 0.4/0.2, fitted " << am.phi_own.at(0) << "/"
            << am.phi_own.at(1);
        return Result::fail;
    }

    // (c) no spatial or moving-average terms: must equal plain least squares
    const std::vector<double> x = testsup::sim_ar({0.5, -0.3}, 3000, 517);
    const StationNetwork net1 = corridor(1, 4000.0);
    Eigen::MatrixXd col(static_cast<long>(x.size()), 1);
    for (std::size_t t = 0; t < x.size(); ++t) col(static_cast<long>(t), 0) = x[t];
    const FlowPanel p1{net1.stations, 30.0, 0, col};
    StarimaSpec spec1;
    spec1.lambda = 0;
    spec1.d = 0;
    spec1.q = 0;
    spec1.lag_mode = LagMode::fixed_constant;
    spec1.ar_order_l0 = {2};
    const StarimaModel m1 =
        fit(p1, spec1, build_weights(net1, 0), {RegimeLags{0, {}}}, whole_day(3000));

    const long rows = static_cast<long>(x.size()) - 2;
    Eigen::MatrixXd A(rows, 2);
    Eigen::VectorXd y(rows);
    for (long t = 2; t < static_cast<long>(x.size()); ++t) {
        y(t - 2) = x[static_cast<std::size_t>(t)];
        A(t - 2, 0) = x[static_cast<std::size_t>(t - 1)];
        A(t - 2, 1) = x[static_cast<std::size_t>(t - 2)];
    }
    const Eigen::VectorXd b = A.colPivHouseholderQr().solve(y);
    const double dev =
        std::max(std::abs(m1.phi_own.at(0) - b(0)), std::abs(m1.phi_own.at(1) - b(1)));
    if (dev > 1e-8) {
        out << "pure autoregression differs from least squares by " << dev;
        return Result::fail;
    }
    out << "chain " << m.phi_own.at(0) << "/" << m.phi_spatial.at(0) << ", differenced "
        << am.phi_own.at(0) << "/" << am.phi_own.at(1) << ", least-squares gap " << dev;
    return Result::pass;
}

// 6. On a regime-switching corridor, speed-varying lags beat both a single
// whole-day correlation lag and a per-station model without neighbors, at
// every downstream station, for five seeds.
Result check_comparative_accuracy(std::ostream& out) {
    double min_vs_fixed = 1e9, min_vs_single = 1e9;
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
        testsup::TempDir td;
        PipelineConfig cfg = default_config();
        cfg.out_dir = td.path.string();
        cfg.seed = seed;
        cfg.synth.seed = seed;
        // flat base curve: the forecastable structure is the noise that
        // travels down the corridor with the regime's delay. Three speed
        // levels cycling through six windows force the whole-day CCF lag to
        // mismatch at least two of the three clusters, and pooling six
        // holdout windows per station averages out anchor-value luck.
        cfg.synth.profile = BaseProfile::flat;
        cfg.synth.noise_sd = 6.0;
        cfg.synth.blend = 0.95;
        cfg.x_flow = 1;
        cfg.ccf_max_lag = 32;
        cfg.q = 0;
        cfg.synth.regimes.clear();
        const double speeds[3] = {20.0, 52.0, 85.0};
        for (int r = 0; r < 6; ++r) {
            SynthRegime reg;
            reg.slot_start = r * 480;
            reg.slot_end = (r + 1) * 480 - 1;
            reg.mean_speed = speeds[r % 3];
            reg.speed_jitter_sd = 2.0;
            cfg.synth.regimes.push_back(reg);
        }

        stage_generate(cfg);
        stage_smooth(cfg);
        stage_ccf(cfg);
        stage_cluster(cfg);
        stage_partition(cfg);
        stage_lags(cfg);
        const std::vector<MethodReport> reports = stage_evaluate(cfg);

        std::map<std::string, const MethodReport*> by_method;
        for (const MethodReport& mr : reports) by_method[mr.method] = &mr;
        for (const char* method : {"speed_varying", "fixed_ccf", "arima"}) {
            if (by_method.count(method) == 0) {
                out << "method " << method << " missing from the evaluation";
                return Result::fail;
            }
        }

        auto pooled = [](const MethodReport& mr, const std::string& station) {
            double weighted = 0.0;
            std::size_t points = 0, rows = 0;
            for (const EvalReport& r : mr.rows) {
                if (r.station_id != station) continue;
                const std::size_t used = r.n_points - r.n_skipped_zero_actuals;
                weighted += r.mape * static_cast<double>(used);
                points += used;
                ++rows;
            }
            return std::tuple<double, std::size_t, std::size_t>(
                points == 0 ? 1e9 : weighted / static_cast<double>(points), points, rows);
        };

        for (const std::string station : {"s2", "s3", "s4"}) {
            const auto [sv, sv_pts, sv_rows] = pooled(*by_method["speed_varying"], station);
            const auto [fc, fc_pts, fc_rows] = pooled(*by_method["fixed_ccf"], station);
            const auto [ar, ar_pts, ar_rows] = pooled(*by_method["arima"], station);
            if (sv_rows != fc_rows || sv_rows != ar_rows || sv_rows == 0) {
                out << "seed " << seed << " " << station << ": uneven evaluation coverage ("
                    << sv_rows << "/" << fc_rows << "/" << ar_rows << " windows)";
                return Result::fail;
            }
            if (sv_pts == 0 || fc_pts == 0 || ar_pts == 0) {
                out << "seed " << seed << " " << station << ": no evaluable points";
                return Result::fail;
            }
            if (!(sv < fc && sv < ar)) {
                out << "seed " << seed << " " << station << ": speed-varying " << pct(sv)
                    << " not below fixed-lag " << pct(fc) << " and single-station " << pct(ar);
                return Result::fail;
            }
            min_vs_fixed = std::min(min_vs_fixed, fc - sv);
            min_vs_single = std::min(min_vs_single, ar - sv);
        }
    }
    out << "all 5 seeds, stations s2-s4; min margin " << pct(min_vs_fixed)
        << " vs fixed lag, " << pct(min_vs_single) << " vs single-station";
    return Result::pass;
}

// 7. Cross-cutting invariants: correlation equals a brute-force oracle,
// differencing round-trips, fitted forecasts scale with the data, metrics
// obey their scaling laws, and the pipeline is deterministic under a seed.
Result check_invariants(std::ostream& out) {
    std::mt19937_64 rng(909);
    std::normal_distribution<double> noise(0.0, 1.0);

    std::vector<double> u, y;
    for (int t = 0; t < 300; ++t) {
        u.push_back(noise(rng));
        y.push_back(noise(rng));
    }
    for (int k = 0; k <= 12; ++k) {
        const double got = cross_correlation(u, y, k);
        const double want = testsup::ccf_naive(u, y, k);
        if (std::abs(got - want) > 1e-12) {
            out << "correlation at shift " << k << " differs from brute force by "
                << std::abs(got - want);
            return Result::fail;
        }
    }

    std::vector<double> walk{100.0};
    for (int t = 0; t < 500; ++t) walk.push_back(walk.back() + noise(rng));
    for (int d : {1, 2}) {
        const auto [diffs, initials] = difference(walk, d);
        const std::vector<double> back = undifference(diffs, initials, d);
        if (back.size() != walk.size()) {
            out << "differencing by " << d << " changed the length";
            return Result::fail;
        }
        for (std::size_t i = 0; i < walk.size(); ++i) {
            if (std::abs(back[i] - walk[i]) > 1e-9) {
                out << "differencing by " << d << " did not round-trip at slot " << i;
                return Result::fail;
            }
        }
    }

    // scaling the panel by 10 must scale the fitted forecast by 10
    const StationNetwork net = corridor(3, 4000.0);
    const Eigen::MatrixXd X = testsup::sim_chain(3, 1500, 0.5, 0.3, 2, 616);
    StarimaSpec spec;
    spec.lambda = 1;
    spec.d = 1;
    spec.q = 0;
    spec.lag_mode = LagMode::fixed_constant;
    spec.ar_order_l0 = {1, 1, 1};
    LagMatrix lm;
    lm.order = 1;
    lm.entries.assign(3, std::vector<int>(3, LagMatrix::kUndefined));
    lm.entries[0][1] = 2;
    lm.entries[1][2] = 2;
    const WeightMatrices W = build_weights(net, 1);
    const DayPartition day = whole_day(4000);
    FlowPanel base{net.stations, 30.0, 0, X};
    FlowPanel scaled = base;
    scaled.values *= 10.0;
    const FlowPanel f1 = forecast(fit(base, spec, W, {RegimeLags{0, {lm}}}, day), base, 12, day);
    const FlowPanel f10 =
        forecast(fit(scaled, spec, W, {RegimeLags{0, {lm}}}, day), scaled, 12, day);
    for (long t = 0; t < f1.rows(); ++t) {
        for (long n = 0; n < f1.cols(); ++n) {
            const double want = 10.0 * f1.values(t, n);
            if (std::abs(f10.values(t, n) - want) > 1e-6 * (1.0 + std::abs(want))) {
                out << "forecast did not scale with the data at step " << t;
                return Result::fail;
            }
        }
    }

    std::vector<double> actual, predicted;
    for (int i = 0; i < 50; ++i) {
        actual.push_back(20.0 + noise(rng));
        predicted.push_back(20.0 + noise(rng));
    }
    std::vector<double> a3 = actual, p3 = predicted;
    for (double& v : a3) v *= 3.0;
    for (double& v : p3) v *= 3.0;
    if (std::abs(mse(a3, p3) - 9.0 * mse(actual, predicted)) >
        1e-12 * std::abs(9.0 * mse(actual, predicted))) {
        out << "mean squared error does not scale quadratically";
        return Result::fail;
    }
    const auto [m1, s1] = mape(actual, predicted);
    const auto [m3, s3] = mape(a3, p3);
    if (s1 != s3 || std::abs(m1 - m3) > 1e-12) {
        out << "percentage error is not scale free";
        return Result::fail;
    }

    // identical seeds must give identical artifacts
    auto small_corridor = [](const std::string& dir) {
        PipelineConfig cfg = default_config();
        cfg.out_dir = dir;
        cfg.synth.n_stations = 3;
        cfg.synth.spacing_feet = 4000.0;
        cfg.synth.n_slots = 960;
        cfg.synth.noise_sd = 2.0;
        cfg.synth.regimes = {{0, 479, 33.3, 2.0}, {480, 959, 66.7, 2.0}};
        cfg.seed = 4242;
        cfg.synth.seed = 4242;
        cfg.pacf_max_lag = 4;
        cfg.horizon = 10;
        return cfg;
    };
    testsup::TempDir ta, tb;
    run_pipeline(small_corridor(ta.path.string()));
    run_pipeline(small_corridor(tb.path.string()));
    for (const char* name :
         {"model.json", "forecast.csv", "report_speed_varying.csv", "report_arima.csv"}) {
        const std::string a = slurp(ta.file(name));
        if (a.empty() || a != slurp(tb.file(name))) {
            out << name << " differs between two seeded runs";
            return Result::fail;
        }
    }
    out << "correlation oracle, differencing, scaling laws, and seeded determinism all hold";
    return Result::pass;
}

// 8. Optional: reproduce the recorded corridor extract results. Expects
// network.csv and data.csv under STARIMA_NGSIM_DIR with stations s3..s6;
// checks the speed cluster centers (34.33 / 82.15 within 0.5), the per
// regime delays by spatial order, and the per-station error levels.
Result check_real_extract(std::ostream& out) {
    const char* dir = std::getenv("STARIMA_NGSIM_DIR");
    if (dir == nullptr || *dir == '\0') {
        out << "set STARIMA_NGSIM_DIR to a directory with network.csv and data.csv to enable";
        return Result::skip;
    }
    testsup::TempDir td;
    PipelineConfig cfg = default_config();
    cfg.out_dir = td.path.string();
    cfg.network_csv = std::string(dir) + "/network.csv";
    cfg.data_csv = std::string(dir) + "/data.csv";
    cfg.lambda = 3;

    stage_smooth(cfg);
    stage_ccf(cfg);
    stage_cluster(cfg);
    stage_partition(cfg);
    stage_lags(cfg);

    const SpeedClusterSet cs = load_clusters(td.file("clusters.json"));
    if (cs.size() != 2) {
        out << "expected 2 speed clusters, got " << cs.size();
        return Result::fail;
    }
    const double lo = cs.clusters.front().center;
    const double hi = cs.clusters.back().center;
    if (std::abs(lo - 34.33) > 0.5 || std::abs(hi - 82.15) > 0.5) {
        out << "cluster centers " << lo << "/" << hi << " not within 0.5 of 34.33/82.15";
        return Result::fail;
    }

    const StationNetwork net = load_network(cfg.network_csv);
    const DayPartition part = load_partition_csv(td.file("partition.csv"));
    const LagArtifacts lags = load_lag_csvs(cfg, net, part);
    const std::size_t s3 = net.index_of("s3"), s4 = net.index_of("s4");
    const std::size_t s5 = net.index_of("s5"), s6 = net.index_of("s6");
    // expected slot delays into s6 by spatial order, congested then free flow
    const int expected[2][3] = {{1, 2, 3}, {1, 1, 2}};
    for (const RegimeLags& rl : lags.speed_lag_sets) {
        const int* want = expected[rl.cluster_id == 0 ? 0 : 1];
        const std::size_t from[3] = {s5, s4, s3};
        for (int l = 0; l < 3; ++l) {
            const int got = rl.by_order.at(static_cast<std::size_t>(l)).at(from[l], s6);
            if (got != want[l]) {
                out << "cluster " << rl.cluster_id << " order " << l + 1 << ": delay " << got
                    << " != " << want[l];
                return Result::fail;
            }
        }
    }

    stage_fit(cfg);
    const std::vector<MethodReport> reports = stage_evaluate(cfg);
    const MethodReport* sv = nullptr;
    for (const MethodReport& mr : reports) {
        if (mr.method == "speed_varying") sv = &mr;
    }
    if (sv == nullptr) {
        out << "speed_varying report missing";
        return Result::fail;
    }
    const std::pair<std::string, double> targets[] = {
        {"s3", 0.1225}, {"s4", 0.0551}, {"s5", 0.0402}, {"s6", 0.0782}};
    for (const auto& [station, target] : targets) {
        double weighted = 0.0;
        std::size_t points = 0;
        for (const EvalReport& r : sv->rows) {
            if (r.station_id != station) continue;
            const std::size_t used = r.n_points - r.n_skipped_zero_actuals;
            weighted += r.mape * static_cast<double>(used);
            points += used;
        }
        if (points == 0) {
            out << station << ": no evaluable points";
            return Result::fail;
        }
        const double got = weighted / static_cast<double>(points);
        if (std::abs(got - target) > 0.02) {
            out << station << ": error " << pct(got) << " not within 2pp of " << pct(target);
            return Result::fail;
        }
    }
    out << "centers, per-regime delays, and station error levels reproduced";
    return Result::pass;
}

} // namespace

int main() {
    struct Check {
        std::string name;
        std::function<Result(std::ostream&)> fn;
    };
    const std::vector<Check> checks = {
        {"1. speed-lag product consistency", check_speed_lag_product},
        {"2. planted delay recovery by cross-correlation", check_planted_delay},
        {"3. speed clustering recovery and invariants", check_clustering},
        {"4. day partitioning matches the reference rule", check_partition_rule},
        {"5. estimator coefficient recovery", check_estimator},
        {"6. regime-aware lags beat fixed-lag and single-station baselines",
         check_comparative_accuracy},
        {"7. pipeline invariants", check_invariants},
        {"8. real-corridor reproduction", check_real_extract},
    };

    int failures = 0;
    for (const Check& c : checks) {
        std::ostringstream detail;
        Result r = Result::fail;
        try {
            r = c.fn(detail);
        } catch (const std::exception& e) {
            detail << "unexpected exception: " << e.what();
        }
        const char* tag = r == Result::pass ? "[PASS]" : r == Result::skip ? "[SKIP]" : "[FAIL]";
        std::cout << tag << " " << c.name << "\n";
        if (!detail.str().empty()) std::cout << "       " << detail.str() << "\n";
        if (r == Result::fail) ++failures;
    }
    if (failures > 0) std::cout << failures << " check(s) failed\n";
    return failures > 0 ? 1 : 0;
}
