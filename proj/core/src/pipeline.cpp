#include "starima/pipeline.hpp"

#include "starima/ccf.hpp"
#include "starima/csv.hpp"
#include "starima/errors.hpp"
#include "starima/lags.hpp"
#include "starima/model_io.hpp"
#include "starima/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

namespace starima {

namespace {

namespace fs = std::filesystem;

std::string art(const PipelineConfig& cfg, const std::string& name) { return cfg.resolve(name); }

void require_artifact(const std::string& path, const std::string& producer) {
    if (!fs::exists(path)) {
        throw DataError("missing '" + path + "'; run the '" + producer + "' stage first");
    }
}

void ensure_out_dir(const PipelineConfig& cfg) {
    if (!cfg.out_dir.empty() && cfg.out_dir != ".") fs::create_directories(cfg.out_dir);
}

std::vector<double> column_values(const FlowPanel& p, std::size_t n) {
    std::vector<double> out(static_cast<std::size_t>(p.rows()));
    for (Eigen::Index t = 0; t < p.rows(); ++t) {
        out[static_cast<std::size_t>(t)] = p.values(t, static_cast<Eigen::Index>(n));
    }
    return out;
}

std::vector<double> pooled_mean(const FlowPanel& p) {
    std::vector<double> out(static_cast<std::size_t>(p.rows()));
    for (Eigen::Index t = 0; t < p.rows(); ++t) {
        out[static_cast<std::size_t>(t)] = p.values.row(t).mean();
    }
    return out;
}

FlowPanel slice_rows(const FlowPanel& p, long first, long last) {
    FlowPanel out;
    out.stations = p.stations;
    out.slot_seconds = p.slot_seconds;
    out.start_slot = p.start_slot + first;
    out.values = p.values.middleRows(first, last - first + 1);
    return out;
}

// flow-grid rows (relative to the panel) lying fully inside the range
struct FlowWindow {
    long first = 0;
    long last = -1;
    long length() const { return last - first + 1; }
};

FlowWindow flow_window(const TimeRange& r, const DayPartition& partition, const FlowPanel& panel) {
    const double tau_p = partition.slot_seconds > 0.0 ? partition.slot_seconds : panel.slot_seconds;
    const double sec_start = static_cast<double>(partition.start_slot + r.t_start) * tau_p;
    const double sec_end = static_cast<double>(partition.start_slot + r.t_end + 1) * tau_p;
    FlowWindow w;
    w.first = static_cast<long>(std::ceil(sec_start / panel.slot_seconds - 1e-9)) -
              panel.start_slot;
    w.last = static_cast<long>(std::floor(sec_end / panel.slot_seconds + 1e-9)) - 1 -
             panel.start_slot;
    w.first = std::max(w.first, 0L);
    w.last = std::min(w.last, static_cast<long>(panel.rows()) - 1);
    return w;
}

int spatial_order_bound(const PipelineConfig& cfg, const StationNetwork& network) {
    if (cfg.lambda < 0) throw std::invalid_argument("negative spatial order bound");
    if (static_cast<std::size_t>(cfg.lambda) >= network.size()) {
        throw std::invalid_argument("starima.lambda must be below the station count");
    }
    return cfg.lambda;
}

std::vector<int> select_own_orders(const FlowPanel& train, int d, int pacf_max_lag) {
    std::vector<int> orders;
    for (std::size_t n = 0; n < train.stations.size(); ++n) {
        const auto [diffs, initials] = difference(column_values(train, n), d);
        (void)initials;
        const int max_lag =
            std::min<int>(pacf_max_lag, static_cast<int>(diffs.size()) / 4);
        if (max_lag < 1) throw std::invalid_argument("training window too short for order selection");
        orders.push_back(select_ar_order(diffs, max_lag));
    }
    return orders;
}

EvalReport make_report(const std::string& station, const std::string& label,
                       const std::vector<double>& actual, const std::vector<double>& predicted) {
    EvalReport rep;
    rep.station_id = station;
    rep.range_label = label;
    rep.mse = mse(actual, predicted);
    const auto [frac, skipped] = mape(actual, predicted);
    rep.mape = frac;
    rep.n_points = actual.size();
    rep.n_skipped_zero_actuals = skipped;
    return rep;
}

} // namespace

void save_partition_csv(const std::string& path, const DayPartition& partition) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << "slot,cluster_id,range_index,mean_speed\n";
    out << "# slot_seconds=" << format_double(partition.slot_seconds) << '\n';
    out << "# start_slot=" << partition.start_slot << '\n';
    for (std::size_t i = 0; i < partition.periods.size(); ++i) {
        const TimeRange& r = partition.periods[i];
        for (long s = r.t_start; s <= r.t_end; ++s) {
            out << (partition.start_slot + s) << ',' << r.cluster_id << ',' << i << ','
                << format_double(r.mean_speed) << '\n';
        }
    }
}

DayPartition load_partition_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line != "slot,cluster_id,range_index,mean_speed") {
        throw DataError(path + ": expected header 'slot,cluster_id,range_index,mean_speed'");
    }
    DayPartition out;
    struct Row {
        long slot;
        int cluster;
        double mean;
    };
    std::map<long, std::vector<Row>> by_range;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream iss(line.substr(1));
            std::string key;
            if (iss >> key) {
                if (key.rfind("slot_seconds=", 0) == 0) {
                    out.slot_seconds = std::stod(key.substr(13));
                } else if (key.rfind("start_slot=", 0) == 0) {
                    out.start_slot = std::stol(key.substr(11));
                }
            }
            continue;
        }
        Row r{};
        long range_index = 0;
        char c1, c2, c3;
        std::istringstream iss(line);
        if (!(iss >> r.slot >> c1 >> r.cluster >> c2 >> range_index >> c3 >> r.mean) ||
            c1 != ',' || c2 != ',' || c3 != ',') {
            throw DataError(path + ":" + std::to_string(line_no) + ": malformed row");
        }
        by_range[range_index].push_back(r);
    }
    if (by_range.empty()) throw DataError(path + ": no data rows");
    for (const auto& [index, rows] : by_range) {
        (void)index;
        TimeRange range;
        range.cluster_id = rows.front().cluster;
        range.t_start = rows.front().slot - out.start_slot;
        range.t_end = rows.back().slot - out.start_slot;
        range.mean_speed = rows.front().mean;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].slot != rows.front().slot + static_cast<long>(i) ||
                rows[i].cluster != range.cluster_id) {
                throw DataError(path + ": range rows not contiguous");
            }
        }
        out.periods.push_back(range);
    }
    std::sort(out.periods.begin(), out.periods.end(),
              [](const TimeRange& a, const TimeRange& b) { return a.t_start < b.t_start; });
    long total = 0;
    for (const TimeRange& r : out.periods) total += r.length();
    try {
        out.validate(static_cast<std::size_t>(total));
    } catch (const std::invalid_argument& e) {
        throw DataError(path + ": " + e.what());
    }
    return out;
}

RegimeLags constant_lag_set(const StationNetwork& network, int lambda) {
    RegimeLags out;
    out.cluster_id = -1;
    const std::size_t n = network.size();
    for (int l = 1; l <= lambda; ++l) {
        LagMatrix lm;
        lm.order = l;
        lm.regime_cluster_id = -1;
        lm.entries.assign(n, std::vector<int>(n, LagMatrix::kUndefined));
        for (std::size_t to = 0; to < n; ++to) {
            const auto from = network.upstream_neighbor(to, l);
            if (from) lm.entries[*from][to] = 1;
        }
        out.by_order.push_back(std::move(lm));
    }
    return out;
}

void save_lag_csvs(const PipelineConfig& cfg, const LagArtifacts& lags,
                   const StationNetwork& network) {
    for (const RegimeLags& rl : lags.speed_lag_sets) {
        const std::string path =
            art(cfg, "lags_cluster" + std::to_string(rl.cluster_id) + ".csv");
        std::ofstream out(path);
        if (!out) throw DataError("cannot write '" + path + "'");
        out << "order,from,to,lag_slots,lag_source\n";
        for (std::size_t li = 0; li < rl.by_order.size(); ++li) {
            const LagMatrix& lm = rl.by_order[li];
            for (std::size_t to = 0; to < network.size(); ++to) {
                for (std::size_t from = 0; from < network.size(); ++from) {
                    if (!lm.defined(from, to)) continue;
                    out << lm.order << ',' << network.stations[from] << ','
                        << network.stations[to] << ',' << lm.at(from, to) << ",speed\n";
                    if (li < lags.ccf_lag_set.by_order.size() &&
                        lags.ccf_lag_set.by_order[li].defined(from, to)) {
                        out << lm.order << ',' << network.stations[from] << ','
                            << network.stations[to] << ','
                            << lags.ccf_lag_set.by_order[li].at(from, to) << ",ccf\n";
                    }
                }
            }
        }
    }
}

LagArtifacts load_lag_csvs(const PipelineConfig& cfg, const StationNetwork& network,
                           const DayPartition& partition) {
    std::set<int> clusters;
    for (const TimeRange& r : partition.periods) clusters.insert(r.cluster_id);

    LagArtifacts out;
    const std::size_t n = network.size();
    bool ccf_filled = false;
    for (int cluster : clusters) {
        const std::string path = art(cfg, "lags_cluster" + std::to_string(cluster) + ".csv");
        require_artifact(path, "lags");
        std::ifstream in(path);
        if (!in) throw DataError("cannot open '" + path + "'");
        std::string line;
        if (!std::getline(in, line) || line != "order,from,to,lag_slots,lag_source") {
            throw DataError(path + ": expected header 'order,from,to,lag_slots,lag_source'");
        }
        std::map<int, LagMatrix> speed_by_order, ccf_by_order;
        std::size_t line_no = 1;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) continue;
            std::istringstream iss(line);
            std::string field;
            std::vector<std::string> f;
            while (std::getline(iss, field, ',')) f.push_back(field);
            if (f.size() != 5) {
                throw DataError(path + ":" + std::to_string(line_no) + ": malformed row");
            }
            const int order = std::stoi(f[0]);
            const std::size_t from = network.index_of(f[1]);
            const std::size_t to = network.index_of(f[2]);
            const int lag = std::stoi(f[3]);
            auto& target = (f[4] == "speed") ? speed_by_order : ccf_by_order;
            auto [it, inserted] = target.try_emplace(order);
            if (inserted) {
                it->second.order = order;
                it->second.regime_cluster_id = (f[4] == "speed") ? cluster : -1;
                it->second.entries.assign(n, std::vector<int>(n, LagMatrix::kUndefined));
            }
            it->second.entries[from][to] = lag;
        }
        RegimeLags rl;
        rl.cluster_id = cluster;
        for (auto& [order, lm] : speed_by_order) {
            (void)order;
            rl.by_order.push_back(std::move(lm));
        }
        out.speed_lag_sets.push_back(std::move(rl));
        if (!ccf_filled) {
            out.ccf_lag_set.cluster_id = -1;
            for (auto& [order, lm] : ccf_by_order) {
                (void)order;
                out.ccf_lag_set.by_order.push_back(std::move(lm));
            }
            ccf_filled = true;
        }
    }
    return out;
}

void save_reports_csv(const std::string& path, const std::vector<EvalReport>& rows) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << "station,range,mape_pct,mse,n,skipped\n";
    for (const EvalReport& r : rows) {
        out << r.station_id << ',' << r.range_label << ',' << format_double(r.mape * 100.0) << ','
            << format_double(r.mse) << ',' << r.n_points << ',' << r.n_skipped_zero_actuals
            << '\n';
    }
}

void stage_generate(const PipelineConfig& cfg) {
    ensure_out_dir(cfg);
    const SynthResult result = generate(cfg.synth);
    save_network(art(cfg, cfg.network_csv), result.network);
    StationDataMap data;
    for (std::size_t n = 0; n < result.network.size(); ++n) {
        StationData sd;
        sd.flow = result.flows.column(n, SeriesKind::flow);
        sd.speed = result.speeds.column(n, SeriesKind::speed);
        data.emplace(result.network.stations[n], std::move(sd));
    }
    save_csv(art(cfg, cfg.data_csv), result.network, data);
    save_ground_truth(art(cfg, "ground_truth.json"), result.truth);
}

void stage_smooth(const PipelineConfig& cfg) {
    ensure_out_dir(cfg);
    require_artifact(art(cfg, cfg.data_csv), "generate");
    require_artifact(art(cfg, cfg.network_csv), "generate");
    const auto [network, data] = load_csv(art(cfg, cfg.data_csv), art(cfg, cfg.network_csv));
    std::vector<SlotSeries> flows, speeds;
    for (const std::string& station : network.stations) {
        flows.push_back(smooth(data.at(station).flow, cfg.x_flow));
        speeds.push_back(smooth(data.at(station).speed, cfg.x_speed));
    }
    save_value_csv(art(cfg, "smoothed_flow.csv"), make_panel(network, flows));
    save_value_csv(art(cfg, "smoothed_speed.csv"), make_panel(network, speeds));
}

void stage_ccf(const PipelineConfig& cfg) {
    require_artifact(art(cfg, cfg.network_csv), "generate");
    require_artifact(art(cfg, "smoothed_flow.csv"), "smooth");
    const StationNetwork network = load_network(art(cfg, cfg.network_csv));
    const FlowPanel flows = load_value_csv(art(cfg, "smoothed_flow.csv"), network);
    const int orders = std::max(1, std::min<int>(cfg.lambda,
                                                 static_cast<int>(network.size()) - 1));
    for (int l = 1; l <= orders; ++l) {
        for (std::size_t to = 0; to < network.size(); ++to) {
            const auto from = network.upstream_neighbor(to, l);
            if (!from) continue;
            const auto profile = ccf_profile(column_values(flows, *from), column_values(flows, to),
                                             cfg.ccf_max_lag);
            const std::string path = art(cfg, "ccf_" + network.stations[*from] + "_" +
                                                  network.stations[to] + ".csv");
            std::ofstream out(path);
            if (!out) throw DataError("cannot write '" + path + "'");
            out << "lag,correlation\n";
            for (std::size_t k = 0; k < profile.size(); ++k) {
                out << k << ',' << format_double(profile[k]) << '\n';
            }
        }
    }
}

void stage_cluster(const PipelineConfig& cfg) {
    require_artifact(art(cfg, cfg.network_csv), "generate");
    require_artifact(art(cfg, "smoothed_speed.csv"), "smooth");
    const StationNetwork network = load_network(art(cfg, cfg.network_csv));
    const FlowPanel speeds = load_value_csv(art(cfg, "smoothed_speed.csv"), network);
    save_clusters(art(cfg, "clusters.json"), isodata_1d(pooled_mean(speeds), cfg.isodata));
    if (cfg.cluster_per_station) {
        for (std::size_t n = 0; n < network.size(); ++n) {
            save_clusters(art(cfg, "clusters_" + network.stations[n] + ".json"),
                          isodata_1d(column_values(speeds, n), cfg.isodata));
        }
    }
}

void stage_partition(const PipelineConfig& cfg) {
    require_artifact(art(cfg, cfg.network_csv), "generate");
    require_artifact(art(cfg, "smoothed_speed.csv"), "smooth");
    require_artifact(art(cfg, "clusters.json"), "cluster");
    const StationNetwork network = load_network(art(cfg, cfg.network_csv));
    const FlowPanel speeds = load_value_csv(art(cfg, "smoothed_speed.csv"), network);
    const SpeedClusterSet clusters = load_clusters(art(cfg, "clusters.json"));
    DayPartition partition = classify_periods(clusters, pooled_mean(speeds), cfg.delta);
    partition.slot_seconds = speeds.slot_seconds;
    partition.start_slot = speeds.start_slot;
    save_partition_csv(art(cfg, "partition.csv"), partition);
}

void stage_lags(const PipelineConfig& cfg) {
    require_artifact(art(cfg, cfg.network_csv), "generate");
    require_artifact(art(cfg, "smoothed_flow.csv"), "smooth");
    require_artifact(art(cfg, "partition.csv"), "partition");
    const StationNetwork network = load_network(art(cfg, cfg.network_csv));
    const FlowPanel flows = load_value_csv(art(cfg, "smoothed_flow.csv"), network);
    const DayPartition partition = load_partition_csv(art(cfg, "partition.csv"));
    const int lambda = spatial_order_bound(cfg, network);

    // one lag set per cluster, at the cluster's length-weighted mean speed
    std::map<int, std::pair<double, long>> cluster_speed;
    for (const TimeRange& r : partition.periods) {
        auto& [acc, len] = cluster_speed[r.cluster_id];
        acc += r.mean_speed * static_cast<double>(r.length());
        len += r.length();
    }
    LagArtifacts lags;
    for (const auto& [cluster, acc_len] : cluster_speed) {
        TimeRange representative;
        representative.cluster_id = cluster;
        representative.mean_speed = acc_len.first / static_cast<double>(acc_len.second);
        RegimeLags rl;
        rl.cluster_id = cluster;
        rl.by_order =
            build_lag_matrices(network, representative, lambda, flows.slot_seconds);
        lags.speed_lag_sets.push_back(std::move(rl));
    }

    lags.ccf_lag_set.cluster_id = -1;
    const std::size_t n = network.size();
    for (int l = 1; l <= lambda; ++l) {
        LagMatrix lm;
        lm.order = l;
        lm.regime_cluster_id = -1;
        lm.entries.assign(n, std::vector<int>(n, LagMatrix::kUndefined));
        for (std::size_t to = 0; to < n; ++to) {
            const auto from = network.upstream_neighbor(to, l);
            if (!from) continue;
            lm.entries[*from][to] = lag_from_ccf(column_values(flows, *from),
                                                 column_values(flows, to), cfg.ccf_max_lag);
        }
        lags.ccf_lag_set.by_order.push_back(std::move(lm));
    }
    save_lag_csvs(cfg, lags, network);
}

namespace {

std::vector<RegimeLags> lag_sets_for_mode(const std::string& mode, const LagArtifacts& lags,
                                          const StationNetwork& network, int lambda) {
    const LagMode m = lag_mode_from_string(mode);
    switch (m) {
    case LagMode::speed_varying: return lags.speed_lag_sets;
    case LagMode::fixed_ccf: return {lags.ccf_lag_set};
    case LagMode::fixed_constant: return {constant_lag_set(network, lambda)};
    }
    throw std::invalid_argument("unknown lag mode");
}

StarimaSpec spec_for(const PipelineConfig& cfg, const std::string& mode,
                     const std::vector<int>& own_orders) {
    StarimaSpec spec;
    spec.lambda = cfg.lambda;
    spec.d = cfg.d;
    spec.q = cfg.q;
    spec.m_k = cfg.resolved_m_k();
    spec.lag_mode = lag_mode_from_string(mode);
    spec.ar_order_l0 = own_orders;
    return spec;
}

} // namespace

void stage_fit(const PipelineConfig& cfg) {
    require_artifact(art(cfg, cfg.network_csv), "generate");
    require_artifact(art(cfg, "smoothed_flow.csv"), "smooth");
    require_artifact(art(cfg, "partition.csv"), "partition");
    const StationNetwork network = load_network(art(cfg, cfg.network_csv));
    const FlowPanel flows = load_value_csv(art(cfg, "smoothed_flow.csv"), network);
    const DayPartition partition = load_partition_csv(art(cfg, "partition.csv"));
    const int lambda = spatial_order_bound(cfg, network);
    const LagArtifacts lags = load_lag_csvs(cfg, network, partition);

    const long T = flows.rows();
    if (T <= cfg.horizon) throw std::invalid_argument("panel shorter than the forecast horizon");
    const FlowPanel train = slice_rows(flows, 0, T - cfg.horizon - 1);

    const std::vector<int> own_orders = select_own_orders(train, cfg.d, cfg.pacf_max_lag);
    const StarimaSpec spec = spec_for(cfg, cfg.lag_mode, own_orders);
    const WeightMatrices weights = build_weights(network, lambda);
    const StarimaModel model =
        fit(train, spec, weights, lag_sets_for_mode(cfg.lag_mode, lags, network, lambda),
            partition);
    save_model(art(cfg, "model.json"), model);
}

void stage_forecast(const PipelineConfig& cfg) {
    require_artifact(art(cfg, cfg.network_csv), "generate");
    require_artifact(art(cfg, "smoothed_flow.csv"), "smooth");
    require_artifact(art(cfg, "partition.csv"), "partition");
    require_artifact(art(cfg, "model.json"), "fit");
    const StationNetwork network = load_network(art(cfg, cfg.network_csv));
    const FlowPanel flows = load_value_csv(art(cfg, "smoothed_flow.csv"), network);
    const DayPartition partition = load_partition_csv(art(cfg, "partition.csv"));
    const StarimaModel model = load_model(art(cfg, "model.json"));

    const long T = flows.rows();
    if (T <= cfg.horizon) throw std::invalid_argument("panel shorter than the forecast horizon");
    const FlowPanel history = slice_rows(flows, 0, T - cfg.horizon - 1);
    const FlowPanel fc = forecast(model, history, cfg.horizon, partition);
    save_value_csv(art(cfg, "forecast.csv"), fc);
}

std::vector<MethodReport> stage_evaluate(const PipelineConfig& cfg) {
    require_artifact(art(cfg, cfg.network_csv), "generate");
    require_artifact(art(cfg, "smoothed_flow.csv"), "smooth");
    require_artifact(art(cfg, "partition.csv"), "partition");
    const StationNetwork network = load_network(art(cfg, cfg.network_csv));
    const FlowPanel flows = load_value_csv(art(cfg, "smoothed_flow.csv"), network);
    const DayPartition partition = load_partition_csv(art(cfg, "partition.csv"));
    const int lambda = spatial_order_bound(cfg, network);
    const LagArtifacts lags = load_lag_csvs(cfg, network, partition);
    const WeightMatrices weights = build_weights(network, lambda);

    const std::vector<std::string> starima_modes{"speed_varying", "fixed_ccf", "fixed_constant"};
    std::vector<MethodReport> reports;
    for (const std::string& m : starima_modes) reports.push_back({m, {}});
    reports.push_back({"arima", {}});

    auto evaluate_window = [&](const FlowPanel& train, const FlowPanel& holdout,
                               const std::string& label) {
        std::vector<int> own_orders;
        try {
            own_orders = select_own_orders(train, cfg.d, cfg.pacf_max_lag);
        } catch (const std::exception& e) {
            std::cerr << "skipping " << label << ": " << e.what() << '\n';
            return;
        }
        for (std::size_t mi = 0; mi < starima_modes.size(); ++mi) {
            try {
                const StarimaSpec spec = spec_for(cfg, starima_modes[mi], own_orders);
                const StarimaModel model =
                    fit(train, spec, weights,
                        lag_sets_for_mode(starima_modes[mi], lags, network, lambda), partition);
                const FlowPanel pred =
                    forecast(model, train, static_cast<int>(holdout.rows()), partition);
                for (std::size_t n = 0; n < network.size(); ++n) {
                    reports[mi].rows.push_back(make_report(network.stations[n], label,
                                                           column_values(holdout, n),
                                                           column_values(pred, n)));
                }
            } catch (const std::exception& e) {
                std::cerr << "skipping " << label << " (" << starima_modes[mi]
                          << "): " << e.what() << '\n';
            }
        }
        for (std::size_t n = 0; n < network.size(); ++n) {
            try {
                const StarimaModel model =
                    fit_arima(train.column(n, SeriesKind::flow), 2, 1, 2);
                const FlowPanel pred = arima_forecast(model, train.column(n, SeriesKind::flow),
                                                      static_cast<int>(holdout.rows()));
                reports.back().rows.push_back(make_report(network.stations[n], label,
                                                          column_values(holdout, n),
                                                          column_values(pred, 0)));
            } catch (const std::exception& e) {
                std::cerr << "skipping " << label << " (arima, " << network.stations[n]
                          << "): " << e.what() << '\n';
            }
        }
    };

    if (cfg.per_range_refit) {
        for (std::size_t i = 0; i < partition.periods.size(); ++i) {
            const FlowWindow w = flow_window(partition.periods[i], partition, flows);
            const std::string label = "r" + std::to_string(i);
            if (w.length() < cfg.horizon * 2) {
                std::cerr << "skipping " << label << ": window of " << w.length()
                          << " slots is too short\n";
                continue;
            }
            const FlowPanel train = slice_rows(flows, w.first, w.last - cfg.horizon);
            const FlowPanel holdout = slice_rows(flows, w.last - cfg.horizon + 1, w.last);
            evaluate_window(train, holdout, label);
        }
    } else {
        const long T = flows.rows();
        if (T <= 2 * cfg.horizon) {
            throw std::invalid_argument("panel shorter than twice the forecast horizon");
        }
        evaluate_window(slice_rows(flows, 0, T - cfg.horizon - 1),
                        slice_rows(flows, T - cfg.horizon, T - 1), "holdout");
    }

    for (const MethodReport& mr : reports) {
        save_reports_csv(art(cfg, "report_" + mr.method + ".csv"), mr.rows);
    }
    return reports;
}

void run_pipeline(const PipelineConfig& cfg) {
    stage_generate(cfg);
    stage_smooth(cfg);
    stage_ccf(cfg);
    stage_cluster(cfg);
    stage_partition(cfg);
    stage_lags(cfg);
    stage_fit(cfg);
    stage_forecast(cfg);
    stage_evaluate(cfg);
}

} // namespace starima
