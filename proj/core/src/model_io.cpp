#include "starima/model_io.hpp"

#include "starima/errors.hpp"

#include <json.hpp>

#include <fstream>

namespace starima {

namespace {

using nlohmann::json;

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw DataError(path + ": " + e.what());
    }
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j, const std::string& what) {
    if (!j.is_array()) throw DataError(what + ": expected an array of rows");
    const auto nrows = j.size();
    std::size_t ncols = nrows > 0 ? j[0].size() : 0;
    Eigen::MatrixXd m(static_cast<Eigen::Index>(nrows), static_cast<Eigen::Index>(ncols));
    for (std::size_t i = 0; i < nrows; ++i) {
        if (j[i].size() != ncols) throw DataError(what + ": ragged rows");
        for (std::size_t c = 0; c < ncols; ++c) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = j[i][c].get<double>();
        }
    }
    return m;
}

json lag_matrix_to_json(const LagMatrix& lm) {
    return json{{"order", lm.order},
                {"regime_cluster_id", lm.regime_cluster_id},
                {"entries", lm.entries}};
}

LagMatrix lag_matrix_from_json(const json& j) {
    LagMatrix lm;
    lm.order = j.at("order").get<int>();
    lm.regime_cluster_id = j.at("regime_cluster_id").get<int>();
    lm.entries = j.at("entries").get<std::vector<std::vector<int>>>();
    return lm;
}

} // namespace

void save_model(const std::string& path, const StarimaModel& model) {
    json spec{{"lambda", model.spec.lambda},
              {"d", model.spec.d},
              {"q", model.spec.q},
              {"m_k", model.spec.m_k},
              {"lag_mode", to_string(model.spec.lag_mode)},
              {"ar_order_l0", model.spec.ar_order_l0}};

    json weights = json::array();
    for (const Eigen::MatrixXd& W : model.weights.W) weights.push_back(matrix_to_json(W));

    json lag_sets = json::array();
    for (const RegimeLags& rl : model.lag_sets) {
        json by_order = json::array();
        for (const LagMatrix& lm : rl.by_order) by_order.push_back(lag_matrix_to_json(lm));
        lag_sets.push_back(json{{"cluster_id", rl.cluster_id}, {"by_order", std::move(by_order)}});
    }

    write_json(path, json{{"spec", std::move(spec)},
                          {"stations", model.stations},
                          {"slot_seconds", model.slot_seconds},
                          {"weights", std::move(weights)},
                          {"lag_sets", std::move(lag_sets)},
                          {"phi_own", model.phi_own},
                          {"phi_spatial", model.phi_spatial},
                          {"theta", model.theta},
                          {"residual_variance", model.residual_variance},
                          {"residual_tail", matrix_to_json(model.residual_tail)}});
}

StarimaModel load_model(const std::string& path) {
    const json j = load_json(path);
    StarimaModel m;
    try {
        const json& spec = j.at("spec");
        m.spec.lambda = spec.at("lambda").get<int>();
        m.spec.d = spec.at("d").get<int>();
        m.spec.q = spec.at("q").get<int>();
        m.spec.m_k = spec.at("m_k").get<std::vector<int>>();
        m.spec.lag_mode = lag_mode_from_string(spec.at("lag_mode").get<std::string>());
        m.spec.ar_order_l0 = spec.at("ar_order_l0").get<std::vector<int>>();
        m.stations = j.at("stations").get<std::vector<std::string>>();
        m.slot_seconds = j.at("slot_seconds").get<double>();
        for (const json& w : j.at("weights")) {
            m.weights.W.push_back(matrix_from_json(w, path + ": weights"));
        }
        for (const json& rl : j.at("lag_sets")) {
            RegimeLags set;
            set.cluster_id = rl.at("cluster_id").get<int>();
            for (const json& lm : rl.at("by_order")) set.by_order.push_back(lag_matrix_from_json(lm));
            m.lag_sets.push_back(std::move(set));
        }
        m.phi_own = j.at("phi_own").get<std::vector<double>>();
        m.phi_spatial = j.at("phi_spatial").get<std::vector<double>>();
        m.theta = j.at("theta").get<std::vector<std::vector<double>>>();
        m.residual_variance = j.at("residual_variance").get<double>();
        m.residual_tail = matrix_from_json(j.at("residual_tail"), path + ": residual_tail");
    } catch (const json::exception& e) {
        throw DataError(path + ": " + e.what());
    }
    m.spec.validate(m.stations.size());
    return m;
}

void save_clusters(const std::string& path, const SpeedClusterSet& clusters) {
    json arr = json::array();
    for (const auto& c : clusters.clusters) {
        arr.push_back(json{{"center", c.center}, {"members", c.members}});
    }
    write_json(path, json{{"clusters", std::move(arr)}});
}

SpeedClusterSet load_clusters(const std::string& path) {
    const json j = load_json(path);
    SpeedClusterSet out;
    try {
        for (const json& c : j.at("clusters")) {
            out.clusters.push_back({c.at("center").get<double>(),
                                    c.at("members").get<std::vector<std::size_t>>()});
        }
    } catch (const json::exception& e) {
        throw DataError(path + ": " + e.what());
    }
    return out;
}

void save_ground_truth(const std::string& path, const GroundTruth& truth) {
    json regimes = json::array();
    for (const SynthRegime& r : truth.regimes) {
        regimes.push_back(json{{"slot_start", r.slot_start},
                               {"slot_end", r.slot_end},
                               {"mean_speed", r.mean_speed},
                               {"speed_jitter_sd", r.speed_jitter_sd}});
    }
    json regime_lags = json::array();
    for (const auto& per_regime : truth.regime_lags) {
        json by_order = json::array();
        for (const LagMatrix& lm : per_regime) by_order.push_back(lag_matrix_to_json(lm));
        regime_lags.push_back(std::move(by_order));
    }
    write_json(path, json{{"planted_adjacent_lag", truth.planted_adjacent_lag},
                          {"regimes", std::move(regimes)},
                          {"regime_lags", std::move(regime_lags)}});
}

GroundTruth load_ground_truth(const std::string& path) {
    const json j = load_json(path);
    GroundTruth out;
    try {
        out.planted_adjacent_lag = j.at("planted_adjacent_lag").get<std::vector<int>>();
        for (const json& r : j.at("regimes")) {
            SynthRegime regime;
            regime.slot_start = r.at("slot_start").get<long>();
            regime.slot_end = r.at("slot_end").get<long>();
            regime.mean_speed = r.at("mean_speed").get<double>();
            regime.speed_jitter_sd = r.at("speed_jitter_sd").get<double>();
            out.regimes.push_back(regime);
        }
        for (const json& per_regime : j.at("regime_lags")) {
            std::vector<LagMatrix> by_order;
            for (const json& lm : per_regime) by_order.push_back(lag_matrix_from_json(lm));
            out.regime_lags.push_back(std::move(by_order));
        }
    } catch (const json::exception& e) {
        throw DataError(path + ": " + e.what());
    }
    return out;
}

} // namespace starima
