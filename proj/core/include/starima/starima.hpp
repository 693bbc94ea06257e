#pragma once

#include "starima/lags.hpp"
#include "starima/partition.hpp"
#include "starima/series.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

namespace starima {

enum class LagMode { speed_varying, fixed_ccf, fixed_constant };

std::string to_string(LagMode mode);
LagMode lag_mode_from_string(const std::string& s);

struct StarimaSpec {
    int lambda = 1; // max spatial AR order
    int d = 1;      // differencing order
    int q = 1;      // MA temporal order
    std::vector<int> m_k;         // spatial MA order per MA lag, size q
    LagMode lag_mode = LagMode::speed_varying;
    std::vector<int> ar_order_l0; // own-lag order per station

    void validate(std::size_t n_stations) const;
    int max_own_order() const;
};

// Row-normalized directed adjacency per spatial order; W[0] is identity,
// W[l](n, m) > 0 iff m is the l-th upstream neighbor of n.
struct WeightMatrices {
    std::vector<Eigen::MatrixXd> W;
};

WeightMatrices build_weights(const StationNetwork& network, int lambda);

// Lag matrices for every spatial order under one regime.
struct RegimeLags {
    int cluster_id = 0;
    std::vector<LagMatrix> by_order; // l = 1..lambda
};

struct StarimaModel {
    StarimaSpec spec;
    WeightMatrices weights;
    std::vector<RegimeLags> lag_sets;
    std::vector<std::string> stations;
    double slot_seconds = 0.0;

    std::vector<double> phi_own;             // own-lag coefficients, shared across stations
    std::vector<double> phi_spatial;         // one per spatial order l = 1..lambda
    std::vector<std::vector<double>> theta;  // theta[k-1][l] for k = 1..q, l = 0..m_k
    double residual_variance = 0.0;
    Eigen::MatrixXd residual_tail;           // trailing in-sample residuals, newest row last

    const RegimeLags& lags_for(int cluster_id) const;
};

// Per-step instrumentation filled by forecast on request.
struct ForecastTrace {
    std::vector<int> regime_cluster;
    std::vector<std::size_t> lag_set_index;
};

// Two-stage conditional least squares: a long autoregression first for
// residual estimates, then the full design including lagged-residual
// columns. With q = 0 the first stage is skipped.
StarimaModel fit(const FlowPanel& panel, const StarimaSpec& spec, const WeightMatrices& weights,
                 const std::vector<RegimeLags>& lag_sets, const DayPartition& partition);

// Recursive multi-step prediction on the differenced scale, integrated
// back to levels. The active regime (and with it the lag matrices) is
// looked up per forecast slot.
FlowPanel forecast(const StarimaModel& model, const FlowPanel& history, int horizon,
                   const DayPartition& partition, ForecastTrace* trace = nullptr);

// Single-station reduction.
StarimaModel fit_arima(const SlotSeries& series, int p, int d, int q);
FlowPanel arima_forecast(const StarimaModel& model, const SlotSeries& history, int horizon);

} // namespace starima
