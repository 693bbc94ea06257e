#include "starima/starima.hpp"

#include "starima/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace starima {

namespace {

// Regression column order: own lags, spatial orders, then lagged-residual
// (MA) terms. Stage 1 uses the same layout with a longer own-lag block and
// no MA block.
struct ColumnLayout {
    int n_own = 0;
    int n_spatial = 0;
    std::vector<std::pair<int, int>> ma; // (temporal lag k, spatial order l)

    int total() const { return n_own + n_spatial + static_cast<int>(ma.size()); }

    std::string name(int j) const {
        if (j < n_own) return "own_lag_" + std::to_string(j + 1);
        j -= n_own;
        if (j < n_spatial) return "spatial_l" + std::to_string(j + 1);
        const auto [k, l] = ma[static_cast<std::size_t>(j - n_spatial)];
        return "ma_k" + std::to_string(k) + "_l" + std::to_string(l);
    }
};

ColumnLayout stage2_layout(const StarimaSpec& spec) {
    ColumnLayout cl;
    cl.n_own = spec.max_own_order();
    cl.n_spatial = spec.lambda;
    for (int k = 1; k <= spec.q; ++k) {
        for (int l = 0; l <= spec.m_k[static_cast<std::size_t>(k - 1)]; ++l) {
            cl.ma.emplace_back(k, l);
        }
    }
    return cl;
}

int max_defined_lag(const std::vector<RegimeLags>& sets) {
    int mx = 0;
    for (const RegimeLags& rl : sets) {
        for (const LagMatrix& lm : rl.by_order) {
            for (const auto& row : lm.entries) {
                for (int v : row) {
                    if (v != LagMatrix::kUndefined) mx = std::max(mx, v);
                }
            }
        }
    }
    return mx;
}

// Map a panel row index onto the partition's slot grid (the two may use
// different slot widths).
long grid_slot(const DayPartition& partition, double panel_slot_seconds, long panel_start_slot,
               long t) {
    if (partition.slot_seconds > 0.0 && panel_slot_seconds > 0.0) {
        const double sec = static_cast<double>(panel_start_slot + t) * panel_slot_seconds;
        return static_cast<long>(std::floor(sec / partition.slot_seconds + 1e-9)) -
               partition.start_slot;
    }
    return panel_start_slot + t - partition.start_slot;
}

std::size_t lag_set_index_for(const std::vector<RegimeLags>& sets, LagMode mode,
                              const DayPartition& partition, double panel_slot_seconds,
                              long panel_start_slot, long t_panel) {
    if (sets.empty()) throw std::invalid_argument("no lag matrices supplied");
    if (mode != LagMode::speed_varying || sets.size() == 1) return 0;
    const TimeRange& r =
        locate(partition, grid_slot(partition, panel_slot_seconds, panel_start_slot, t_panel));
    for (std::size_t i = 0; i < sets.size(); ++i) {
        if (sets[i].cluster_id == r.cluster_id) return i;
    }
    throw std::invalid_argument("no lag matrices for cluster " + std::to_string(r.cluster_id));
}

// One design row for observation (t, n) over the differenced panel z.
// own_orders gates the own-lag block per station; null disables gating.
// eps supplies the lagged-residual block; null zeroes it.
void fill_row(double* row, const Eigen::MatrixXd& z, const Eigen::MatrixXd* eps, long t, int n,
              const ColumnLayout& cl, const std::vector<int>* own_orders,
              const WeightMatrices& weights, const RegimeLags& rl) {
    int j = 0;
    for (int lag = 1; lag <= cl.n_own; ++lag, ++j) {
        const bool active = !own_orders || lag <= (*own_orders)[static_cast<std::size_t>(n)];
        row[j] = (active && t - lag >= 0) ? z(t - lag, n) : 0.0;
    }
    for (int l = 1; l <= cl.n_spatial; ++l, ++j) {
        const Eigen::MatrixXd& W = weights.W[static_cast<std::size_t>(l)];
        const LagMatrix& lm = rl.by_order[static_cast<std::size_t>(l - 1)];
        double acc = 0.0;
        for (int m = 0; m < z.cols(); ++m) {
            const double w = W(n, m);
            if (w == 0.0) continue;
            const int lag = lm.entries[static_cast<std::size_t>(m)][static_cast<std::size_t>(n)];
            if (lag == LagMatrix::kUndefined || t - lag < 0) continue;
            acc += w * z(t - lag, m);
        }
        row[j] = acc;
    }
    for (const auto& [k, l] : cl.ma) {
        double acc = 0.0;
        if (eps && t - k >= 0) {
            const Eigen::MatrixXd& W = weights.W[static_cast<std::size_t>(l)];
            for (int m = 0; m < z.cols(); ++m) {
                const double w = W(n, m);
                if (w != 0.0) acc += w * (*eps)(t - k, m);
            }
        }
        row[j++] = acc;
    }
}

constexpr double kRidge = 1e-8;

Eigen::VectorXd ridge_solve(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            const ColumnLayout& cl) {
    Eigen::MatrixXd A = X.transpose() * X;
    if (!(A.diagonal().mean() > 0.0)) {
        throw EstimationError("degenerate design: all regressors are zero");
    }
    A.diagonal().array() += kRidge;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    if (es.info() != Eigen::Success) throw EstimationError("eigen decomposition failed");
    const double lo = es.eigenvalues()(0);
    if (lo < 10.0 * kRidge) {
        std::string cols;
        const Eigen::VectorXd v = es.eigenvectors().col(0).cwiseAbs();
        for (int j = 0; j < v.size(); ++j) {
            if (v(j) > 0.3) cols += (cols.empty() ? "" : ", ") + cl.name(j);
        }
        throw EstimationError("singular design even with ridge; collinear columns: " + cols);
    }
    return A.ldlt().solve(X.transpose() * y);
}

Eigen::MatrixXd difference_panel(const FlowPanel& panel, int d) {
    const long T = panel.rows();
    const int N = static_cast<int>(panel.cols());
    Eigen::MatrixXd z(T - d, N);
    for (int n = 0; n < N; ++n) {
        std::vector<double> col(static_cast<std::size_t>(T));
        for (long t = 0; t < T; ++t) col[static_cast<std::size_t>(t)] = panel.values(t, n);
        const auto [diffs, initials] = difference(col, d);
        (void)initials;
        for (long t = 0; t < T - d; ++t) z(t, n) = diffs[static_cast<std::size_t>(t)];
    }
    return z;
}

// Raw regression coefficients in column order (MA terms carry the fitted
// sign, which is the negated theta).
Eigen::VectorXd beta_of(const StarimaModel& model, const ColumnLayout& cl) {
    Eigen::VectorXd beta(cl.total());
    int j = 0;
    for (double v : model.phi_own) beta(j++) = v;
    for (double v : model.phi_spatial) beta(j++) = v;
    for (const auto& [k, l] : cl.ma) {
        beta(j++) = -model.theta[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(l)];
    }
    return beta;
}

// Residuals of a long ungated autoregression over own and spatial lags, the
// proxy that stands in for the unobserved shocks wherever lagged residuals
// are needed. Non-recursive, so it stays bounded even when the fitted
// moving-average part sits at the invertibility boundary. Rows before the
// first fully lagged slot keep zero, the residual's unconditional mean.
// Returns false when z has too few rows to support the regression.
bool long_ar_residuals(const Eigen::MatrixXd& z, const StarimaSpec& spec,
                       const WeightMatrices& weights, const std::vector<RegimeLags>& lag_sets,
                       const std::vector<std::size_t>& set_idx, Eigen::MatrixXd& eps) {
    const long Tz = z.rows();
    const int N = static_cast<int>(z.cols());
    ColumnLayout cl1;
    cl1.n_own = spec.max_own_order() + spec.q + 3;
    cl1.n_spatial = spec.lambda;
    const long t1 = std::max<long>(cl1.n_own, max_defined_lag(lag_sets));
    const long rows1 = (Tz - t1) * N;
    if (rows1 < 2L * cl1.total()) return false;
    Eigen::MatrixXd X1(rows1, cl1.total());
    Eigen::VectorXd y1(rows1);
    Eigen::VectorXd row(cl1.total());
    long r = 0;
    for (long t = t1; t < Tz; ++t) {
        const RegimeLags& rl = lag_sets[set_idx[static_cast<std::size_t>(t)]];
        for (int n = 0; n < N; ++n, ++r) {
            fill_row(row.data(), z, nullptr, t, n, cl1, nullptr, weights, rl);
            X1.row(r) = row;
            y1(r) = z(t, n);
        }
    }
    const Eigen::VectorXd beta1 = ridge_solve(X1, y1, cl1);
    for (long t = t1; t < Tz; ++t) {
        const RegimeLags& rl = lag_sets[set_idx[static_cast<std::size_t>(t)]];
        for (int n = 0; n < N; ++n) {
            fill_row(row.data(), z, nullptr, t, n, cl1, nullptr, weights, rl);
            eps(t, n) = z(t, n) - row.dot(beta1);
        }
    }
    return true;
}

} // namespace

std::string to_string(LagMode mode) {
    switch (mode) {
    case LagMode::speed_varying: return "speed_varying";
    case LagMode::fixed_ccf: return "fixed_ccf";
    case LagMode::fixed_constant: return "fixed_constant";
    }
    throw std::invalid_argument("unknown lag mode");
}

LagMode lag_mode_from_string(const std::string& s) {
    if (s == "speed_varying") return LagMode::speed_varying;
    if (s == "fixed_ccf") return LagMode::fixed_ccf;
    if (s == "fixed_constant") return LagMode::fixed_constant;
    throw std::invalid_argument("unknown lag mode '" + s + "'");
}

void StarimaSpec::validate(std::size_t n_stations) const {
    if (lambda < 0 || d < 0 || q < 0) throw std::invalid_argument("negative model order");
    if (m_k.size() != static_cast<std::size_t>(q)) {
        throw std::invalid_argument("m_k must have one entry per MA lag");
    }
    for (int m : m_k) {
        if (m < 0 || m > lambda) throw std::invalid_argument("m_k entries must lie in [0, lambda]");
    }
    if (ar_order_l0.size() != n_stations) {
        throw std::invalid_argument("ar_order_l0 must have one entry per station");
    }
    for (int p : ar_order_l0) {
        if (p < 0) throw std::invalid_argument("negative own-lag order");
    }
}

int StarimaSpec::max_own_order() const {
    int mx = 0;
    for (int p : ar_order_l0) mx = std::max(mx, p);
    return mx;
}

WeightMatrices build_weights(const StationNetwork& network, int lambda) {
    const std::size_t n = network.size();
    if (lambda < 0 || static_cast<std::size_t>(lambda) >= n) {
        throw std::invalid_argument("spatial order bound must be below the station count");
    }
    WeightMatrices out;
    out.W.push_back(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n),
                                              static_cast<Eigen::Index>(n)));
    for (int l = 1; l <= lambda; ++l) {
        Eigen::MatrixXd W = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                  static_cast<Eigen::Index>(n));
        for (std::size_t to = 0; to < n; ++to) {
            const auto from = network.upstream_neighbor(to, l);
            if (from) {
                W(static_cast<Eigen::Index>(to), static_cast<Eigen::Index>(*from)) = 1.0;
            }
        }
        out.W.push_back(std::move(W));
    }
    return out;
}

const RegimeLags& StarimaModel::lags_for(int cluster_id) const {
    if (lag_sets.empty()) throw std::invalid_argument("model carries no lag matrices");
    if (spec.lag_mode != LagMode::speed_varying || lag_sets.size() == 1) return lag_sets.front();
    for (const RegimeLags& rl : lag_sets) {
        if (rl.cluster_id == cluster_id) return rl;
    }
    throw std::invalid_argument("no lag matrices for cluster " + std::to_string(cluster_id));
}

StarimaModel fit(const FlowPanel& panel, const StarimaSpec& spec, const WeightMatrices& weights,
                 const std::vector<RegimeLags>& lag_sets, const DayPartition& partition) {
    panel.validate();
    const int N = static_cast<int>(panel.cols());
    const long T = panel.rows();
    spec.validate(static_cast<std::size_t>(N));
    if (weights.W.size() != static_cast<std::size_t>(spec.lambda) + 1) {
        throw std::invalid_argument("weight matrices do not match the spatial order bound");
    }
    if (lag_sets.empty()) throw std::invalid_argument("no lag matrices supplied");
    for (const RegimeLags& rl : lag_sets) {
        if (rl.by_order.size() != static_cast<std::size_t>(spec.lambda)) {
            throw std::invalid_argument("lag matrices do not match the spatial order bound");
        }
    }

    const int d = spec.d;
    if (T <= d) throw std::invalid_argument("series shorter than the differencing order");
    const Eigen::MatrixXd z = difference_panel(panel, d);
    const long Tz = z.rows();

    const int P0 = spec.max_own_order();
    const int Lmax = max_defined_lag(lag_sets);
    const int maxlag = std::max(P0, Lmax);
    const ColumnLayout cl = stage2_layout(spec);
    const int ncols = cl.total();

    StarimaModel model;
    model.spec = spec;
    model.weights = weights;
    model.lag_sets = lag_sets;
    model.stations = panel.stations;
    model.slot_seconds = panel.slot_seconds;

    if (ncols == 0) {
        // pure differencing model: nothing to estimate
        model.residual_variance = z.squaredNorm() / static_cast<double>(z.size());
        model.residual_tail.resize(0, N);
        return model;
    }

    if (T - d - maxlag - spec.q < 10L * ncols) {
        throw std::invalid_argument("panel too short: " + std::to_string(T) +
                                    " rows cannot support " + std::to_string(ncols) +
                                    " coefficients");
    }

    std::vector<std::size_t> set_idx(static_cast<std::size_t>(Tz));
    for (long t = 0; t < Tz; ++t) {
        set_idx[static_cast<std::size_t>(t)] = lag_set_index_for(
            lag_sets, spec.lag_mode, partition, panel.slot_seconds, panel.start_slot, t + d);
    }

    Eigen::MatrixXd eps = Eigen::MatrixXd::Zero(Tz, N);
    if (spec.q > 0 && !long_ar_residuals(z, spec, weights, lag_sets, set_idx, eps)) {
        throw std::invalid_argument("panel too short for residual pre-estimation");
    }

    // stage 2: full design including lagged residuals
    const long t2 = std::max<long>({static_cast<long>(P0), static_cast<long>(Lmax),
                                    static_cast<long>(spec.q)});
    const long rows2 = (Tz - t2) * N;
    Eigen::MatrixXd X2(rows2, ncols);
    Eigen::VectorXd y2(rows2);
    Eigen::VectorXd xrow(ncols);
    long r = 0;
    for (long t = t2; t < Tz; ++t) {
        const RegimeLags& rl = lag_sets[set_idx[static_cast<std::size_t>(t)]];
        for (int n = 0; n < N; ++n, ++r) {
            fill_row(xrow.data(), z, &eps, t, n, cl, &spec.ar_order_l0, weights, rl);
            X2.row(r) = xrow;
            y2(r) = z(t, n);
        }
    }
    const Eigen::VectorXd beta = ridge_solve(X2, y2, cl);

    int j = 0;
    model.phi_own.assign(static_cast<std::size_t>(cl.n_own), 0.0);
    for (double& v : model.phi_own) v = beta(j++);
    model.phi_spatial.assign(static_cast<std::size_t>(cl.n_spatial), 0.0);
    for (double& v : model.phi_spatial) v = beta(j++);
    model.theta.assign(static_cast<std::size_t>(spec.q), {});
    for (int k = 1; k <= spec.q; ++k) {
        model.theta[static_cast<std::size_t>(k - 1)]
            .assign(static_cast<std::size_t>(spec.m_k[static_cast<std::size_t>(k - 1)]) + 1, 0.0);
    }
    for (const auto& [k, l] : cl.ma) {
        model.theta[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(l)] = -beta(j++);
    }

    const Eigen::VectorXd resid = y2 - X2 * beta;
    model.residual_variance = resid.squaredNorm() / static_cast<double>(rows2);

    Eigen::MatrixXd eps2 = Eigen::MatrixXd::Zero(Tz, N);
    r = 0;
    for (long t = t2; t < Tz; ++t) {
        for (int n = 0; n < N; ++n, ++r) eps2(t, n) = resid(r);
    }
    const long tail = std::min<long>(std::max(spec.q, 1), Tz);
    model.residual_tail = eps2.bottomRows(tail);

    return model;
}

FlowPanel forecast(const StarimaModel& model, const FlowPanel& history, int horizon,
                   const DayPartition& partition, ForecastTrace* trace) {
    history.validate();
    if (horizon < 1) throw std::invalid_argument("horizon must be positive");
    const int N = static_cast<int>(history.cols());
    const long T = history.rows();
    const StarimaSpec& spec = model.spec;
    spec.validate(static_cast<std::size_t>(N));
    if (history.stations != model.stations) {
        throw std::invalid_argument("history stations do not match the fitted model");
    }

    const int d = spec.d;
    if (T <= d) throw std::invalid_argument("history shorter than the differencing order");
    const long Tz = T - d;
    const int P0 = spec.max_own_order();
    const int Lmax = max_defined_lag(model.lag_sets);
    const long maxlag = std::max({static_cast<long>(P0), static_cast<long>(Lmax),
                                  static_cast<long>(spec.q)});
    if (Tz < maxlag) {
        throw std::invalid_argument("history too short to supply every lagged regressor");
    }

    const ColumnLayout cl = stage2_layout(spec);
    const Eigen::VectorXd beta = cl.total() > 0 ? beta_of(model, cl) : Eigen::VectorXd();

    // z holds the differenced history followed by the forecast rows
    Eigen::MatrixXd z(Tz + horizon, N);
    z.topRows(Tz) = difference_panel(history, d);

    // in-sample residuals are re-derived from the history by the same
    // long-autoregression proxy the estimator uses; future rows stay zero
    Eigen::MatrixXd eps = Eigen::MatrixXd::Zero(Tz + horizon, N);
    Eigen::VectorXd row(cl.total());
    if (cl.total() > 0 && spec.q > 0) {
        std::vector<std::size_t> set_idx(static_cast<std::size_t>(Tz));
        for (long t = 0; t < Tz; ++t) {
            set_idx[static_cast<std::size_t>(t)] =
                lag_set_index_for(model.lag_sets, spec.lag_mode, partition,
                                  history.slot_seconds, history.start_slot, t + d);
        }
        const Eigen::MatrixXd zh = z.topRows(Tz);
        Eigen::MatrixXd hist_eps = Eigen::MatrixXd::Zero(Tz, N);
        if (long_ar_residuals(zh, spec, model.weights, model.lag_sets, set_idx, hist_eps)) {
            eps.topRows(Tz) = hist_eps;
        }
    }

    // per-station integration state: last value of each differencing level
    std::vector<std::vector<double>> lasts(static_cast<std::size_t>(N));
    for (int n = 0; n < N; ++n) {
        std::vector<double> level(static_cast<std::size_t>(T));
        for (long t = 0; t < T; ++t) level[static_cast<std::size_t>(t)] = history.values(t, n);
        for (int j = 0; j < d; ++j) {
            lasts[static_cast<std::size_t>(n)].push_back(level.back());
            std::vector<double> next(level.size() - 1);
            for (std::size_t i = 0; i + 1 < level.size(); ++i) next[i] = level[i + 1] - level[i];
            level = std::move(next);
        }
    }

    FlowPanel out;
    out.stations = model.stations;
    out.slot_seconds = history.slot_seconds;
    out.start_slot = history.start_slot + T;
    out.values.resize(horizon, N);

    if (trace) {
        trace->regime_cluster.clear();
        trace->lag_set_index.clear();
    }

    for (int h = 0; h < horizon; ++h) {
        const long t = Tz + h;          // row in z
        const long t_panel = t + d;     // row on the undifferenced grid
        const TimeRange& regime = locate(
            partition, grid_slot(partition, history.slot_seconds, history.start_slot, t_panel));
        const std::size_t si =
            (spec.lag_mode != LagMode::speed_varying || model.lag_sets.size() == 1)
                ? 0
                : [&] {
                      for (std::size_t i = 0; i < model.lag_sets.size(); ++i) {
                          if (model.lag_sets[i].cluster_id == regime.cluster_id) return i;
                      }
                      throw std::invalid_argument("no lag matrices for cluster " +
                                                  std::to_string(regime.cluster_id));
                  }();
        if (trace) {
            trace->regime_cluster.push_back(regime.cluster_id);
            trace->lag_set_index.push_back(si);
        }
        const RegimeLags& rl = model.lag_sets[si];
        for (int n = 0; n < N; ++n) {
            double zhat = 0.0;
            if (cl.total() > 0) {
                fill_row(row.data(), z, &eps, t, n, cl, &spec.ar_order_l0, model.weights, rl);
                zhat = row.dot(beta);
            }
            z(t, n) = zhat;
            double val = zhat;
            for (int jl = d - 1; jl >= 0; --jl) {
                val += lasts[static_cast<std::size_t>(n)][static_cast<std::size_t>(jl)];
                lasts[static_cast<std::size_t>(n)][static_cast<std::size_t>(jl)] = val;
            }
            out.values(h, n) = val;
        }
    }
    return out;
}

StarimaModel fit_arima(const SlotSeries& series, int p, int d, int q) {
    series.validate();
    if (p < 0 || d < 0 || q < 0) throw std::invalid_argument("negative model order");

    StationNetwork net;
    net.stations = {series.station_id};
    net.positions_feet = {0.0};

    FlowPanel panel;
    panel.stations = net.stations;
    panel.slot_seconds = series.slot_seconds;
    panel.start_slot = series.start_slot;
    panel.values.resize(static_cast<Eigen::Index>(series.size()), 1);
    for (std::size_t t = 0; t < series.size(); ++t) {
        panel.values(static_cast<Eigen::Index>(t), 0) = series.values[t];
    }

    StarimaSpec spec;
    spec.lambda = 0;
    spec.d = d;
    spec.q = q;
    spec.m_k.assign(static_cast<std::size_t>(q), 0);
    spec.lag_mode = LagMode::fixed_constant;
    spec.ar_order_l0 = {p};

    std::vector<RegimeLags> sets{RegimeLags{0, {}}};
    DayPartition trivial;
    trivial.start_slot = series.start_slot;
    trivial.slot_seconds = series.slot_seconds;
    trivial.periods.push_back(TimeRange{0, 0, static_cast<long>(series.size()) - 1, 0.0});
    return fit(panel, spec, build_weights(net, 0), sets, trivial);
}

FlowPanel arima_forecast(const StarimaModel& model, const SlotSeries& history, int horizon) {
    history.validate();
    FlowPanel panel;
    panel.stations = model.stations;
    panel.slot_seconds = history.slot_seconds;
    panel.start_slot = history.start_slot;
    panel.values.resize(static_cast<Eigen::Index>(history.size()), 1);
    for (std::size_t t = 0; t < history.size(); ++t) {
        panel.values(static_cast<Eigen::Index>(t), 0) = history.values[t];
    }
    DayPartition trivial;
    trivial.start_slot = history.start_slot;
    trivial.slot_seconds = history.slot_seconds;
    trivial.periods.push_back(
        TimeRange{0, 0, static_cast<long>(history.size()) + horizon, 0.0});
    return forecast(model, panel, horizon, trivial);
}

} // namespace starima
