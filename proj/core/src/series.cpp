#include "starima/series.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace starima {

void SlotSeries::validate() const {
    if (values.empty()) {
        throw std::invalid_argument("series '" + station_id + "': empty");
    }
    if (!(slot_seconds > 0.0)) {
        throw std::invalid_argument("series '" + station_id + "': slot_seconds must be > 0");
    }
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("series '" + station_id + "': non-finite value");
        }
        if (kind == SeriesKind::speed && v < 0.0) {
            throw std::invalid_argument("series '" + station_id + "': negative speed");
        }
    }
}

std::size_t StationNetwork::index_of(const std::string& station_id) const {
    auto it = std::find(stations.begin(), stations.end(), station_id);
    if (it == stations.end()) {
        throw std::invalid_argument("unknown station '" + station_id + "'");
    }
    return static_cast<std::size_t>(it - stations.begin());
}

double StationNetwork::distance_feet(std::size_t m, std::size_t n) const {
    if (m >= size() || n >= size()) {
        throw std::invalid_argument("station index out of range");
    }
    return std::abs(positions_feet[n] - positions_feet[m]);
}

std::optional<std::size_t> StationNetwork::upstream_neighbor(std::size_t n, int order) const {
    if (n >= size() || order < 1) return std::nullopt;
    if (static_cast<std::size_t>(order) > n) return std::nullopt;
    return n - static_cast<std::size_t>(order);
}

void StationNetwork::validate() const {
    if (stations.empty()) {
        throw std::invalid_argument("network: no stations");
    }
    if (stations.size() != positions_feet.size()) {
        throw std::invalid_argument("network: stations/positions size mismatch");
    }
    for (std::size_t i = 1; i < positions_feet.size(); ++i) {
        if (!(positions_feet[i] > positions_feet[i - 1])) {
            throw std::invalid_argument("network: positions must be strictly increasing");
        }
    }
    for (std::size_t i = 0; i < stations.size(); ++i) {
        for (std::size_t j = i + 1; j < stations.size(); ++j) {
            if (stations[i] == stations[j]) {
                throw std::invalid_argument("network: duplicate station " + stations[i]);
            }
        }
    }
}

SlotSeries FlowPanel::column(std::size_t n, SeriesKind kind) const {
    if (n >= stations.size()) {
        throw std::invalid_argument("panel: station index out of range");
    }
    SlotSeries s;
    s.station_id = stations[n];
    s.kind = kind;
    s.slot_seconds = slot_seconds;
    s.start_slot = start_slot;
    s.values.assign(values.col(static_cast<Eigen::Index>(n)).begin(),
                    values.col(static_cast<Eigen::Index>(n)).end());
    return s;
}

void FlowPanel::validate() const {
    if (stations.empty() || values.cols() != static_cast<Eigen::Index>(stations.size())) {
        throw std::invalid_argument("panel: column/station mismatch");
    }
    if (values.rows() == 0) {
        throw std::invalid_argument("panel: no rows");
    }
    if (!(slot_seconds > 0.0)) {
        throw std::invalid_argument("panel: slot_seconds must be > 0");
    }
    if (!values.allFinite()) {
        throw std::invalid_argument("panel: non-finite value");
    }
}

FlowPanel make_panel(const StationNetwork& network, const std::vector<SlotSeries>& series) {
    network.validate();
    if (series.size() != network.size()) {
        throw std::invalid_argument("make_panel: one series per station required");
    }
    FlowPanel panel;
    panel.stations = network.stations;
    const std::size_t rows = series.front().size();
    panel.slot_seconds = series.front().slot_seconds;
    panel.start_slot = series.front().start_slot;
    panel.values.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(network.size()));
    for (const SlotSeries& s : series) {
        const std::size_t idx = network.index_of(s.station_id);
        if (s.size() != rows || s.slot_seconds != panel.slot_seconds ||
            s.start_slot != panel.start_slot) {
            throw std::invalid_argument("make_panel: series grids differ");
        }
        panel.values.col(static_cast<Eigen::Index>(idx)) =
            Eigen::Map<const Eigen::VectorXd>(s.values.data(), static_cast<Eigen::Index>(rows));
    }
    return panel;
}

std::vector<double> smooth_values(const std::vector<double>& values, int window_len) {
    if (window_len < 1) {
        throw std::invalid_argument("smooth: window length must be >= 1");
    }
    const std::size_t x = static_cast<std::size_t>(window_len);
    const std::size_t out_len = values.size() / x;
    std::vector<double> out;
    out.reserve(out_len);
    for (std::size_t j = 0; j < out_len; ++j) {
        const auto first = values.begin() + static_cast<std::ptrdiff_t>(j * x);
        out.push_back(std::accumulate(first, first + static_cast<std::ptrdiff_t>(x), 0.0) /
                      static_cast<double>(x));
    }
    return out;
}

SlotSeries smooth(const SlotSeries& series, int window_len) {
    SlotSeries out = series;
    out.values = smooth_values(series.values, window_len);
    out.slot_seconds = series.slot_seconds * window_len;
    out.start_slot = series.start_slot / window_len;
    return out;
}

std::pair<std::vector<double>, std::vector<double>>
difference(const std::vector<double>& values, int diff_order) {
    if (diff_order < 0) {
        throw std::invalid_argument("difference: order must be >= 0");
    }
    if (values.size() < static_cast<std::size_t>(diff_order) + 1) {
        throw std::invalid_argument("difference: series shorter than order + 1");
    }
    std::vector<double> current = values;
    std::vector<double> initials;
    initials.reserve(static_cast<std::size_t>(diff_order));
    for (int level = 0; level < diff_order; ++level) {
        initials.push_back(current.front());
        std::vector<double> next(current.size() - 1);
        for (std::size_t i = 1; i < current.size(); ++i) {
            next[i - 1] = current[i] - current[i - 1];
        }
        current = std::move(next);
    }
    return {std::move(current), std::move(initials)};
}

std::vector<double> undifference(const std::vector<double>& diffs,
                                 const std::vector<double>& initials,
                                 int diff_order) {
    if (diff_order < 0) {
        throw std::invalid_argument("undifference: order must be >= 0");
    }
    if (initials.size() != static_cast<std::size_t>(diff_order)) {
        throw std::invalid_argument("undifference: expected exactly one initial value per level");
    }
    std::vector<double> current = diffs;
    for (int level = diff_order - 1; level >= 0; --level) {
        std::vector<double> next(current.size() + 1);
        next[0] = initials[static_cast<std::size_t>(level)];
        for (std::size_t i = 0; i < current.size(); ++i) {
            next[i + 1] = next[i] + current[i];
        }
        current = std::move(next);
    }
    return current;
}

} // namespace starima
