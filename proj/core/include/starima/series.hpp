#ifndef STARIMA_SERIES_HPP
#define STARIMA_SERIES_HPP

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace starima {

enum class SeriesKind { flow, speed };

// Fixed-width time-slot readings from one detector station.
struct SlotSeries {
    std::string station_id;
    SeriesKind kind{SeriesKind::flow};
    double slot_seconds{30.0};
    long start_slot{0};
    std::vector<double> values;

    std::size_t size() const { return values.size(); }

    // Throws std::invalid_argument on non-finite values, negative speeds,
    // non-positive slot width, or an empty series.
    void validate() const;
};

// Detector stations ordered along the travel direction (upstream first),
// with cumulative positions in feet from the first station.
struct StationNetwork {
    std::vector<std::string> stations;
    std::vector<double> positions_feet;

    std::size_t size() const { return stations.size(); }
    std::size_t index_of(const std::string& station_id) const;
    double distance_feet(std::size_t m, std::size_t n) const;

    // The station `order` hops upstream of station n, if it exists.
    std::optional<std::size_t> upstream_neighbor(std::size_t n, int order) const;

    void validate() const;
};

// One value column per station, one row per time slot; station order
// matches the network's travel order.
struct FlowPanel {
    std::vector<std::string> stations;
    double slot_seconds{30.0};
    long start_slot{0};
    Eigen::MatrixXd values; // rows = slots, cols = stations

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }

    SlotSeries column(std::size_t n, SeriesKind kind) const;
    void validate() const;
};

FlowPanel make_panel(const StationNetwork& network,
                     const std::vector<SlotSeries>& series);

// Mean of every window_len consecutive values; a trailing partial window is
// dropped so each output slot is an equal-width mean. Slot width scales by
// window_len. window_len = 1 is the identity.
SlotSeries smooth(const SlotSeries& series, int window_len);

std::vector<double> smooth_values(const std::vector<double>& values, int window_len);

// d-fold first differences. Returns the differenced sequence and the d
// retained leading values (one per differencing level) needed to invert.
std::pair<std::vector<double>, std::vector<double>>
difference(const std::vector<double>& values, int diff_order);

// Exact left inverse of difference.
std::vector<double> undifference(const std::vector<double>& diffs,
                                 const std::vector<double>& initials,
                                 int diff_order);

} // namespace starima

#endif
