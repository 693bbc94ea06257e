#include "starima/lags.hpp"

#include <cmath>
#include <stdexcept>

namespace starima {

int travel_lag(double distance_feet, double speed, double tau_seconds) {
    if (!(distance_feet > 0.0)) throw std::invalid_argument("distance must be positive");
    if (!(speed > 0.0)) throw std::invalid_argument("speed must be positive");
    if (!(tau_seconds > 0.0)) throw std::invalid_argument("tau must be positive");
    const double slots = (distance_feet / speed) / tau_seconds;
    const int lag = static_cast<int>(std::floor(slots + 0.5)); // half rounds up
    return lag < 1 ? 1 : lag;
}

std::vector<LagMatrix> build_lag_matrices(const StationNetwork& network, const TimeRange& regime,
                                          int lambda, double tau_seconds) {
    const std::size_t n = network.size();
    if (lambda < 0 || static_cast<std::size_t>(lambda) >= n) {
        throw std::invalid_argument("spatial order bound must be below the station count");
    }
    if (!(regime.mean_speed > 0.0)) {
        throw std::invalid_argument("regime mean speed must be positive");
    }

    std::vector<LagMatrix> out;
    out.reserve(static_cast<std::size_t>(lambda));
    for (int l = 1; l <= lambda; ++l) {
        LagMatrix lm;
        lm.order = l;
        lm.regime_cluster_id = regime.cluster_id;
        lm.entries.assign(n, std::vector<int>(n, LagMatrix::kUndefined));
        for (std::size_t to = 0; to < n; ++to) {
            const auto from = network.upstream_neighbor(to, l);
            if (!from) continue;
            lm.entries[*from][to] =
                travel_lag(network.distance_feet(*from, to), regime.mean_speed, tau_seconds);
        }
        out.push_back(std::move(lm));
    }
    return out;
}

} // namespace starima
