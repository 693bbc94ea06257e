#pragma once

#include "starima/partition.hpp"
#include "starima/series.hpp"

#include <vector>

namespace starima {

// Integer slot delays between station pairs at one spatial order, derived
// from one regime's mean speed. entries(m, n) is the delay from upstream m
// to downstream n; kUndefined marks pairs without an order-l relation.
struct LagMatrix {
    static constexpr int kUndefined = -1;

    int order = 0;
    int regime_cluster_id = 0;
    std::vector<std::vector<int>> entries; // [from][to]

    int at(std::size_t from, std::size_t to) const { return entries[from][to]; }
    bool defined(std::size_t from, std::size_t to) const {
        return entries[from][to] != kUndefined;
    }
};

// Slots needed to traverse distance_feet at speed: round-half-up of
// (distance/speed)/tau, never below 1.
int travel_lag(double distance_feet, double speed, double tau_seconds);

// One LagMatrix per spatial order l = 1..lambda for the given regime.
std::vector<LagMatrix> build_lag_matrices(const StationNetwork& network, const TimeRange& regime,
                                          int lambda, double tau_seconds);

} // namespace starima
