#pragma once

#include "starima/lags.hpp"
#include "starima/series.hpp"

#include <cstdint>
#include <vector>

namespace starima {

enum class BaseProfile { flat, two_peak };

struct SynthRegime {
    long slot_start = 0; // inclusive, on the flow slot grid
    long slot_end = 0;   // inclusive
    double mean_speed = 0.0;
    double speed_jitter_sd = 0.0;
};

struct SynthConfig {
    int n_stations = 4;
    double spacing_feet = 4000.0;
    std::vector<SynthRegime> regimes; // must tile [0, n_slots)
    long n_slots = 96;
    BaseProfile profile = BaseProfile::flat;
    double profile_amplitude = 100.0;
    double noise_sd = 1.0;
    double blend = 0.8;
    double tau_seconds = 30.0;
    std::uint64_t seed = 42;

    void validate() const;
};

// What the generator planted, recorded at construction so tests compare
// against the ground truth instead of re-deriving it.
struct GroundTruth {
    // planted_adjacent_lag[r] = delay applied between neighboring stations
    // while regime r is active
    std::vector<int> planted_adjacent_lag;
    // travel-time matrices per regime, one per spatial order (same layout
    // as build_lag_matrices)
    std::vector<std::vector<LagMatrix>> regime_lags;
    std::vector<SynthRegime> regimes;
};

struct SynthResult {
    StationNetwork network;
    FlowPanel flows;
    FlowPanel speeds;
    GroundTruth truth;
};

// Corridor with a planted upstream-to-downstream delay chain: station 0
// carries profile plus noise, station n blends the delayed station n-1
// signal with the profile. The delay switches with the active regime.
SynthResult generate(const SynthConfig& config);

} // namespace starima
