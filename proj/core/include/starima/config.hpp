#pragma once

#include "starima/isodata.hpp"
#include "starima/synth.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace starima {

// Everything the pipeline stages need, with defaults chosen for the
// 30-second corridor setup. Loaded from a flat key=value file; keys are
// namespaced per stage (e.g. isodata.k_max=3).
struct PipelineConfig {
    std::string data_csv = "data.csv";
    std::string network_csv = "network.csv";
    std::string out_dir = ".";
    std::uint64_t seed = 42;

    int x_speed = 30; // smoothing window for speed series
    int x_flow = 4;   // smoothing window for flow series

    IsodataParams isodata;
    bool cluster_per_station = false; // default pools speeds across stations

    int delta = 8; // minimum time-range length, in smoothed speed slots

    int ccf_max_lag = 12;

    int lambda = 1;
    int d = 1;
    int q = 1;
    std::vector<int> m_k;  // empty means every MA lag uses spatial order lambda
    std::string lag_mode = "speed_varying";
    int pacf_max_lag = 10;
    bool per_range_refit = true;
    int horizon = 30;

    SynthConfig synth;

    std::vector<int> resolved_m_k() const;
    std::string resolve(const std::string& relative_path) const;
};

PipelineConfig default_config();

// Parse a key=value config file ('#' starts a comment). Unknown keys and
// malformed values are errors.
PipelineConfig load_config(const std::string& path);

// Apply a single key=value override on top of an existing config.
void apply_config_entry(PipelineConfig& cfg, const std::string& key, const std::string& value);

void save_config(const std::string& path, const PipelineConfig& cfg);

} // namespace starima
