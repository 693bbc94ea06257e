#include "starima/synth.hpp"

#include "starima/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace starima {

namespace {

constexpr double kPi = 3.14159265358979323846;

double profile_at(const SynthConfig& cfg, long t) {
    switch (cfg.profile) {
    case BaseProfile::flat:
        return cfg.profile_amplitude;
    case BaseProfile::two_peak: {
        // two rush peaks per day, bounded away from zero
        const double s = std::sin(2.0 * kPi * static_cast<double>(t) /
                                  static_cast<double>(cfg.n_slots));
        return cfg.profile_amplitude * (0.25 + 0.75 * s * s);
    }
    }
    throw std::invalid_argument("unknown base profile");
}

std::size_t regime_at(const SynthConfig& cfg, long t) {
    const long clamped = std::max(t, cfg.regimes.front().slot_start);
    for (std::size_t r = 0; r < cfg.regimes.size(); ++r) {
        if (clamped >= cfg.regimes[r].slot_start && clamped <= cfg.regimes[r].slot_end) return r;
    }
    throw std::invalid_argument("slot " + std::to_string(t) + " not covered by any regime");
}

} // namespace

void SynthConfig::validate() const {
    if (n_stations < 1) throw std::invalid_argument("need at least one station");
    if (!(spacing_feet > 0.0)) throw std::invalid_argument("spacing must be positive");
    if (n_slots < 1) throw std::invalid_argument("need at least one slot");
    if (regimes.empty()) throw std::invalid_argument("need at least one regime");
    long expect = 0;
    for (const SynthRegime& r : regimes) {
        if (r.slot_start != expect || r.slot_end < r.slot_start) {
            throw std::invalid_argument("regimes must tile the day in order");
        }
        if (!(r.mean_speed > 0.0)) throw std::invalid_argument("regime speed must be positive");
        if (r.speed_jitter_sd < 0.0) throw std::invalid_argument("negative speed jitter");
        expect = r.slot_end + 1;
    }
    if (expect != n_slots) throw std::invalid_argument("regimes must cover exactly the day");
    if (blend < 0.0 || blend > 1.0) throw std::invalid_argument("blend must lie in [0,1]");
    if (noise_sd < 0.0) throw std::invalid_argument("negative noise sd");
    if (!(tau_seconds > 0.0)) throw std::invalid_argument("tau must be positive");
    if (profile_amplitude < 0.0) throw std::invalid_argument("negative profile amplitude");
}

SynthResult generate(const SynthConfig& config) {
    config.validate();

    SynthResult out;
    for (int n = 0; n < config.n_stations; ++n) {
        out.network.stations.push_back("s" + std::to_string(n + 1));
        out.network.positions_feet.push_back(static_cast<double>(n) * config.spacing_feet);
    }
    out.network.validate();

    out.truth.regimes = config.regimes;
    int max_lag = 1;
    for (const SynthRegime& r : config.regimes) {
        const int lag = travel_lag(config.spacing_feet, r.mean_speed, config.tau_seconds);
        out.truth.planted_adjacent_lag.push_back(lag);
        max_lag = std::max(max_lag, lag);
    }
    for (std::size_t r = 0; r < config.regimes.size(); ++r) {
        TimeRange range;
        range.cluster_id = static_cast<int>(r);
        range.t_start = config.regimes[r].slot_start;
        range.t_end = config.regimes[r].slot_end;
        range.mean_speed = config.regimes[r].mean_speed;
        out.truth.regime_lags.push_back(build_lag_matrices(out.network, range,
                                                           config.n_stations - 1,
                                                           config.tau_seconds));
    }

    // Extended lead-in so every delayed lookup lands on generated data.
    const long margin = static_cast<long>(config.n_stations) * static_cast<long>(max_lag);
    const std::size_t ext_len = static_cast<std::size_t>(margin + config.n_slots);
    GaussianSampler noise(config.seed);

    std::vector<std::vector<double>> flows(static_cast<std::size_t>(config.n_stations),
                                           std::vector<double>(ext_len, 0.0));
    for (int n = 0; n < config.n_stations; ++n) {
        for (long t = -margin; t < config.n_slots; ++t) {
            const std::size_t idx = static_cast<std::size_t>(t + margin);
            const double base = profile_at(config, t);
            double value;
            if (n == 0) {
                value = base + noise.next(0.0, config.noise_sd);
            } else {
                const std::size_t r = regime_at(config, t);
                const long lag = out.truth.planted_adjacent_lag[r];
                const long src = std::max(t - lag, -margin);
                const double upstream =
                    flows[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(src + margin)];
                value = config.blend * upstream + (1.0 - config.blend) * base +
                        noise.next(0.0, config.noise_sd);
            }
            flows[static_cast<std::size_t>(n)][idx] = std::max(value, 0.0);
        }
    }

    out.flows.stations = out.network.stations;
    out.flows.slot_seconds = config.tau_seconds;
    out.flows.start_slot = 0;
    out.flows.values.resize(config.n_slots, config.n_stations);
    for (int n = 0; n < config.n_stations; ++n) {
        for (long t = 0; t < config.n_slots; ++t) {
            out.flows.values(t, n) = flows[static_cast<std::size_t>(n)]
                                          [static_cast<std::size_t>(t + margin)];
        }
    }

    out.speeds.stations = out.network.stations;
    out.speeds.slot_seconds = config.tau_seconds;
    out.speeds.start_slot = 0;
    out.speeds.values.resize(config.n_slots, config.n_stations);
    for (int n = 0; n < config.n_stations; ++n) {
        for (long t = 0; t < config.n_slots; ++t) {
            const SynthRegime& r = config.regimes[regime_at(config, t)];
            const double v = r.mean_speed + noise.next(0.0, r.speed_jitter_sd);
            out.speeds.values(t, n) = std::max(v, 0.0);
        }
    }

    out.flows.validate();
    out.speeds.validate();
    return out;
}

} // namespace starima
