#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace starima {

struct IsodataParams {
    int k_max = 3;
    int n_min = 5;
    double sigma2_max = 15.0;
    double d_min = 30.0;
    int max_iter = 10;
    int k_init = 3;
    // Initialization is quantile-based, so the seed only matters for
    // degenerate ties; kept for config compatibility.
    std::uint64_t seed = 0;

    void validate() const;
};

struct SpeedClusterSet {
    struct Cluster {
        double center = 0.0;
        std::vector<std::size_t> members; // slot indices, ascending
    };
    std::vector<Cluster> clusters; // sorted by center, ascending

    std::size_t size() const { return clusters.size(); }
};

// Nearest center by absolute difference; ties break toward the lower index.
std::size_t assign_nearest(double value, const SpeedClusterSet& clusters);

// One-dimensional ISODATA: assign / discard-small / recenter / split
// high-variance / merge-close, iterated to a fixed point or max_iter.
SpeedClusterSet isodata_1d(const std::vector<double>& speeds, const IsodataParams& params);

} // namespace starima
