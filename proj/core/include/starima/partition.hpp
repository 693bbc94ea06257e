#pragma once

#include "starima/isodata.hpp"

#include <cstddef>
#include <vector>

namespace starima {

// Contiguous block of slots assigned to one speed cluster. Bounds are
// inclusive and index into the classified speed sequence.
struct TimeRange {
    int cluster_id = 0;
    long t_start = 0;
    long t_end = 0;
    double mean_speed = 0.0;

    long length() const { return t_end - t_start + 1; }
};

struct DayPartition {
    std::vector<TimeRange> periods; // time order, tiling the day
    double slot_seconds = 0.0;      // grid of the classified sequence; 0 when unset
    long start_slot = 0;            // external offset of index 0

    void validate(std::size_t n_slots) const;
};

// Absolute difference between the speed at t_j and the range's mean speed,
// recomputed from the supplied sequence.
double range_distance(std::size_t t_j, const TimeRange& range, const std::vector<double>& speeds);

// The unique range containing the slot index.
const TimeRange& locate(const DayPartition& partition, long slot);

// Convert per-slot cluster assignments into contiguous time ranges of
// length >= delta, dissolving short runs and reassigning their slots to
// the nearest surviving range by mean-speed distance.
DayPartition classify_periods(const SpeedClusterSet& clusters, const std::vector<double>& speeds,
                              int delta);

} // namespace starima
