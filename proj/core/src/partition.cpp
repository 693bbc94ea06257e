#include "starima/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>

namespace starima {

namespace {

struct Run {
    int cluster = 0;
    long orig_start = 0;             // tie-break key, fixed at sweep start
    std::vector<std::size_t> slots;  // live owner set, mutated during a sweep
    bool alive = true;
};

std::vector<int> labels_from_clusters(const SpeedClusterSet& clusters, std::size_t n) {
    std::vector<int> labels(n, -1);
    for (std::size_t j = 0; j < clusters.clusters.size(); ++j) {
        for (std::size_t i : clusters.clusters[j].members) {
            if (i >= n || labels[i] != -1) {
                throw std::invalid_argument("cluster members do not tile the speed sequence");
            }
            labels[i] = static_cast<int>(j);
        }
    }
    for (int l : labels) {
        if (l == -1) throw std::invalid_argument("cluster members do not tile the speed sequence");
    }
    return labels;
}

std::vector<Run> runs_of(const std::vector<int>& labels) {
    std::vector<Run> runs;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (runs.empty() || runs.back().cluster != labels[i]) {
            Run r;
            r.cluster = labels[i];
            r.orig_start = static_cast<long>(i);
            runs.push_back(std::move(r));
        }
        runs.back().slots.push_back(i);
    }
    return runs;
}

bool all_long_enough(const std::vector<Run>& runs, int delta) {
    for (const Run& r : runs) {
        if (r.slots.size() < static_cast<std::size_t>(delta)) return false;
    }
    return true;
}

std::vector<long> signature_of(const std::vector<Run>& runs) {
    std::vector<long> sig;
    sig.reserve(runs.size() * 2);
    for (const Run& r : runs) {
        sig.push_back(r.cluster);
        sig.push_back(static_cast<long>(r.slots.size()));
    }
    return sig;
}

double live_mean(const Run& r, const std::vector<double>& speeds) {
    double acc = 0.0;
    for (std::size_t s : r.slots) acc += speeds[s];
    return acc / static_cast<double>(r.slots.size());
}

// pick from `candidates` the run whose live mean is closest to speeds[t];
// ties go to the earlier original start
std::size_t closest_run(const std::vector<Run>& runs, const std::vector<std::size_t>& candidates,
                        std::size_t t, const std::vector<double>& speeds) {
    std::size_t best = candidates.front();
    double best_d = std::numeric_limits<double>::infinity();
    long best_start = std::numeric_limits<long>::max();
    for (std::size_t c : candidates) {
        const double d = std::abs(speeds[t] - live_mean(runs[c], speeds));
        if (d < best_d || (d == best_d && runs[c].orig_start < best_start)) {
            best_d = d;
            best = c;
            best_start = runs[c].orig_start;
        }
    }
    return best;
}

// nearest alive runs strictly left and strictly right of t, by live members
std::vector<std::size_t> adjacent_candidates(const std::vector<Run>& runs, std::size_t t) {
    std::size_t left = runs.size(), right = runs.size();
    long left_d = std::numeric_limits<long>::max();
    long right_d = std::numeric_limits<long>::max();
    for (std::size_t j = 0; j < runs.size(); ++j) {
        if (!runs[j].alive) continue;
        for (std::size_t s : runs[j].slots) {
            const long d = static_cast<long>(t) - static_cast<long>(s);
            if (d > 0 && d < left_d) {
                left_d = d;
                left = j;
            } else if (d < 0 && -d < right_d) {
                right_d = -d;
                right = j;
            }
        }
    }
    std::vector<std::size_t> out;
    if (left < runs.size()) out.push_back(left);
    if (right < runs.size() && right != left) out.push_back(right);
    return out;
}

// one full reassignment sweep; returns the relabeled slot array
std::vector<int> sweep(std::vector<Run> runs, const std::vector<double>& speeds, int delta,
                       bool adjacent_only) {
    int max_cluster = 0;
    for (const Run& r : runs) max_cluster = std::max(max_cluster, r.cluster);

    for (int cluster = 0; cluster <= max_cluster; ++cluster) {
        for (std::size_t j = 0; j < runs.size(); ++j) {
            if (!runs[j].alive || runs[j].cluster != cluster) continue;
            if (runs[j].slots.size() >= static_cast<std::size_t>(delta)) continue;

            runs[j].alive = false;
            std::vector<std::size_t> doomed = runs[j].slots;
            std::sort(doomed.begin(), doomed.end());
            bool stranded = false;
            for (std::size_t t : doomed) {
                std::vector<std::size_t> candidates;
                if (adjacent_only) {
                    candidates = adjacent_candidates(runs, t);
                } else {
                    for (std::size_t c = 0; c < runs.size(); ++c) {
                        if (runs[c].alive && runs[c].cluster == cluster) candidates.push_back(c);
                    }
                    if (candidates.empty()) {
                        for (std::size_t c = 0; c < runs.size(); ++c) {
                            if (runs[c].alive) candidates.push_back(c);
                        }
                    }
                }
                if (candidates.empty()) {
                    stranded = true; // sole remaining run; keep it
                    break;
                }
                const std::size_t target = closest_run(runs, candidates, t, speeds);
                runs[target].slots.push_back(t);
                auto& owner = runs[j].slots;
                owner.erase(std::find(owner.begin(), owner.end(), t));
            }
            if (stranded) runs[j].alive = true;
        }
    }

    std::vector<int> labels(speeds.size(), -1);
    for (const Run& r : runs) {
        if (!r.alive && !r.slots.empty()) {
            throw std::logic_error("dead run still owns slots");
        }
        for (std::size_t s : r.slots) labels[s] = r.cluster;
    }
    return labels;
}

// fallback: fold the shortest short run into the temporal neighbor with the
// closer mean until every run is long enough; always terminates
std::vector<int> greedy_merge(std::vector<int> labels, const std::vector<double>& speeds,
                              int delta) {
    for (;;) {
        std::vector<Run> runs = runs_of(labels);
        if (runs.size() == 1 || all_long_enough(runs, delta)) return labels;
        std::size_t victim = runs.size();
        for (std::size_t j = 0; j < runs.size(); ++j) {
            if (runs[j].slots.size() < static_cast<std::size_t>(delta) &&
                (victim == runs.size() || runs[j].slots.size() < runs[victim].slots.size())) {
                victim = j;
            }
        }
        std::size_t target;
        if (victim == 0) {
            target = 1;
        } else if (victim + 1 == runs.size()) {
            target = victim - 1;
        } else {
            const double mu = live_mean(runs[victim], speeds);
            const double dl = std::abs(mu - live_mean(runs[victim - 1], speeds));
            const double dr = std::abs(mu - live_mean(runs[victim + 1], speeds));
            target = (dl <= dr) ? victim - 1 : victim + 1;
        }
        for (std::size_t s : runs[victim].slots) labels[s] = runs[target].cluster;
    }
}

} // namespace

void DayPartition::validate(std::size_t n_slots) const {
    long expect = 0;
    int prev_cluster = -1;
    for (const TimeRange& r : periods) {
        if (r.t_start != expect || r.t_end < r.t_start) {
            throw std::invalid_argument("ranges do not tile the day");
        }
        if (r.cluster_id == prev_cluster) {
            throw std::invalid_argument("adjacent ranges share a cluster");
        }
        prev_cluster = r.cluster_id;
        expect = r.t_end + 1;
    }
    if (expect != static_cast<long>(n_slots)) {
        throw std::invalid_argument("ranges do not cover the day");
    }
}

double range_distance(std::size_t t_j, const TimeRange& range, const std::vector<double>& speeds) {
    if (range.t_start > range.t_end) throw std::invalid_argument("empty range");
    if (t_j >= speeds.size() || range.t_end >= static_cast<long>(speeds.size())) {
        throw std::invalid_argument("slot outside the speed sequence");
    }
    double acc = 0.0;
    for (long s = range.t_start; s <= range.t_end; ++s) {
        acc += speeds[static_cast<std::size_t>(s)];
    }
    const double mu = acc / static_cast<double>(range.length());
    return std::abs(speeds[t_j] - mu);
}

const TimeRange& locate(const DayPartition& partition, long slot) {
    for (const TimeRange& r : partition.periods) {
        if (slot >= r.t_start && slot <= r.t_end) return r;
    }
    throw std::out_of_range("slot " + std::to_string(slot) + " outside the partitioned day");
}

DayPartition classify_periods(const SpeedClusterSet& clusters, const std::vector<double>& speeds,
                              int delta) {
    if (delta < 1) throw std::invalid_argument("delta must be positive");
    if (speeds.empty()) throw std::invalid_argument("empty speed sequence");
    if (static_cast<std::size_t>(delta) > speeds.size()) {
        throw std::invalid_argument("delta exceeds the day length");
    }

    std::vector<int> labels = labels_from_clusters(clusters, speeds.size());

    // Reassignment can re-create short runs, so iterate the sweep to a fixed
    // point. A repeated run structure means the same-cluster candidate rule
    // is cycling; restricting candidates to temporal neighbors then forces
    // runs to coalesce. The greedy fold is a last resort.
    std::set<std::vector<long>> seen;
    bool adjacent_only = false;
    const int cap = static_cast<int>(speeds.size()) + 16;
    for (int iter = 0; iter < cap; ++iter) {
        std::vector<Run> runs = runs_of(labels);
        if (all_long_enough(runs, delta)) break;
        if (!seen.insert(signature_of(runs)).second) adjacent_only = true;
        labels = sweep(std::move(runs), speeds, delta, adjacent_only);
    }
    labels = greedy_merge(std::move(labels), speeds, delta);

    DayPartition out;
    for (const Run& r : runs_of(labels)) {
        TimeRange range;
        range.cluster_id = r.cluster;
        range.t_start = static_cast<long>(r.slots.front());
        range.t_end = static_cast<long>(r.slots.back());
        range.mean_speed = live_mean(r, speeds);
        out.periods.push_back(range);
    }
    out.validate(speeds.size());
    return out;
}

} // namespace starima
