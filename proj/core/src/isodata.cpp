#include "starima/isodata.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace starima {

namespace {

struct Cluster {
    double center = 0.0;
    std::vector<std::size_t> members;
};

double member_mean(const Cluster& c, const std::vector<double>& x) {
    double acc = 0.0;
    for (std::size_t i : c.members) acc += x[i];
    return acc / static_cast<double>(c.members.size());
}

double member_variance(const Cluster& c, const std::vector<double>& x) {
    const double mu = member_mean(c, x);
    double acc = 0.0;
    for (std::size_t i : c.members) acc += (x[i] - mu) * (x[i] - mu);
    return acc / static_cast<double>(c.members.size());
}

std::size_t nearest_center(double v, const std::vector<Cluster>& cs) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < cs.size(); ++j) {
        const double d = std::abs(v - cs[j].center);
        if (d < best_d) {
            best_d = d;
            best = j;
        }
    }
    return best;
}

// (a) fresh assignment of every point to its nearest center
void assign_all(std::vector<Cluster>& cs, const std::vector<double>& x) {
    for (Cluster& c : cs) c.members.clear();
    for (std::size_t i = 0; i < x.size(); ++i) {
        cs[nearest_center(x[i], cs)].members.push_back(i);
    }
}

// (b) drop clusters below n_min, handing their points to the survivors;
// if nothing survives, the largest cluster absorbs everything
bool discard_small(std::vector<Cluster>& cs, const std::vector<double>& x, int n_min) {
    std::vector<Cluster> survivors;
    std::vector<std::size_t> orphaned;
    for (Cluster& c : cs) {
        if (c.members.size() >= static_cast<std::size_t>(n_min)) {
            survivors.push_back(std::move(c));
        } else {
            orphaned.insert(orphaned.end(), c.members.begin(), c.members.end());
        }
    }
    if (survivors.empty()) {
        std::size_t keep = 0;
        for (std::size_t j = 1; j < cs.size(); ++j) {
            if (cs[j].members.size() > cs[keep].members.size()) keep = j;
        }
        Cluster all;
        all.center = cs[keep].center;
        all.members.resize(x.size());
        std::iota(all.members.begin(), all.members.end(), std::size_t{0});
        const bool changed = cs.size() > 1;
        cs.clear();
        cs.push_back(std::move(all));
        return changed;
    }
    const bool changed = !orphaned.empty() || survivors.size() != cs.size();
    for (std::size_t i : orphaned) {
        survivors[nearest_center(x[i], survivors)].members.push_back(i);
    }
    for (Cluster& c : survivors) std::sort(c.members.begin(), c.members.end());
    cs = std::move(survivors);
    return changed;
}

} // namespace

void IsodataParams::validate() const {
    if (k_init < 1 || k_max < 1 || k_init > k_max) {
        throw std::invalid_argument("require 1 <= k_init <= k_max");
    }
    if (n_min < 1) throw std::invalid_argument("n_min must be positive");
    if (!(sigma2_max > 0.0)) throw std::invalid_argument("sigma2_max must be positive");
    if (!(d_min > 0.0)) throw std::invalid_argument("d_min must be positive");
    if (max_iter < 1) throw std::invalid_argument("max_iter must be positive");
}

std::size_t assign_nearest(double value, const SpeedClusterSet& clusters) {
    if (clusters.clusters.empty()) throw std::invalid_argument("empty cluster set");
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < clusters.clusters.size(); ++j) {
        const double d = std::abs(value - clusters.clusters[j].center);
        if (d < best_d) {
            best_d = d;
            best = j;
        }
    }
    return best;
}

SpeedClusterSet isodata_1d(const std::vector<double>& speeds, const IsodataParams& params) {
    params.validate();
    if (speeds.size() < static_cast<std::size_t>(params.n_min)) {
        throw std::invalid_argument("fewer points than n_min");
    }
    for (double v : speeds) {
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite speed");
    }

    // centers seeded at evenly spaced quantiles of the data
    std::vector<double> sorted(speeds);
    std::sort(sorted.begin(), sorted.end());
    std::vector<Cluster> cs(static_cast<std::size_t>(params.k_init));
    for (std::size_t j = 0; j < cs.size(); ++j) {
        const double f = (static_cast<double>(j) + 0.5) / static_cast<double>(params.k_init);
        const auto idx = std::min(sorted.size() - 1,
                                  static_cast<std::size_t>(f * static_cast<double>(sorted.size())));
        cs[j].center = sorted[idx];
    }

    std::vector<std::size_t> prev_labels;
    for (int iter = 0; iter < params.max_iter; ++iter) {
        bool structural = false;

        assign_all(cs, speeds);
        structural |= discard_small(cs, speeds, params.n_min);
        for (Cluster& c : cs) c.center = member_mean(c, speeds);

        // (d) split high-variance clusters while room remains
        for (std::size_t j = 0; j < cs.size() && cs.size() < static_cast<std::size_t>(params.k_max);
             ++j) {
            if (member_variance(cs[j], speeds) <= params.sigma2_max) continue;
            const double mu = cs[j].center;
            const double sd = std::sqrt(member_variance(cs[j], speeds));
            Cluster lo, hi;
            lo.center = mu - sd;
            hi.center = mu + sd;
            for (std::size_t i : cs[j].members) {
                (speeds[i] < mu ? lo : hi).members.push_back(i);
            }
            cs[j] = std::move(lo);
            cs.insert(cs.begin() + static_cast<std::ptrdiff_t>(j) + 1, std::move(hi));
            ++j; // skip the freshly inserted sibling
            structural = true;
        }

        // (e) merge the single closest pair when it is too close
        if (cs.size() > 1) {
            std::size_t a = 0, b = 1;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < cs.size(); ++i) {
                for (std::size_t j = i + 1; j < cs.size(); ++j) {
                    const double d = std::abs(cs[i].center - cs[j].center);
                    if (d < best) {
                        best = d;
                        a = i;
                        b = j;
                    }
                }
            }
            if (best < params.d_min) {
                const double na = static_cast<double>(cs[a].members.size());
                const double nb = static_cast<double>(cs[b].members.size());
                if (na + nb > 0.0) {
                    cs[a].center = (na * cs[a].center + nb * cs[b].center) / (na + nb);
                }
                cs[a].members.insert(cs[a].members.end(), cs[b].members.begin(),
                                     cs[b].members.end());
                std::sort(cs[a].members.begin(), cs[a].members.end());
                cs.erase(cs.begin() + static_cast<std::ptrdiff_t>(b));
                structural = true;
            }
        }

        std::vector<std::size_t> labels(speeds.size());
        for (std::size_t j = 0; j < cs.size(); ++j) {
            for (std::size_t i : cs[j].members) labels[i] = j;
        }
        if (!structural && labels == prev_labels) break;
        prev_labels = std::move(labels);
    }

    // final pass pins the return invariants regardless of where the loop stopped
    assign_all(cs, speeds);
    discard_small(cs, speeds, params.n_min);
    for (Cluster& c : cs) c.center = member_mean(c, speeds);

    std::sort(cs.begin(), cs.end(),
              [](const Cluster& x, const Cluster& y) { return x.center < y.center; });

    SpeedClusterSet out;
    out.clusters.reserve(cs.size());
    for (Cluster& c : cs) {
        std::sort(c.members.begin(), c.members.end());
        out.clusters.push_back({c.center, std::move(c.members)});
    }
    return out;
}

} // namespace starima
