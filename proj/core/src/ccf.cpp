#include "starima/ccf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace starima {

namespace {

double mean_of(const std::vector<double>& x) {
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double population_sd(const std::vector<double>& x, double mean) {
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(x.size()));
}

} // namespace

double cross_correlation(const std::vector<double>& u, const std::vector<double>& y, int lag) {
    if (u.size() != y.size()) throw std::invalid_argument("series lengths differ");
    const std::size_t n = u.size();
    if (lag < 0) throw std::invalid_argument("lag must be non-negative");
    if (static_cast<std::size_t>(lag) >= n) {
        throw std::invalid_argument("lag " + std::to_string(lag) + " too large for length " +
                                    std::to_string(n));
    }
    const double mu = mean_of(u);
    const double my = mean_of(y);
    const double su = population_sd(u, mu);
    const double sy = population_sd(y, my);
    if (su == 0.0 || sy == 0.0) throw std::invalid_argument("constant series");

    const std::size_t k = static_cast<std::size_t>(lag);
    double acc = 0.0;
    for (std::size_t t = 0; t + k < n; ++t) {
        acc += (u[t] - mu) * (y[t + k] - my);
    }
    const double r = acc / (static_cast<double>(n - k) * su * sy);
    return std::clamp(r, -1.0, 1.0);
}

std::vector<double> ccf_profile(const std::vector<double>& u, const std::vector<double>& y,
                                int max_lag) {
    if (max_lag < 0) throw std::invalid_argument("max_lag must be non-negative");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(max_lag) + 1);
    for (int k = 0; k <= max_lag; ++k) out.push_back(cross_correlation(u, y, k));
    return out;
}

int best_lag(const std::vector<double>& profile) {
    if (profile.empty()) throw std::invalid_argument("empty profile");
    std::size_t best = 0;
    for (std::size_t k = 1; k < profile.size(); ++k) {
        if (profile[k] > profile[best]) best = k;
    }
    return static_cast<int>(best);
}

int lag_from_ccf(const std::vector<double>& u, const std::vector<double>& y, int max_lag) {
    if (max_lag < 1) throw std::invalid_argument("max_lag must be at least 1");
    const std::vector<double> profile = ccf_profile(u, y, max_lag);
    std::size_t best = 1;
    for (std::size_t k = 2; k < profile.size(); ++k) {
        if (profile[k] > profile[best]) best = k;
    }
    return static_cast<int>(best);
}

std::vector<double> pacf(const std::vector<double>& x, int max_lag) {
    if (max_lag < 1) throw std::invalid_argument("max_lag must be at least 1");
    const std::size_t n = x.size();
    if (n <= static_cast<std::size_t>(max_lag)) {
        throw std::invalid_argument("series too short for max_lag");
    }
    const double mu = mean_of(x);

    std::vector<double> gamma(static_cast<std::size_t>(max_lag) + 1, 0.0);
    for (std::size_t k = 0; k <= static_cast<std::size_t>(max_lag); ++k) {
        double acc = 0.0;
        for (std::size_t t = 0; t + k < n; ++t) acc += (x[t] - mu) * (x[t + k] - mu);
        gamma[k] = acc / static_cast<double>(n);
    }
    if (gamma[0] == 0.0) throw std::invalid_argument("constant series");

    // Durbin-Levinson; phi holds the AR(k) coefficients of the current order.
    std::vector<double> out(static_cast<std::size_t>(max_lag) + 1, 0.0);
    out[0] = 1.0;
    std::vector<double> phi(static_cast<std::size_t>(max_lag) + 1, 0.0);
    std::vector<double> prev(phi);
    double v = gamma[0];
    for (std::size_t k = 1; k <= static_cast<std::size_t>(max_lag); ++k) {
        double acc = gamma[k];
        for (std::size_t j = 1; j < k; ++j) acc -= prev[j] * gamma[k - j];
        const double a = acc / v;
        phi[k] = a;
        for (std::size_t j = 1; j < k; ++j) phi[j] = prev[j] - a * prev[k - j];
        v *= (1.0 - a * a);
        out[k] = a;
        prev = phi;
        if (v <= 0.0) {
            // perfectly predictable from here on; remaining partials are zero
            for (std::size_t r = k + 1; r <= static_cast<std::size_t>(max_lag); ++r) out[r] = 0.0;
            break;
        }
    }
    return out;
}

int select_ar_order(const std::vector<double>& x, int max_lag) {
    const std::vector<double> p = pacf(x, max_lag);
    const double band = 1.96 / std::sqrt(static_cast<double>(x.size()));
    int order = 1;
    for (int k = 1; k <= max_lag; ++k) {
        if (std::abs(p[static_cast<std::size_t>(k)]) > band) order = k;
    }
    return order;
}

} // namespace starima
