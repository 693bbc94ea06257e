#pragma once

#include <cstddef>
#include <vector>

namespace starima {

// Lagged cross-correlation of u against y at non-negative lag k:
// pairs (u_t, y_{t+k}) normalised by the full-series means and
// population standard deviations, clamped to [-1, 1].
double cross_correlation(const std::vector<double>& u, const std::vector<double>& y, int lag);

// cross_correlation evaluated at lags 0..max_lag inclusive.
std::vector<double> ccf_profile(const std::vector<double>& u, const std::vector<double>& y,
                                int max_lag);

// Lag of the largest profile value; ties resolve to the smallest lag.
int best_lag(const std::vector<double>& profile);

// best_lag over a freshly computed profile, excluding lag 0.
int lag_from_ccf(const std::vector<double>& u, const std::vector<double>& y, int max_lag);

// Partial autocorrelations at lags 1..max_lag via the Durbin-Levinson
// recursion on sample autocovariances. Index 0 is fixed at 1.
std::vector<double> pacf(const std::vector<double>& x, int max_lag);

// Largest lag whose partial autocorrelation exceeds the 5% white-noise
// band 1.96/sqrt(n); at least 1.
int select_ar_order(const std::vector<double>& x, int max_lag);

} // namespace starima
