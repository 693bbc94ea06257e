#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace starima {

struct EvalReport {
    std::string station_id;
    std::string range_label;
    double mse = 0.0;
    double mape = 0.0; // fraction, not percent
    std::size_t n_points = 0;
    std::size_t n_skipped_zero_actuals = 0;
};

double mse(const std::vector<double>& actual, const std::vector<double>& predicted);

// Mean absolute percentage error over slots with nonzero actuals, plus the
// count of skipped zero-actual slots.
std::pair<double, std::size_t> mape(const std::vector<double>& actual,
                                    const std::vector<double>& predicted);

} // namespace starima
