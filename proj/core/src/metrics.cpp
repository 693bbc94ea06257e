#include "starima/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace starima {

double mse(const std::vector<double>& actual, const std::vector<double>& predicted) {
    if (actual.size() != predicted.size()) throw std::invalid_argument("series lengths differ");
    if (actual.empty()) throw std::invalid_argument("empty series");
    double acc = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const double e = actual[i] - predicted[i];
        acc += e * e;
    }
    return acc / static_cast<double>(actual.size());
}

std::pair<double, std::size_t> mape(const std::vector<double>& actual,
                                    const std::vector<double>& predicted) {
    if (actual.size() != predicted.size()) throw std::invalid_argument("series lengths differ");
    if (actual.empty()) throw std::invalid_argument("empty series");
    double acc = 0.0;
    std::size_t used = 0, skipped = 0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        if (actual[i] == 0.0) {
            ++skipped;
            continue;
        }
        acc += std::abs(actual[i] - predicted[i]) / std::abs(actual[i]);
        ++used;
    }
    if (used == 0) throw std::invalid_argument("all actuals are zero; MAPE undefined");
    return {acc / static_cast<double>(used), skipped};
}

} // namespace starima
