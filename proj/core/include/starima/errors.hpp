#ifndef STARIMA_ERRORS_HPP
#define STARIMA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace starima {

// File, schema, and shape problems in input data.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Estimation failures: singular designs, degenerate regressions.
struct EstimationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace starima

#endif
