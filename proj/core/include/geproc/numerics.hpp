#pragma once

#include <cmath>
#include <limits>

namespace geproc {

/// log(1 - e^x) for x < 0, switching expansions at -ln 2 to avoid
/// cancellation on both ends (Maechler's recipe).
inline double log1mexp(double x) {
    if (x >= 0.0) {
        return (x == 0.0) ? -std::numeric_limits<double>::infinity()
                          : std::numeric_limits<double>::quiet_NaN();
    }
    constexpr double kLn2 = 0.6931471805599453;
    if (x > -kLn2) {
        return std::log(-std::expm1(x));
    }
    return std::log1p(-std::exp(x));
}

/// log(1 - e^{-lambda t}), the log of the scaled exponential CDF at t > 0.
/// Everything in this library that raises (1 - e^{-lambda t}) to a large
/// power goes through this to stay in log space.
inline double log_expcdf(double t, double lambda) {
    return log1mexp(-lambda * t);
}

inline double sqr(double x) { return x * x; }

}  // namespace geproc
