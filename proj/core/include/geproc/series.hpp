#pragma once

#include <cstddef>
#include <vector>

namespace geproc {

/// Affine preprocessing applied to raw observations before fitting:
/// x -> (x - shift) / divisor. Fitted scales refer to the transformed data,
/// so the record travels with the series.
struct Transform {
    double shift = 0.0;
    double divisor = 1.0;

    double apply(double x) const { return (x - shift) / divisor; }
};

/// Ordered observations plus the transform that produced them.
struct Series {
    std::vector<double> values;
    Transform transform{};

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }
};

}  // namespace geproc
