#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "geproc/geprocess.hpp"
#include "geproc/numerics.hpp"

namespace geproc::detail {

// Region test on pre-weighted log terms a = w0*log(z_x), b = w1*log(z_y);
// the tie band is relative with an absolute floor of one log unit.
inline PairRegion region_of(double a, double b, double tie_tol) {
    double unit = std::max({1.0, std::abs(a), std::abs(b)});
    if (std::abs(a - b) <= tie_tol * unit) return PairRegion::C;
    return a < b ? PairRegion::S1 : PairRegion::S2;
}

// Lag-1 pair log density given precomputed lz = log(1 - e^{-lambda x}).
inline double pair_log_density_at(PairRegion r, double x, double y, double lzx,
                                  double lzy, double a0, double a1,
                                  double lam) {
    switch (r) {
        case PairRegion::S1:
            return std::log(a0) + std::log(a0 + a1) + 2.0 * std::log(lam) -
                   lam * (x + y) + (a0 + a1 - 1.0) * lzx + (a0 - 1.0) * lzy;
        case PairRegion::S2:
            return std::log(a1) + std::log(a0 + a1) + 2.0 * std::log(lam) -
                   lam * (x + y) + (a1 - 1.0) * lzx + (a0 + a1 - 1.0) * lzy;
        case PairRegion::C:
        default: {
            double d = a0 * a0 + a1 * a1 + a0 * a1;
            return std::log(a1) + std::log(lam) + ((d - a0) / a1) * lzx +
                   log1mexp((a0 / a1) * lzx);
        }
    }
}

inline double marginal_log_pdf_at(double x, double lz, double alpha_sum,
                                  double lam) {
    return std::log(alpha_sum) + std::log(lam) - lam * x +
           (alpha_sum - 1.0) * lz;
}

// Maximizes f on [lo, hi] by golden section down to a relative interval
// width; assumes a single interior maximum on the bracket.
template <typename F>
double golden_max(F&& f, double lo, double hi, double rel_tol,
                  std::size_t* evals) {
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    if (evals) *evals += 2;
    while (hi - lo > rel_tol * (std::abs(lo) + std::abs(hi))) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = f(x1);
        }
        if (evals) *evals += 1;
    }
    return 0.5 * (lo + hi);
}

}  // namespace geproc::detail
