#include "geproc/gedist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "detail.hpp"
#include "geproc/numerics.hpp"
#include "geproc/rng.hpp"

namespace geproc {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

GEParams::GEParams(double shape, double scale) : shape_(shape), scale_(scale) {
    if (!(shape > 0.0) || !(scale > 0.0)) {
        throw std::domain_error("GEParams: shape and scale must be positive");
    }
}

double ge_cdf(double t, const GEParams& p) {
    if (t <= 0.0) return 0.0;
    return std::exp(p.shape() * log_expcdf(t, p.scale()));
}

double ge_log_pdf(double t, const GEParams& p) {
    if (t <= 0.0) return -kInf;
    return std::log(p.shape()) + std::log(p.scale()) - p.scale() * t +
           (p.shape() - 1.0) * log_expcdf(t, p.scale());
}

double ge_pdf(double t, const GEParams& p) {
    if (t <= 0.0) return 0.0;
    return std::exp(ge_log_pdf(t, p));
}

double ge_quantile(double u, const GEParams& p) {
    if (!(u > 0.0) || !(u < 1.0)) {
        throw std::domain_error("ge_quantile: u must lie in (0,1)");
    }
    // -ln(1 - u^{1/shape}) / scale with 1 - u^{1/shape} kept accurate at
    // both ends via log1mexp.
    return -log1mexp(std::log(u) / p.shape()) / p.scale();
}

std::vector<double> ge_sample(std::size_t n, const GEParams& p,
                              std::uint64_t seed) {
    if (n < 1) throw std::domain_error("ge_sample: n must be >= 1");
    RngEngine eng(seed);
    std::vector<double> out(n);
    for (double& x : out) {
        x = ge_quantile(uniform01(eng), p);
    }
    return out;
}

ScaleBracket ScaleBracket::default_for(std::span<const double> data) {
    double mean = std::accumulate(data.begin(), data.end(), 0.0) /
                  static_cast<double>(data.size());
    return ScaleBracket{0.01 / mean, 100.0 / mean};
}

GEFit ge_fit_iid(std::span<const double> data,
                 std::optional<ScaleBracket> bracket) {
    const std::size_t n = data.size();
    if (n < 3) throw std::domain_error("ge_fit_iid: need at least 3 points");
    for (double x : data) {
        if (!(x > 0.0)) {
            throw std::domain_error("ge_fit_iid: data must be positive");
        }
    }
    auto [mn, mx] = std::minmax_element(data.begin(), data.end());
    if (*mx - *mn <= 1e-12 * *mx) {
        throw std::domain_error("ge_fit_iid: degenerate (constant) sample");
    }

    const double sum_x = std::accumulate(data.begin(), data.end(), 0.0);
    const double nn = static_cast<double>(n);

    // Profile log-likelihood in the scale: shape(theta) = -n / S(theta) with
    // S(theta) = sum_i log(1 - e^{-theta x_i}) < 0.
    auto profile = [&](double theta) {
        double s = 0.0;
        for (double x : data) s += log_expcdf(x, theta);
        double shape = -nn / s;
        return nn * std::log(shape) + nn * std::log(theta) - theta * sum_x +
               (shape - 1.0) * s;
    };

    ScaleBracket br = bracket ? *bracket : ScaleBracket::default_for(data);
    if (!(br.lo > 0.0) || !(br.hi > br.lo)) {
        throw std::domain_error("ge_fit_iid: invalid scale bracket");
    }

    // Coarse log-spaced scan locates the cell holding the maximum.
    const int grid_n = std::max(
        8, static_cast<int>(std::ceil(64.0 * std::log10(br.hi / br.lo))) + 1);
    std::size_t evals = 0;
    double best_v = -kInf;
    int best_i = 0;
    const double log_lo = std::log(br.lo), log_hi = std::log(br.hi);
    std::vector<double> grid(static_cast<std::size_t>(grid_n));
    for (int i = 0; i < grid_n; ++i) {
        grid[static_cast<std::size_t>(i)] =
            std::exp(log_lo + (log_hi - log_lo) * i / (grid_n - 1));
        double v = profile(grid[static_cast<std::size_t>(i)]);
        ++evals;
        if (v > best_v) {
            best_v = v;
            best_i = i;
        }
    }

    bool at_edge = (best_i == 0 || best_i == grid_n - 1);
    double lo = grid[static_cast<std::size_t>(std::max(0, best_i - 1))];
    double hi = grid[static_cast<std::size_t>(std::min(grid_n - 1, best_i + 1))];
    double theta = detail::golden_max(profile, lo, hi, 1e-9, &evals);

    double s = 0.0;
    for (double x : data) s += log_expcdf(x, theta);
    GEParams params(-nn / s, theta);

    double loglik = 0.0;
    for (double x : data) loglik += ge_log_pdf(x, params);
    return GEFit{params, loglik, at_edge, evals};
}

}  // namespace geproc
