#include "geproc/gof.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "detail.hpp"
#include "geproc/numerics.hpp"
#include "geproc/rng.hpp"

namespace geproc {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double std_normal_two_sided_p(double z_abs) {
    return std::erfc(z_abs / std::sqrt(2.0));
}

double percentile_sorted(std::vector<double>& v, double q) {
    std::sort(v.begin(), v.end());
    if (v.size() == 1) return v.front();
    double h = static_cast<double>(v.size() - 1) * q;
    auto i = static_cast<std::size_t>(h);
    if (i + 1 >= v.size()) return v.back();
    return v[i] + (h - static_cast<double>(i)) * (v[i + 1] - v[i]);
}

MarginalFit fit_marginal(const Series& s) {
    GEFit f = ge_fit_iid(s.values);
    return MarginalFit{f.params.shape(), f.params.scale(), f.loglik,
                       f.at_bracket_edge};
}

}  // namespace

std::pair<Series, Series> split_subsequences(const Series& s) {
    if (s.size() < 4) {
        throw std::domain_error("split_subsequences: need at least 4 points");
    }
    Series odd{{}, s.transform}, even{{}, s.transform};
    odd.values.reserve((s.size() + 1) / 2);
    even.values.reserve(s.size() / 2);
    for (std::size_t i = 0; i < s.size(); ++i) {
        ((i % 2 == 0) ? odd : even).values.push_back(s.values[i]);
    }
    return {std::move(odd), std::move(even)};
}

double kolmogorov_survival(double t) {
    if (t <= 0.0) return 1.0;
    if (t < 1.0) {
        // Dual theta series converges fast for small arguments.
        double sum = 0.0;
        for (int k = 1; k < 200; k += 2) {
            double term = std::exp(-static_cast<double>(k) * k * kPi * kPi /
                                   (8.0 * t * t));
            sum += term;
            if (term < 1e-18 * sum) break;
        }
        double cdf = std::sqrt(2.0 * kPi) / t * sum;
        return std::clamp(1.0 - cdf, 0.0, 1.0);
    }
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k < 200; ++k) {
        double term = std::exp(-2.0 * static_cast<double>(k) * k * t * t);
        sum += sign * term;
        sign = -sign;
        if (term < 1e-18) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test_ge(std::span<const double> data, const GEParams& ref) {
    const std::size_t n = data.size();
    if (n < 5) throw std::domain_error("ks_test_ge: need at least 5 points");
    std::vector<double> sorted(data.begin(), data.end());
    std::sort(sorted.begin(), sorted.end());
    const double nn = static_cast<double>(n);
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double f = ge_cdf(sorted[i], ref);
        d = std::max({d, (static_cast<double>(i) + 1.0) / nn - f,
                      f - static_cast<double>(i) / nn});
    }
    // Stephens' finite-n argument for the asymptotic series.
    double root_n = std::sqrt(nn);
    double stat = d * (root_n + 0.12 + 0.11 / root_n);
    return KsResult{d, kolmogorov_survival(stat), stat};
}

double runs_test(std::span<const double> data) {
    if (data.size() < 10) {
        throw std::invalid_argument("runs_test: need at least 10 points");
    }
    std::vector<double> sorted(data.begin(), data.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    double median = (n % 2 == 1)
                        ? sorted[n / 2]
                        : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

    // Values equal to the median carry no sign and are dropped.
    std::size_t above = 0, below = 0, runs = 0;
    int prev = 0;
    for (double x : data) {
        if (x == median) continue;
        int sign = x > median ? 1 : -1;
        (sign > 0 ? above : below) += 1;
        if (sign != prev) ++runs;
        prev = sign;
    }
    if (above == 0 || below == 0) {
        throw std::domain_error("runs_test: sample is constant at the median");
    }
    const double a = static_cast<double>(above);
    const double b = static_cast<double>(below);
    const double m = a + b;
    const double mean = 1.0 + 2.0 * a * b / m;
    const double var = 2.0 * a * b * (2.0 * a * b - m) / (m * m * (m - 1.0));
    double z = std::max(0.0, std::abs(static_cast<double>(runs) - mean) - 0.5) /
               std::sqrt(var);
    return std_normal_two_sided_p(z);
}

double acf(std::span<const double> series, std::size_t lag) {
    const std::size_t n = series.size();
    if (!(lag < n / 4)) {
        throw std::invalid_argument("acf: lag must be below n/4");
    }
    double mean = std::accumulate(series.begin(), series.end(), 0.0) /
                  static_cast<double>(n);
    double denom = 0.0;
    for (double x : series) denom += sqr(x - mean);
    if (denom == 0.0) {
        throw std::domain_error("acf: series is constant");
    }
    double num = 0.0;
    for (std::size_t t = lag; t < n; ++t) {
        num += (series[t] - mean) * (series[t - lag] - mean);
    }
    return num / denom;
}

std::vector<double> acf_null_band(const ProcessParams& p, std::size_t n,
                                  std::span<const std::size_t> lags,
                                  double quantile, std::size_t sims,
                                  std::uint64_t seed) {
    if (sims < 1000) {
        throw std::invalid_argument("acf_null_band: need at least 1000 simulations");
    }
    if (!(quantile > 0.0) || !(quantile < 1.0)) {
        throw std::invalid_argument("acf_null_band: quantile must lie in (0,1)");
    }
    std::vector<std::vector<double>> draws(lags.size(),
                                           std::vector<double>(sims));
    for (std::size_t k = 0; k < sims; ++k) {
        Series path = simulate(n, p, derive_seed(seed, k));
        for (std::size_t j = 0; j < lags.size(); ++j) {
            draws[j][k] = acf(path.values, lags[j]);
        }
    }
    std::vector<double> out(lags.size());
    for (std::size_t j = 0; j < lags.size(); ++j) {
        out[j] = percentile_sorted(draws[j], quantile);
    }
    return out;
}

GofReport gof_report(const Series& s, const ProcessParams& band_model,
                     const GofOptions& opts) {
    auto [odd, even] = split_subsequences(s);

    GofReport r;
    r.odd_fit = fit_marginal(odd);
    r.even_fit = fit_marginal(even);
    r.odd_ks = ks_test_ge(odd.values, GEParams(r.odd_fit.shape, r.odd_fit.scale));
    r.even_ks =
        ks_test_ge(even.values, GEParams(r.even_fit.shape, r.even_fit.scale));
    r.odd_runs_p = runs_test(odd.values);
    r.even_runs_p = runs_test(even.values);

    r.acf_lag1 = acf(s.values, 1);
    r.acf_lag2 = acf(s.values, 2);
    const std::size_t lags[] = {1, 2};
    auto band = acf_null_band(band_model, s.size(), lags, opts.band_quantile,
                              opts.band_sims, opts.seed);
    r.band_lag1_upper = band[0];
    r.band_lag2_upper = band[1];
    r.band_quantile = opts.band_quantile;
    r.band_sims = opts.band_sims;

    r.marginals_ok =
        r.odd_ks.p_value > opts.level && r.even_ks.p_value > opts.level;
    r.independence_ok =
        r.odd_runs_p > opts.level && r.even_runs_p > opts.level;
    r.acf_ok = r.acf_lag2 < r.band_lag2_upper;
    r.ks_ignores_estimation = true;
    return r;
}

}  // namespace geproc
