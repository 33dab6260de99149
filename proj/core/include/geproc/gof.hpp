#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "geproc/gedist.hpp"
#include "geproc/geprocess.hpp"
#include "geproc/series.hpp"

namespace geproc {

/// Elements at odd and even 1-based positions, order preserved. Under the
/// process each subsequence is i.i.d. GE(alpha0+alpha1, lambda), which is
/// what the marginal checks below exploit. Needs length >= 4.
std::pair<Series, Series> split_subsequences(const Series& s);

struct KsResult {
    double distance;   // sup |empirical CDF - fitted CDF| over order statistics
    double p_value;    // asymptotic Kolmogorov series at the corrected argument
    double corrected_stat;  // distance * (sqrt(n) + 0.12 + 0.11/sqrt(n))
};

/// One-sample Kolmogorov-Smirnov against a fixed GE law. The p-value uses
/// the asymptotic series with Stephens' small-sample argument correction and
/// ignores parameter estimation when the reference was fitted to the same
/// data; reports carry that caveat.
KsResult ks_test_ge(std::span<const double> data, const GEParams& ref);

/// Survival function of the limiting Kolmogorov distribution.
double kolmogorov_survival(double t);

/// Wald-Wolfowitz runs test dichotomized at the sample median (values equal
/// to the median are dropped), normal approximation with continuity
/// correction. Returns the two-sided p-value. Needs n >= 10 and a
/// non-constant sample.
double runs_test(std::span<const double> data);

/// Mean-centered sample autocorrelation at the given lag (lag < n/4).
double acf(std::span<const double> series, std::size_t lag);

/// Upper `quantile` point of the null distribution of acf at each lag,
/// estimated from `sims` simulated paths of length n (sims >= 1000).
/// Simulation k uses derive_seed(seed, k).
std::vector<double> acf_null_band(const ProcessParams& p, std::size_t n,
                                  std::span<const std::size_t> lags,
                                  double quantile, std::size_t sims,
                                  std::uint64_t seed);

struct MarginalFit {
    double shape = 0.0;
    double scale = 0.0;
    double loglik = 0.0;
    bool at_bracket_edge = false;
};

struct GofOptions {
    std::size_t band_sims = 5000;
    double band_quantile = 0.90;
    double level = 0.05;  // verdict threshold for the p-value checks
    std::uint64_t seed = 0;
};

struct GofReport {
    MarginalFit odd_fit, even_fit;
    KsResult odd_ks{}, even_ks{};
    double odd_runs_p = 0.0, even_runs_p = 0.0;
    double acf_lag1 = 0.0, acf_lag2 = 0.0;
    double band_lag1_upper = 0.0, band_lag2_upper = 0.0;
    double band_quantile = 0.0;
    std::size_t band_sims = 0;
    // verdicts at GofOptions::level
    bool marginals_ok = false;     // both subsequence KS p-values above level
    bool independence_ok = false;  // both runs-test p-values above level
    bool acf_ok = false;           // lag-2 acf below its null band point
    bool ks_ignores_estimation = true;
};

/// The full model-checking workflow: split, fit GE marginals to each
/// subsequence, KS and runs tests per subsequence, lag-1/lag-2
/// autocorrelations of the full series with simulated null percentile
/// points under `band_model`.
GofReport gof_report(const Series& s, const ProcessParams& band_model,
                     const GofOptions& opts = {});

}  // namespace geproc
