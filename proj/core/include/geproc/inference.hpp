#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "geproc/geprocess.hpp"

namespace geproc {

/// Indices i (0-based, pair = (x_i, x_{i+1})) partitioned by region:
/// a1 below the curve, a2 above, a0 on it. n0+n1+n2 = n-1 always.
/// For the equal-shape fit membership depends on the data ordering alone;
/// for the unequal-shape fit it moves with (gamma, lambda).
struct TieSets {
    std::vector<std::size_t> a0, a1, a2;

    std::size_t n0() const { return a0.size(); }
    std::size_t n1() const { return a1.size(); }
    std::size_t n2() const { return a2.size(); }
};

TieSets tie_sets(std::span<const double> data, double gamma, double lambda,
                 double tie_tol = kDefaultTieTol);

/// Log joint density of an observed path under the process, against the
/// mixed dominating measure: sum of log pair densities over consecutive
/// pairs minus log marginal densities over interior points. Tied pairs
/// contribute the singular branch, so paths with model ties stay finite.
/// Throws std::domain_error on non-positive data or n < 2.
double chain_loglik(std::span<const double> data, const ProcessParams& p,
                    double tie_tol = kDefaultTieTol);

/// Closed-form shape maximizer of chain_loglik at fixed lambda under
/// alpha0 = alpha1: alpha(lambda) = -(n1+n2+1) / g1(lambda) where g1
/// collects the alpha-coefficients of the log terms (pairs minus interior
/// marginals). g1 < 0 for any non-degenerate sample; otherwise throws.
double profile_alpha_case1(double lambda, std::span<const double> data,
                           double tie_tol = kDefaultTieTol);

/// Closed-form alpha1 maximizer at fixed (gamma, lambda) for the
/// unequal-shape parametrization (alpha0 = gamma * alpha1).
double profile_alpha1_case2(double gamma, double lambda,
                            std::span<const double> data,
                            double tie_tol = kDefaultTieTol);

enum class ShapeModel { EqualShapes, UnequalShapes };

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double x) const { return lo <= x && x <= hi; }
};

struct BootstrapCI {
    std::size_t replicates = 0;  // successful replicates used
    std::size_t failures = 0;
    double level = 0.0;
    std::uint64_t seed = 0;
    Interval alpha0, alpha1, lambda;
};

struct OptimizerTrace {
    std::size_t evaluations = 0;
    double bracket_lo = 0.0;  // final golden-section bracket (lambda)
    double bracket_hi = 0.0;
    double simplex_size = 0.0;  // final simplex diameter (log coords), case II
    bool widened = false;       // bracket had to be widened once
};

/// Profile curve h(lambda) for plotting (equal-shape fit).
struct ProfileCurve {
    std::vector<double> lambda;
    std::vector<double> value;
};

/// Profile log-likelihood surface over (gamma, lambda) for contour plots;
/// value is gamma-major row order: value[i*lambda.size()+j].
struct ContourGrid {
    std::vector<double> gamma;
    std::vector<double> lambda;
    std::vector<double> value;
};

struct FitReport {
    ShapeModel model;
    ProcessParams estimates;
    double loglik;  // chain_loglik at the estimates
    double tie_tol;
    OptimizerTrace trace;
    ProfileCurve profile;  // populated by the equal-shape fit
    ContourGrid contour;   // populated by the unequal-shape fit
    std::optional<BootstrapCI> bootstrap;
};

struct FitOptions {
    std::optional<ScaleBracket> lambda_bracket;  // default [0.01/mean, 100/mean]
    int lambda_grid_per_decade = 64;
    int gamma_grid_points = 64;  // log-spaced over gamma_bracket, plus gamma=1
    double gamma_lo = 0.05;
    double gamma_hi = 20.0;
    double tie_tol = kDefaultTieTol;
    double golden_rel_tol = 1e-9;
    std::size_t max_evaluations = 20000;
    std::optional<double> pin_gamma;  // fix gamma and optimize lambda only
    std::optional<std::pair<double, double>> init;  // explicit (gamma, lambda) start
    bool keep_grid = true;  // retain profile curve / contour grid in the report
};

/// Raised when an optimizer stops on its evaluation budget or repeatedly at a
/// bracket edge; carries the best point found so far.
class ConvergenceError : public std::runtime_error {
  public:
    ConvergenceError(const std::string& what, FitReport best);
    const FitReport& best() const { return best_; }

  private:
    FitReport best_;
};

/// Equal-shape MLE: 1-D profile over lambda (grid scan locates the bracket,
/// golden section finishes). Needs n >= 3.
FitReport fit_case1(std::span<const double> data, const FitOptions& opts = {});

/// Unequal-shape MLE: the objective is piecewise-smooth in (gamma, lambda)
/// because region membership jumps, so refinement is derivative-free
/// (Nelder-Mead in log coordinates) from the best grid start; the pinned
/// gamma=1 solution is always kept as a fallback candidate, which makes the
/// equal-shape model exactly nested. Needs n >= 4.
FitReport fit_case2(std::span<const double> data, const FitOptions& opts = {});

/// Percentile bootstrap: simulates B paths from the fitted parameters,
/// refits each under the same model, and takes per-parameter percentile
/// intervals. Replicates that fail to fit are excluded and counted; more
/// than 10% failures aborts. B >= 100. Deterministic given seed; replicate
/// k uses derive_seed(seed, k).
FitReport bootstrap_ci(std::span<const double> data, const FitReport& fit,
                       std::size_t replicates, double level,
                       std::uint64_t seed, const FitOptions& opts = {});

}  // namespace geproc
