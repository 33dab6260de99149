#pragma once

#include <cstdint>
#include <functional>

#include "geproc/gedist.hpp"
#include "geproc/series.hpp"

namespace geproc {

/// Parameters of the stationary GE process
///
///   X_n = (1/lambda) * max{ -ln(1 - U_n^{1/alpha0}), -ln(1 - U_{n-1}^{1/alpha1}) },
///
/// with U_k i.i.d. uniform(0,1). Each X_n is marginally GE(alpha0+alpha1,
/// lambda) and the sequence is stationary and 1-dependent. Consecutive pairs
/// carry a singular component: with positive probability (X_n, X_{n+1}) falls
/// exactly on the curve y = curve_gamma(x), which collapses to the diagonal
/// X_n = X_{n+1} when alpha0 = alpha1.
class ProcessParams {
  public:
    ProcessParams(double alpha0, double alpha1, double lambda);

    double alpha0() const { return alpha0_; }
    double alpha1() const { return alpha1_; }
    double lambda() const { return lambda_; }

    /// alpha0 / (alpha0 + alpha1), the copula parameter in (0,1).
    double delta() const { return alpha0_ / (alpha0_ + alpha1_); }
    /// alpha0 / alpha1, the shape ratio used by the unequal-shape fit.
    double gamma_ratio() const { return alpha0_ / alpha1_; }
    double alpha_sum() const { return alpha0_ + alpha1_; }
    GEParams marginal() const { return GEParams(alpha0_ + alpha1_, lambda_); }

  private:
    double alpha0_;
    double alpha1_;
    double lambda_;
};

/// Where a pair (x, y) sits relative to the support curve:
/// S1 below it ((1-e^{-lambda x})^alpha0 < (1-e^{-lambda y})^alpha1),
/// S2 above it, C on it (within tolerance).
enum class PairRegion { S1, S2, C };

/// Tie tolerance: |a - b| <= tol * max(1, |a|, |b|) on the log scale.
/// Simulated pairs that share an innovation land on the curve up to a few
/// ulps of round-trip error, far inside the default; data that arrive
/// rounded need a looser value.
inline constexpr double kDefaultTieTol = 1e-9;

/// Classifies by comparing alpha0*log(1-e^{-lambda x}) against
/// alpha1*log(1-e^{-lambda y}) in log space. Requires x, y > 0.
PairRegion classify_pair(double x, double y, const ProcessParams& p,
                         double tie_tol = kDefaultTieTol);

/// The support curve: y such that (x, y) lies on C. Strictly increasing;
/// the identity map when alpha0 = alpha1, and inverse to the curve of the
/// shape-swapped process.
double curve_gamma(double t, const ProcessParams& p);

/// Simulates X_1..X_n from U_0..U_n (n+1 engine draws in index order).
/// When alpha0 = alpha1 a shared innovation that attains both maxima
/// produces a bit-exact tie X_k = X_{k+1}.
Series simulate(std::size_t n, const ProcessParams& p, std::uint64_t seed);

/// Proportional-reversed-hazard generalization: X_n = max{ Q(U_n^{1/alpha0}),
/// Q(U_{n-1}^{1/alpha1}) } for a strictly increasing baseline quantile Q on
/// (0,1). simulate() is exactly this kernel with the GE baseline, so the two
/// agree bit for bit at matched seeds.
Series prh_simulate(std::size_t n, double alpha0, double alpha1,
                    const std::function<double(double)>& base_quantile,
                    std::uint64_t seed);

/// Joint CDF of (X_n, X_{n+m}). Product of marginals for m >= 2; for m = 1
/// the two-branch form (1-e^{-lx})^{a1} (1-e^{-ly})^{a0} * g(x,y) with
/// g = min{(1-e^{-lx})^{a0}, (1-e^{-ly})^{a1}}.
double joint_cdf_lag(double x, double y, int lag, const ProcessParams& p);

/// Lag-1 pair density against the mixed dominating measure: 2-D Lebesgue off
/// the curve, 1-D (x-parametrized, weighted by |curve slope|) on it. The on-
/// curve branch is a density in the single coordinate x.
struct PairDensity {
    PairRegion region;
    double value;
    double log_value;
};
PairDensity pair_density(double x, double y, const ProcessParams& p,
                         double tie_tol = kDefaultTieTol);

/// Decomposition F(x,y) = p * Fa(x,y) + (1-p) * Fs(x,y) of the lag-1 joint
/// CDF into its absolutely continuous and singular parts, with
/// p = (a0^2 + a1^2) / (a0^2 + a1^2 + a0 a1). 1 - p is the probability that
/// a consecutive pair lies on the curve.
class SingularDecomposition {
  public:
    explicit SingularDecomposition(const ProcessParams& p);

    double p() const { return p_; }
    double absolutely_continuous(double x, double y) const;  // Fa
    double singular(double x, double y) const;               // Fs

  private:
    ProcessParams params_;
    double p_;
};
SingularDecomposition singular_decomposition(const ProcessParams& p);

/// Copula of a consecutive pair, delta = alpha0/(alpha0+alpha1):
/// C(u,v) = u v^delta when u^delta <= v^{1-delta}, else u^{1-delta} v.
double copula(double u, double v, double delta);

/// Population Kendall tau and Spearman rho of a consecutive pair as
/// functions of delta; both vanish as delta -> 0 or 1 and peak at delta=1/2
/// (tau = 1/3, rho = 3/7). Throws std::domain_error outside (0,1).
double kendall_tau(double delta);
double spearman_rho(double delta);

/// P(max(X_1..X_n) <= x) = (1-e^{-lambda x})^{alpha0+alpha1+(n-1)*alpha_star},
/// alpha_star = max(alpha0, alpha1): of the n+1 innovations the n-1 shared
/// ones each constrain through their larger exponent. (The source derivation
/// prints the minimum and drops the n-dependence; the Monte Carlo checks in
/// the test suite settle it in favor of this form.)
double running_max_cdf(double x, std::size_t n, const ProcessParams& p);

/// P(min(X_1..X_n) >= x) via the chain factorization
/// (P(X_2>=x | X_1>=x))^{n-1} P(X_1>=x). Exact for n <= 2 (inclusion-
/// exclusion); for n >= 3 conditioning on the event {X >= x} is an
/// approximation, so use compare_running_min_survival to see the deviation.
double running_min_survival(double x, std::size_t n, const ProcessParams& p);

struct MinSurvivalCheck {
    double formula;
    double monte_carlo;
    double abs_deviation;
};
MinSurvivalCheck compare_running_min_survival(double x, std::size_t n,
                                              const ProcessParams& p,
                                              std::size_t paths,
                                              std::uint64_t seed);

/// First passage above a level L: N = min{k : X_k > L}. With p = 1-e^{-lambda L},
///   P(N=1) = 1 - p^{a0+a1},
///   P(N=k) = p^{a0+a1+(k-2) a*} (1 - p^{a*}),  k >= 2,  a* = max(a0,a1),
/// which telescopes to total mass one. The generating function is
///   G(s) = [s (1-p^{a0+a1}) + s^2 (p^{a0+a1} - p^{a*})] / (1 - p^{a*} s),
/// convergent for |s| < p^{-a*}.
class StoppingLaw {
  public:
    StoppingLaw(double level, const ProcessParams& p);

    double level() const { return level_; }
    double p() const { return p_; }
    double alpha_star() const { return alpha_star_; }
    double alpha_sum() const { return alpha_sum_; }

    double pmf(std::uint64_t k) const;  // k >= 1
    double pgf(double s) const;         // throws outside the convergence disc
    double mean() const;                // G'(1) in closed form

  private:
    double level_;
    double p_;
    double alpha_sum_;
    double alpha_star_;
};

}  // namespace geproc
