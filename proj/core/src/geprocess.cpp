#include "geproc/geprocess.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "detail.hpp"
#include "geproc/numerics.hpp"
#include "geproc/rng.hpp"

namespace geproc {

namespace {

void require_positive_pair(double x, double y, const char* who) {
    if (!(x > 0.0) || !(y > 0.0)) {
        throw std::domain_error(std::string(who) + ": coordinates must be positive");
    }
}

// u^{1/alpha} from lu = log(u), nudged below 1 so downstream log1p(-w)
// stays finite when the exponent rounds all the way up.
double frac_power(double lu, double alpha) {
    double w = std::exp(lu / alpha);
    return w < 1.0 ? w : std::nextafter(1.0, 0.0);
}

Series prh_core(std::size_t n, double alpha0, double alpha1,
                const std::function<double(double)>& q, std::uint64_t seed) {
    if (n < 1) throw std::domain_error("simulate: n must be >= 1");
    if (!(alpha0 > 0.0) || !(alpha1 > 0.0)) {
        throw std::domain_error("simulate: shapes must be positive");
    }
    RngEngine eng(seed);
    Series s;
    s.values.reserve(n);
    // U_0..U_n consume one engine draw each, in index order. U_k feeds X_k
    // through the 1/alpha0 leg and X_{k+1} through the 1/alpha1 leg; at
    // alpha0 == alpha1 both legs are the same expression, so a shared
    // innovation that wins twice yields a bit-exact tie.
    double lu = std::log(uniform01(eng));
    double carried = q(frac_power(lu, alpha1));
    for (std::size_t k = 1; k <= n; ++k) {
        lu = std::log(uniform01(eng));
        double own = q(frac_power(lu, alpha0));
        s.values.push_back(std::max(own, carried));
        carried = q(frac_power(lu, alpha1));
    }
    return s;
}

}  // namespace

ProcessParams::ProcessParams(double alpha0, double alpha1, double lambda)
    : alpha0_(alpha0), alpha1_(alpha1), lambda_(lambda) {
    if (!(alpha0 > 0.0) || !(alpha1 > 0.0) || !(lambda > 0.0)) {
        throw std::domain_error("ProcessParams: all parameters must be positive");
    }
}

PairRegion classify_pair(double x, double y, const ProcessParams& p,
                         double tie_tol) {
    require_positive_pair(x, y, "classify_pair");
    double a = p.alpha0() * log_expcdf(x, p.lambda());
    double b = p.alpha1() * log_expcdf(y, p.lambda());
    return detail::region_of(a, b, tie_tol);
}

double curve_gamma(double t, const ProcessParams& p) {
    if (!(t > 0.0)) throw std::domain_error("curve_gamma: t must be positive");
    return -log1mexp(p.gamma_ratio() * log_expcdf(t, p.lambda())) / p.lambda();
}

Series simulate(std::size_t n, const ProcessParams& p, std::uint64_t seed) {
    const double lambda = p.lambda();
    return prh_core(n, p.alpha0(), p.alpha1(),
                    [lambda](double w) { return -std::log1p(-w) / lambda; },
                    seed);
}

Series prh_simulate(std::size_t n, double alpha0, double alpha1,
                    const std::function<double(double)>& base_quantile,
                    std::uint64_t seed) {
    return prh_core(n, alpha0, alpha1, base_quantile, seed);
}

double joint_cdf_lag(double x, double y, int lag, const ProcessParams& p) {
    if (lag < 1) throw std::domain_error("joint_cdf_lag: lag must be >= 1");
    if (x <= 0.0 || y <= 0.0) return 0.0;
    double lzx = log_expcdf(x, p.lambda());
    double lzy = log_expcdf(y, p.lambda());
    if (lag >= 2) {
        return std::exp(p.alpha_sum() * (lzx + lzy));
    }
    double log_g = std::min(p.alpha0() * lzx, p.alpha1() * lzy);
    return std::exp(p.alpha1() * lzx + p.alpha0() * lzy + log_g);
}

PairDensity pair_density(double x, double y, const ProcessParams& p,
                         double tie_tol) {
    require_positive_pair(x, y, "pair_density");
    const double a0 = p.alpha0(), a1 = p.alpha1(), lam = p.lambda();
    const double lzx = log_expcdf(x, lam);
    const double lzy = log_expcdf(y, lam);
    const PairRegion region = detail::region_of(a0 * lzx, a1 * lzy, tie_tol);
    const double lv =
        detail::pair_log_density_at(region, x, y, lzx, lzy, a0, a1, lam);
    return PairDensity{region, std::exp(lv), lv};
}

SingularDecomposition::SingularDecomposition(const ProcessParams& p)
    : params_(p) {
    double a0 = p.alpha0(), a1 = p.alpha1();
    p_ = (a0 * a0 + a1 * a1) / (a0 * a0 + a1 * a1 + a0 * a1);
}

double SingularDecomposition::singular(double x, double y) const {
    if (x <= 0.0 || y <= 0.0) return 0.0;
    const double a0 = params_.alpha0(), a1 = params_.alpha1();
    const double d = a0 * a0 + a1 * a1 + a0 * a1;
    double log_g = std::min(a0 * log_expcdf(x, params_.lambda()),
                            a1 * log_expcdf(y, params_.lambda()));
    return std::exp((d / (a0 * a1)) * log_g);
}

double SingularDecomposition::absolutely_continuous(double x, double y) const {
    if (x <= 0.0 || y <= 0.0) return 0.0;
    const double a0 = params_.alpha0(), a1 = params_.alpha1();
    const double ss = a0 * a0 + a1 * a1;
    const double d = ss + a0 * a1;
    double lzx = log_expcdf(x, params_.lambda());
    double lzy = log_expcdf(y, params_.lambda());
    double log_g = std::min(a0 * lzx, a1 * lzy);
    double joint = std::exp(a1 * lzx + a0 * lzy + log_g);
    return (d / ss) * joint - (a0 * a1 / ss) * std::exp((d / (a0 * a1)) * log_g);
}

SingularDecomposition singular_decomposition(const ProcessParams& p) {
    return SingularDecomposition(p);
}

double copula(double u, double v, double delta) {
    if (!(delta > 0.0) || !(delta < 1.0)) {
        throw std::domain_error("copula: delta must lie in (0,1)");
    }
    if (!(u >= 0.0) || !(u <= 1.0) || !(v >= 0.0) || !(v <= 1.0)) {
        throw std::domain_error("copula: arguments must lie in [0,1]");
    }
    if (u == 0.0 || v == 0.0) return 0.0;
    if (u == 1.0) return v;
    if (v == 1.0) return u;
    double lu = std::log(u), lv = std::log(v);
    if (delta * lu <= (1.0 - delta) * lv) {
        return std::exp(lu + delta * lv);
    }
    return std::exp((1.0 - delta) * lu + lv);
}

double kendall_tau(double delta) {
    if (!(delta > 0.0) || !(delta < 1.0)) {
        throw std::domain_error("kendall_tau: delta must lie in (0,1)");
    }
    // The quartic denominator of the display factors to (1 - s)^2 with
    // s = delta(1-delta), leaving s/(1-s).
    double s = delta * (1.0 - delta);
    return s / (1.0 - s);
}

double spearman_rho(double delta) {
    if (!(delta > 0.0) || !(delta < 1.0)) {
        throw std::domain_error("spearman_rho: delta must lie in (0,1)");
    }
    double s = delta * (1.0 - delta);
    return 3.0 * s / (2.0 - s);
}

double running_max_cdf(double x, std::size_t n, const ProcessParams& p) {
    if (n < 1) throw std::domain_error("running_max_cdf: n must be >= 1");
    if (x <= 0.0) return 0.0;
    double astar = std::max(p.alpha0(), p.alpha1());
    double expo = p.alpha_sum() + static_cast<double>(n - 1) * astar;
    return std::exp(expo * log_expcdf(x, p.lambda()));
}

double running_min_survival(double x, std::size_t n, const ProcessParams& p) {
    if (n < 1) throw std::domain_error("running_min_survival: n must be >= 1");
    if (x <= 0.0) return 1.0;
    const double lz = log_expcdf(x, p.lambda());
    const double astar = std::max(p.alpha0(), p.alpha1());
    const double cdf = std::exp(p.alpha_sum() * lz);
    const double surv = -std::expm1(p.alpha_sum() * lz);
    if (n == 1) return surv;
    // P(X_2 >= x | X_1 >= x) = (1 - 2 F(x) + F(x,x)) / (1 - F(x)); the
    // numerator is the exact pairwise inclusion-exclusion term.
    double pair_surv = 1.0 - 2.0 * cdf + std::exp((p.alpha_sum() + astar) * lz);
    double cond = std::max(0.0, pair_surv / surv);
    return std::pow(cond, static_cast<double>(n - 1)) * surv;
}

MinSurvivalCheck compare_running_min_survival(double x, std::size_t n,
                                              const ProcessParams& p,
                                              std::size_t paths,
                                              std::uint64_t seed) {
    if (paths < 1) throw std::domain_error("compare_running_min_survival: paths >= 1");
    const double lam = p.lambda();
    const double a0 = p.alpha0(), a1 = p.alpha1();
    RngEngine eng(seed);
    std::size_t hits = 0;
    for (std::size_t path = 0; path < paths; ++path) {
        double lu = std::log(uniform01(eng));
        double carried = -std::log1p(-frac_power(lu, a1)) / lam;
        bool all_above = true;
        for (std::size_t k = 1; k <= n; ++k) {
            lu = std::log(uniform01(eng));
            double own = -std::log1p(-frac_power(lu, a0)) / lam;
            if (std::max(own, carried) < x) {
                all_above = false;
                break;
            }
            carried = -std::log1p(-frac_power(lu, a1)) / lam;
        }
        if (all_above) ++hits;
    }
    double mc = static_cast<double>(hits) / static_cast<double>(paths);
    double formula = running_min_survival(x, n, p);
    return MinSurvivalCheck{formula, mc, std::abs(formula - mc)};
}

StoppingLaw::StoppingLaw(double level, const ProcessParams& p)
    : level_(level),
      p_(-std::expm1(-p.lambda() * level)),
      alpha_sum_(p.alpha_sum()),
      alpha_star_(std::max(p.alpha0(), p.alpha1())) {
    if (!(level > 0.0)) {
        throw std::domain_error("StoppingLaw: level must be positive");
    }
}

double StoppingLaw::pmf(std::uint64_t k) const {
    if (k < 1) throw std::domain_error("StoppingLaw::pmf: k must be >= 1");
    const double lp = std::log(p_);
    if (k == 1) return -std::expm1(alpha_sum_ * lp);
    double expo = alpha_sum_ + static_cast<double>(k - 2) * alpha_star_;
    return std::exp(expo * lp) * (-std::expm1(alpha_star_ * lp));
}

double StoppingLaw::pgf(double s) const {
    const double lp = std::log(p_);
    const double q = std::exp(alpha_star_ * lp);  // p^{alpha*}
    if (!(std::abs(s) < 1.0 / q)) {
        throw std::domain_error("StoppingLaw::pgf: |s| must be below p^{-alpha*}");
    }
    const double cdf_sum = std::exp(alpha_sum_ * lp);  // p^{alpha0+alpha1}
    return (s * (1.0 - cdf_sum) + s * s * (cdf_sum - q)) / (1.0 - q * s);
}

double StoppingLaw::mean() const {
    const double lp = std::log(p_);
    const double q = std::exp(alpha_star_ * lp);
    const double cdf_sum = std::exp(alpha_sum_ * lp);
    return (1.0 + cdf_sum - q) / (1.0 - q);
}

}  // namespace geproc
