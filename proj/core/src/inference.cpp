#include "geproc/inference.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <thread>

#include "detail.hpp"
#include "geproc/numerics.hpp"
#include "geproc/rng.hpp"

namespace geproc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_path(std::span<const double> data, std::size_t min_n,
                const char* who) {
    if (data.size() < min_n) {
        throw std::domain_error(std::string(who) + ": need at least " +
                                std::to_string(min_n) + " observations");
    }
    for (double x : data) {
        if (!(x > 0.0)) {
            throw std::domain_error(std::string(who) +
                                    ": data must be strictly positive");
        }
    }
}

std::vector<double> log_z(std::span<const double> data, double lambda) {
    std::vector<double> lz(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        lz[i] = log_expcdf(data[i], lambda);
    }
    return lz;
}

// One-pass profile evaluation at fixed (gamma, lambda) in the
// alpha0 = gamma * alpha1 parametrization. The log-likelihood is linear in
// alpha1 given the region partition, ll = k*log(alpha1) + alpha1*h1 + c with
// k = n1 + n2 + 1 (pairs contribute 2 log-alpha1 off the curve and 1 on it,
// interior marginals subtract one each), so the maximizer is -k/h1 and the
// attained value is k*(log k - log(-h1) - 1) + c. The equal-shape fit is
// gamma = 1 of the same expression, which is what makes the models nest
// exactly.
struct ProfileEval {
    double alpha1;
    double value;
};

ProfileEval profile_eval(double gamma, double lambda,
                         std::span<const double> data,
                         const std::vector<double>& lz, double tie_tol) {
    const std::size_t n = data.size();
    const double log_lam = std::log(lambda);
    const double log_1pg = std::log1p(gamma);
    const double log_g = std::log(gamma);

    double h1 = 0.0;  // alpha1-coefficient
    double c = 0.0;   // alpha1-free part
    std::size_t ties = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        switch (detail::region_of(gamma * lz[i], lz[i + 1], tie_tol)) {
            case PairRegion::S1:
                h1 += (1.0 + gamma) * lz[i] + gamma * lz[i + 1];
                c += log_g + log_1pg + 2.0 * log_lam -
                     lambda * (data[i] + data[i + 1]) - lz[i] - lz[i + 1];
                break;
            case PairRegion::S2:
                h1 += lz[i] + (1.0 + gamma) * lz[i + 1];
                c += log_1pg + 2.0 * log_lam -
                     lambda * (data[i] + data[i + 1]) - lz[i] - lz[i + 1];
                break;
            case PairRegion::C:
                h1 += (1.0 + gamma + gamma * gamma) * lz[i];
                c += log_lam - gamma * lz[i] + log1mexp(gamma * lz[i]);
                ++ties;
                break;
        }
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        h1 -= (1.0 + gamma) * lz[i];
        c -= log_1pg + log_lam - lambda * data[i] - lz[i];
    }

    if (!(h1 < 0.0)) {
        throw std::domain_error("profile: degenerate shape coefficient");
    }
    const double k = static_cast<double>(n - ties);  // n1 + n2 + 1
    const double alpha1 = -k / h1;
    const double value = k * (std::log(k) - std::log(-h1) - 1.0) + c;
    return ProfileEval{alpha1, value};
}

ProfileEval profile_eval(double gamma, double lambda,
                         std::span<const double> data, double tie_tol) {
    return profile_eval(gamma, lambda, data, log_z(data, lambda), tie_tol);
}

std::vector<double> log_spaced(double lo, double hi, int points) {
    std::vector<double> g(static_cast<std::size_t>(points));
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < points; ++i) {
        g[static_cast<std::size_t>(i)] =
            std::exp(llo + (lhi - llo) * i / (points - 1));
    }
    g.front() = lo;
    g.back() = hi;
    return g;
}

int lambda_grid_points(const ScaleBracket& br, int per_decade) {
    double decades = std::log10(br.hi / br.lo);
    return std::max(9, static_cast<int>(std::ceil(per_decade * decades)) + 1);
}

// Grid scan plus golden section over lambda at fixed gamma; widens the
// bracket once if the scan maximum sits on an edge.
struct Best1D {
    double lam = 0.0;
    double value = -kInf;
    double lo = 0.0, hi = 0.0;
    bool widened = false;
    bool edge = false;
    ProfileCurve curve;
};

template <typename F>
Best1D max_over_lambda(F&& value_at, ScaleBracket br, const FitOptions& opts,
                       bool keep_curve) {
    Best1D out;
    std::vector<double> grid;
    std::size_t best = 0;
    for (int attempt = 0;; ++attempt) {
        grid = log_spaced(br.lo, br.hi,
                          lambda_grid_points(br, opts.lambda_grid_per_decade));
        std::vector<double> vals(grid.size());
        best = 0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            vals[i] = value_at(grid[i]);
            if (vals[i] > vals[best]) best = i;
        }
        if (keep_curve) {
            out.curve.lambda = grid;
            out.curve.value = vals;
        }
        if (vals[best] == -kInf) {
            throw std::domain_error(
                "fit: likelihood degenerate over the entire scale bracket");
        }
        if (best > 0 && best + 1 < grid.size()) break;
        if (attempt >= 1) {
            out.lam = grid[best];
            out.value = vals[best];
            out.lo = br.lo;
            out.hi = br.hi;
            out.edge = true;
            return out;  // still on the edge; caller turns this into an error
        }
        br.lo /= 100.0;
        br.hi *= 100.0;
        out.widened = true;
    }
    out.lo = grid[best - 1];
    out.hi = grid[best + 1];
    out.lam = detail::golden_max(value_at, out.lo, out.hi,
                                 opts.golden_rel_tol, nullptr);
    out.value = value_at(out.lam);
    return out;
}

struct NmResult {
    std::array<double, 2> x{};
    double f = kInf;
    double size = kInf;
    bool converged = false;
};

// Nelder-Mead on two coordinates; the objective is only piecewise smooth
// (region membership jumps with the parameters), so no gradients anywhere.
template <typename F>
NmResult nelder_mead_2d(F&& f, std::array<double, 2> x0,
                        std::array<double, 2> step, double ftol_rel,
                        double xtol, std::size_t max_evals) {
    std::array<std::array<double, 2>, 3> v{
        x0,
        {x0[0] + step[0], x0[1]},
        {x0[0], x0[1] + step[1]},
    };
    std::array<double, 3> fv{f(v[0]), f(v[1]), f(v[2])};
    std::size_t evals = 3;

    auto order = [&] {
        std::array<int, 3> idx{0, 1, 2};
        std::sort(idx.begin(), idx.end(),
                  [&](int a, int b) { return fv[a] < fv[b]; });
        return idx;
    };
    auto diameter = [&] {
        double d = 0.0;
        for (int i = 0; i < 3; ++i) {
            for (int j = i + 1; j < 3; ++j) {
                d = std::max({d, std::abs(v[i][0] - v[j][0]),
                              std::abs(v[i][1] - v[j][1])});
            }
        }
        return d;
    };

    NmResult res;
    while (true) {
        auto idx = order();
        int b = idx[0], m = idx[1], w = idx[2];
        res.x = v[b];
        res.f = fv[b];
        res.size = diameter();
        if (std::abs(fv[w] - fv[b]) <=
                ftol_rel * (std::abs(fv[b]) + std::abs(fv[w]) + 1e-300) &&
            res.size <= xtol) {
            res.converged = true;
            return res;
        }
        if (evals >= max_evals) return res;

        std::array<double, 2> c{0.5 * (v[b][0] + v[m][0]),
                                0.5 * (v[b][1] + v[m][1])};
        auto point = [&](double t) {
            return std::array<double, 2>{c[0] + t * (c[0] - v[w][0]),
                                         c[1] + t * (c[1] - v[w][1])};
        };
        auto xr = point(1.0);
        double fr = f(xr);
        ++evals;
        if (fr < fv[b]) {
            auto xe = point(2.0);
            double fe = f(xe);
            ++evals;
            if (fe < fr) {
                v[w] = xe;
                fv[w] = fe;
            } else {
                v[w] = xr;
                fv[w] = fr;
            }
        } else if (fr < fv[m]) {
            v[w] = xr;
            fv[w] = fr;
        } else {
            bool shrink = false;
            if (fr < fv[w]) {
                auto xc = point(0.5);
                double fc = f(xc);
                ++evals;
                if (fc <= fr) {
                    v[w] = xc;
                    fv[w] = fc;
                } else {
                    shrink = true;
                }
            } else {
                auto xc = point(-0.5);
                double fc = f(xc);
                ++evals;
                if (fc < fv[w]) {
                    v[w] = xc;
                    fv[w] = fc;
                } else {
                    shrink = true;
                }
            }
            if (shrink) {
                for (int i : {m, w}) {
                    v[i] = {0.5 * (v[i][0] + v[b][0]),
                            0.5 * (v[i][1] + v[b][1])};
                    fv[i] = f(v[i]);
                    evals += 1;
                }
            }
        }
    }
}

// Runs fn(0..count-1); indices own their output slots, so execution order
// never changes results.
template <typename Fn>
void for_each_index(std::size_t count, Fn&& fn) {
    unsigned hw = std::thread::hardware_concurrency();
    unsigned workers = std::min<std::size_t>(hw == 0 ? 1 : hw, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

double percentile_sorted(const std::vector<double>& v, double q) {
    if (v.size() == 1) return v.front();
    double h = static_cast<double>(v.size() - 1) * q;
    auto i = static_cast<std::size_t>(h);
    if (i + 1 >= v.size()) return v.back();
    return v[i] + (h - static_cast<double>(i)) * (v[i + 1] - v[i]);
}

}  // namespace

TieSets tie_sets(std::span<const double> data, double gamma, double lambda,
                 double tie_tol) {
    check_path(data, 2, "tie_sets");
    if (!(gamma > 0.0) || !(lambda > 0.0)) {
        throw std::domain_error("tie_sets: gamma and lambda must be positive");
    }
    const auto lz = log_z(data, lambda);
    TieSets sets;
    for (std::size_t i = 0; i + 1 < data.size(); ++i) {
        switch (detail::region_of(gamma * lz[i], lz[i + 1], tie_tol)) {
            case PairRegion::S1: sets.a1.push_back(i); break;
            case PairRegion::S2: sets.a2.push_back(i); break;
            case PairRegion::C: sets.a0.push_back(i); break;
        }
    }
    return sets;
}

double chain_loglik(std::span<const double> data, const ProcessParams& p,
                    double tie_tol) {
    check_path(data, 2, "chain_loglik");
    const std::size_t n = data.size();
    const double a0 = p.alpha0(), a1 = p.alpha1(), lam = p.lambda();
    const auto lz = log_z(data, lam);
    double ll = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        PairRegion r = detail::region_of(a0 * lz[i], a1 * lz[i + 1], tie_tol);
        ll += detail::pair_log_density_at(r, data[i], data[i + 1], lz[i],
                                          lz[i + 1], a0, a1, lam);
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        ll -= detail::marginal_log_pdf_at(data[i], lz[i], a0 + a1, lam);
    }
    return ll;
}

double profile_alpha_case1(double lambda, std::span<const double> data,
                           double tie_tol) {
    return profile_alpha1_case2(1.0, lambda, data, tie_tol);
}

double profile_alpha1_case2(double gamma, double lambda,
                            std::span<const double> data, double tie_tol) {
    check_path(data, 2, "profile");
    if (!(gamma > 0.0) || !(lambda > 0.0)) {
        throw std::domain_error("profile: gamma and lambda must be positive");
    }
    return profile_eval(gamma, lambda, data, tie_tol).alpha1;
}

ConvergenceError::ConvergenceError(const std::string& what, FitReport best)
    : std::runtime_error(what), best_(std::move(best)) {}

FitReport fit_case1(std::span<const double> data, const FitOptions& opts) {
    check_path(data, 3, "fit_case1");
    const double tol = opts.tie_tol;
    ScaleBracket br =
        opts.lambda_bracket ? *opts.lambda_bracket : ScaleBracket::default_for(data);

    std::size_t evals = 0;
    auto value_at = [&](double lam) {
        ++evals;
        try {
            return profile_eval(1.0, lam, data, tol).value;
        } catch (const std::domain_error&) {
            return -kInf;
        }
    };

    Best1D best = max_over_lambda(value_at, br, opts, opts.keep_grid);
    double alpha = profile_eval(1.0, best.lam, data, tol).alpha1;
    ProcessParams est(alpha, alpha, best.lam);
    FitReport report{ShapeModel::EqualShapes,
                     est,
                     chain_loglik(data, est, tol),
                     tol,
                     OptimizerTrace{evals, best.lo, best.hi, 0.0, best.widened},
                     std::move(best.curve),
                     ContourGrid{},
                     std::nullopt};
    if (best.edge) {
        throw ConvergenceError(
            "fit_case1: profile maximum stayed on the bracket edge after widening",
            std::move(report));
    }
    return report;
}

FitReport fit_case2(std::span<const double> data, const FitOptions& opts) {
    check_path(data, 4, "fit_case2");
    const double tol = opts.tie_tol;
    ScaleBracket br =
        opts.lambda_bracket ? *opts.lambda_bracket : ScaleBracket::default_for(data);

    std::size_t evals = 0;
    auto pl = [&](double g, double lam) {
        ++evals;
        try {
            return profile_eval(g, lam, data, tol).value;
        } catch (const std::domain_error&) {
            return -kInf;
        }
    };

    auto finalize = [&](double g, double lam, const OptimizerTrace& trace,
                        ProfileCurve curve, ContourGrid contour) {
        double a1 = profile_eval(g, lam, data, tol).alpha1;
        ProcessParams est(g * a1, a1, lam);
        return FitReport{ShapeModel::UnequalShapes,
                         est,
                         chain_loglik(data, est, tol),
                         tol,
                         trace,
                         std::move(curve),
                         std::move(contour),
                         std::nullopt};
    };

    // Pinned ratio: only the scale is free, same machinery as the
    // equal-shape fit.
    if (opts.pin_gamma) {
        const double g = *opts.pin_gamma;
        if (!(g > 0.0)) {
            throw std::domain_error("fit_case2: pinned gamma must be positive");
        }
        auto value_at = [&](double lam) { return pl(g, lam); };
        Best1D best = max_over_lambda(value_at, br, opts, opts.keep_grid);
        FitReport report =
            finalize(g, best.lam,
                     OptimizerTrace{evals, best.lo, best.hi, 0.0, best.widened},
                     std::move(best.curve), ContourGrid{});
        if (best.edge) {
            throw ConvergenceError(
                "fit_case2: pinned profile maximum stayed on the bracket edge",
                std::move(report));
        }
        return report;
    }

    // Coarse grid over (gamma, lambda) picks the simplex start, mirroring
    // contour-plot initialization; gamma = 1 is always a grid line.
    if (opts.gamma_grid_points < 2 || !(opts.gamma_lo > 0.0) ||
        !(opts.gamma_hi > opts.gamma_lo)) {
        throw std::invalid_argument("fit_case2: bad gamma grid options");
    }
    std::vector<double> gammas =
        log_spaced(opts.gamma_lo, opts.gamma_hi, opts.gamma_grid_points);
    if (std::none_of(gammas.begin(), gammas.end(),
                     [](double g) { return g == 1.0; })) {
        gammas.push_back(1.0);
        std::sort(gammas.begin(), gammas.end());
    }
    std::vector<double> lams = log_spaced(
        br.lo, br.hi, lambda_grid_points(br, opts.lambda_grid_per_decade));

    ContourGrid contour;
    double start_g, start_lam;
    if (opts.init) {
        start_g = opts.init->first;
        start_lam = opts.init->second;
    } else {
        double grid_best = -kInf;
        contour.gamma = gammas;
        contour.lambda = lams;
        contour.value.resize(gammas.size() * lams.size());
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < gammas.size(); ++i) {
            for (std::size_t j = 0; j < lams.size(); ++j) {
                double v = pl(gammas[i], lams[j]);
                contour.value[i * lams.size() + j] = v;
                if (v > grid_best) {
                    grid_best = v;
                    bi = i;
                    bj = j;
                }
            }
        }
        if (grid_best == -kInf) {
            throw std::domain_error(
                "fit_case2: likelihood degenerate over the entire grid");
        }
        start_g = gammas[bi];
        start_lam = lams[bj];
        if (!opts.keep_grid) contour = ContourGrid{};
    }

    auto neg = [&](std::array<double, 2> u) {
        return -pl(std::exp(u[0]), std::exp(u[1]));
    };
    const double step_g =
        std::log(gammas[1] / gammas[0]);  // one grid cell in log coords
    const double step_l = std::log(lams[1] / lams[0]);
    NmResult nm = nelder_mead_2d(neg, {std::log(start_g), std::log(start_lam)},
                                 {step_g, step_l}, 1e-12, 1e-9,
                                 opts.max_evaluations);

    double best_g = std::exp(nm.x[0]);
    double best_lam = std::exp(nm.x[1]);
    double best_val = -nm.f;

    // The pinned gamma=1 refinement is kept as a candidate: it is the same
    // search the equal-shape fit runs, so the nested model can never come
    // out ahead of this fit.
    ProfileCurve curve;
    try {
        auto value_at = [&](double lam) { return pl(1.0, lam); };
        Best1D eq = max_over_lambda(value_at, br, opts, false);
        if (!eq.edge && eq.value > best_val) {
            best_g = 1.0;
            best_lam = eq.lam;
            best_val = eq.value;
        }
    } catch (const std::domain_error&) {
        // equal-shape profile degenerate; keep the simplex result
    }

    FitReport report = finalize(
        best_g, best_lam,
        OptimizerTrace{evals, br.lo, br.hi, nm.size, false},
        std::move(curve), std::move(contour));
    if (!nm.converged && best_val == -nm.f) {
        throw ConvergenceError(
            "fit_case2: simplex exhausted its evaluation budget",
            std::move(report));
    }
    return report;
}

FitReport bootstrap_ci(std::span<const double> data, const FitReport& fit,
                       std::size_t replicates, double level,
                       std::uint64_t seed, const FitOptions& opts) {
    if (replicates < 100) {
        throw std::invalid_argument("bootstrap_ci: need at least 100 replicates");
    }
    if (!(level > 0.0) || !(level < 1.0)) {
        throw std::invalid_argument("bootstrap_ci: level must lie in (0,1)");
    }
    check_path(data, 3, "bootstrap_ci");

    FitOptions ropts = opts;
    ropts.keep_grid = false;
    ropts.init.reset();
    ropts.pin_gamma.reset();

    std::vector<std::optional<std::array<double, 3>>> draws(replicates);
    for_each_index(replicates, [&](std::size_t b) {
        Series path = simulate(data.size(), fit.estimates, derive_seed(seed, b));
        try {
            FitReport r = (fit.model == ShapeModel::EqualShapes)
                              ? fit_case1(path.values, ropts)
                              : fit_case2(path.values, ropts);
            draws[b] = std::array<double, 3>{r.estimates.alpha0(),
                                             r.estimates.alpha1(),
                                             r.estimates.lambda()};
        } catch (const std::exception&) {
            draws[b] = std::nullopt;
        }
    });

    std::array<std::vector<double>, 3> ok;
    std::size_t failures = 0;
    for (const auto& d : draws) {
        if (!d) {
            ++failures;
            continue;
        }
        for (int j = 0; j < 3; ++j) ok[static_cast<std::size_t>(j)].push_back((*d)[static_cast<std::size_t>(j)]);
    }
    if (failures * 10 > replicates) {
        throw ConvergenceError("bootstrap_ci: more than 10% of replicate fits failed",
                               fit);
    }

    const double q_lo = 0.5 * (1.0 - level);
    const double q_hi = 0.5 * (1.0 + level);
    auto interval = [&](std::vector<double>& v) {
        std::sort(v.begin(), v.end());
        return Interval{percentile_sorted(v, q_lo), percentile_sorted(v, q_hi)};
    };

    BootstrapCI ci;
    ci.replicates = replicates - failures;
    ci.failures = failures;
    ci.level = level;
    ci.seed = seed;
    ci.alpha0 = interval(ok[0]);
    ci.alpha1 = interval(ok[1]);
    ci.lambda = interval(ok[2]);

    FitReport out = fit;
    out.bootstrap = ci;
    return out;
}

}  // namespace geproc
