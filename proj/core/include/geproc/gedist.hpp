#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace geproc {

/// Parameters of the two-parameter generalized exponential distribution
/// GE(shape, scale), with CDF (1 - e^{-scale * t})^shape on t > 0.
/// Invalid parameters are rejected here, not in the evaluators.
class GEParams {
  public:
    GEParams(double shape, double scale);

    double shape() const { return shape_; }
    double scale() const { return scale_; }

  private:
    double shape_;
    double scale_;
};

/// CDF. Zero for t <= 0, monotone nondecreasing, -> 1 as t -> infinity.
double ge_cdf(double t, const GEParams& p);

/// Density shape * scale * e^{-scale t} (1 - e^{-scale t})^{shape - 1} on
/// t > 0, zero otherwise. Computed as exp(ge_log_pdf) so large shapes do
/// not underflow.
double ge_pdf(double t, const GEParams& p);

/// Log density; -inf for t <= 0.
double ge_log_pdf(double t, const GEParams& p);

/// Inverse CDF, -ln(1 - u^{1/shape}) / scale, evaluated with expm1/log1p
/// switches so both tails keep relative accuracy.
/// Throws std::domain_error unless 0 < u < 1.
double ge_quantile(double u, const GEParams& p);

/// n i.i.d. draws by inverse transform; deterministic given seed.
std::vector<double> ge_sample(std::size_t n, const GEParams& p, std::uint64_t seed);

/// Search interval for the scale in profile fits. The default
/// [0.01/mean, 100/mean] is scale-equivariant and wide enough for any
/// plausible MLE.
struct ScaleBracket {
    double lo;
    double hi;

    static ScaleBracket default_for(std::span<const double> data);
};

struct GEFit {
    GEParams params;
    double loglik;
    bool at_bracket_edge;       // profile maximum sat on the bracket boundary
    std::size_t evaluations;
};

/// Maximum likelihood for i.i.d. GE data by profiling: for fixed scale the
/// shape MLE is -n / sum_i log(1 - e^{-scale x_i}); the remaining 1-D
/// profile log-likelihood is maximized by grid scan plus golden section.
/// Throws std::domain_error on non-positive data, fewer than 3 points, or a
/// (near-)constant sample, for which no interior MLE exists.
GEFit ge_fit_iid(std::span<const double> data,
                 std::optional<ScaleBracket> bracket = std::nullopt);

}  // namespace geproc
