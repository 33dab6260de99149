#include "geproc/report.hpp"

namespace geproc {

namespace {

using json = nlohmann::ordered_json;

json interval_json(const Interval& iv) { return json::array({iv.lo, iv.hi}); }

}  // namespace

nlohmann::ordered_json to_json(const FitReport& r) {
    json j;
    j["model"] = r.model == ShapeModel::EqualShapes ? "equal" : "unequal";
    j["alpha0"] = r.estimates.alpha0();
    j["alpha1"] = r.estimates.alpha1();
    j["lambda"] = r.estimates.lambda();
    j["loglik"] = r.loglik;
    if (r.bootstrap) {
        const BootstrapCI& ci = *r.bootstrap;
        j["ci"] = json{{"alpha0", interval_json(ci.alpha0)},
                       {"alpha1", interval_json(ci.alpha1)},
                       {"lambda", interval_json(ci.lambda)}};
        j["B"] = ci.replicates + ci.failures;
        j["level"] = ci.level;
        j["seed"] = ci.seed;
        j["bootstrap_failures"] = ci.failures;
    } else {
        j["ci"] = nullptr;
        j["B"] = 0;
        j["level"] = nullptr;
        j["seed"] = nullptr;
    }
    j["tie_tol"] = r.tie_tol;
    j["trace"] = json{{"evaluations", r.trace.evaluations},
                      {"bracket", json::array({r.trace.bracket_lo, r.trace.bracket_hi})},
                      {"simplex_size", r.trace.simplex_size},
                      {"widened", r.trace.widened}};
    return j;
}

nlohmann::ordered_json to_json(const GofReport& r) {
    json j;
    auto fit = [](const MarginalFit& f) {
        return json{{"shape", f.shape},
                    {"scale", f.scale},
                    {"loglik", f.loglik},
                    {"at_bracket_edge", f.at_bracket_edge}};
    };
    auto ks = [](const KsResult& k) {
        return json{{"distance", k.distance},
                    {"p_value", k.p_value},
                    {"corrected_stat", k.corrected_stat}};
    };
    j["odd"] = json{{"fit", fit(r.odd_fit)},
                    {"ks", ks(r.odd_ks)},
                    {"runs_p", r.odd_runs_p}};
    j["even"] = json{{"fit", fit(r.even_fit)},
                     {"ks", ks(r.even_ks)},
                     {"runs_p", r.even_runs_p}};
    j["acf"] = json{{"lag1", r.acf_lag1}, {"lag2", r.acf_lag2}};
    j["acf_null_band"] = json{{"lag1_upper", r.band_lag1_upper},
                              {"lag2_upper", r.band_lag2_upper},
                              {"quantile", r.band_quantile},
                              {"simulations", r.band_sims}};
    j["verdicts"] = json{{"marginals_ok", r.marginals_ok},
                         {"independence_ok", r.independence_ok},
                         {"acf_ok", r.acf_ok}};
    j["ks_ignores_estimation"] = r.ks_ignores_estimation;
    return j;
}

nlohmann::ordered_json analyze_document(const Series& input,
                                        const std::string& source,
                                        const FitReport& equal,
                                        const FitReport& unequal,
                                        const GofReport& gof,
                                        std::uint64_t seed) {
    json j;
    j["input"] = json{{"source", source},
                      {"n", input.size()},
                      {"shift", input.transform.shift},
                      {"divisor", input.transform.divisor}};
    j["fit_equal"] = to_json(equal);
    j["fit_unequal"] = to_json(unequal);
    j["loglik"] = json{{"equal", equal.loglik},
                       {"unequal", unequal.loglik},
                       {"difference", unequal.loglik - equal.loglik}};
    j["gof"] = to_json(gof);
    j["seed"] = seed;
    return j;
}

}  // namespace geproc
