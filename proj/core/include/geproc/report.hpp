#pragma once

#include <string>

#include <json.hpp>

#include "geproc/gof.hpp"
#include "geproc/inference.hpp"
#include "geproc/series.hpp"

namespace geproc {

/// JSON document for a FitReport. Fixed field names:
///   model, alpha0, alpha1, lambda, loglik, ci, B, level, seed.
/// "ci" is null until bootstrap intervals exist; then it maps each parameter
/// to [lo, hi].
nlohmann::ordered_json to_json(const FitReport& r);

nlohmann::ordered_json to_json(const GofReport& r);

/// Consolidated document for the full analysis pipeline: input provenance,
/// both fits, their log-likelihood comparison, and the gof block.
nlohmann::ordered_json analyze_document(const Series& input,
                                        const std::string& source,
                                        const FitReport& equal,
                                        const FitReport& unequal,
                                        const GofReport& gof,
                                        std::uint64_t seed);

}  // namespace geproc
