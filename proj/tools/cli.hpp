#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "geproc/inference.hpp"
#include "geproc/series.hpp"

namespace geproc::cli {

// Exit codes: 0 success, 2 usage, 3 data, 4 convergence.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitConvergence = 4;

/// Unreadable input, malformed records, or observations that are not
/// positive after the affine transform.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IngestOptions {
    int column = 1;  // 1-based
    bool skip_header = false;
    Transform transform{};
};

/// Reads one record per line from delimited text (comma or whitespace),
/// selects the column, applies (x - shift) / divisor, and rejects
/// non-positive results naming the offending line. Lines that are empty or
/// start with '#' are skipped.
Series ingest(const std::string& path, const IngestOptions& opts = {});

struct SimulateArgs {
    std::size_t n = 100;
    double alpha0 = 1.0, alpha1 = 1.0, lambda = 1.0;
    std::uint64_t seed = 0;
    std::string out;  // empty = stdout
};
void run_simulate(const SimulateArgs& args, std::ostream& out);

struct FitArgs {
    std::string path;
    IngestOptions ingest;
    ShapeModel model = ShapeModel::EqualShapes;
    std::size_t boot = 0;  // 0 disables the bootstrap
    double level = 0.95;
    std::uint64_t seed = 0;
    double tie_tol = kDefaultTieTol;
    std::string grid_out;    // profile table (equal) or contour grid (unequal)
    std::string report_out;  // empty = stdout
};
void run_fit(const FitArgs& args, std::ostream& out);

struct GofArgs {
    std::string path;
    IngestOptions ingest;
    std::uint64_t seed = 0;
    std::size_t sims = 5000;
    double quantile = 0.90;
    double tie_tol = kDefaultTieTol;
    std::string report_out;
};
void run_gof(const GofArgs& args, std::ostream& out);

struct AnalyzeArgs {
    std::string path;
    IngestOptions ingest;
    std::uint64_t seed = 0;
    std::size_t boot = 200;
    double level = 0.95;
    double tie_tol = kDefaultTieTol;
    std::size_t sims = 5000;
    double quantile = 0.90;
    std::string report_out;
};
void run_analyze(const AnalyzeArgs& args, std::ostream& out);

/// Maps thrown errors onto the exit-code contract.
template <typename Fn>
int guarded(Fn&& fn, std::ostream& err);

}  // namespace geproc::cli
