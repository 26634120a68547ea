#pragma once

#include <cstdint>
#include <optional>

#include "qmt/contfrac.hpp"

namespace qmt {

inline constexpr const char* kToolVersion = "0.1.0";

// Seeded sampler ranges. Real-valued points only; complex points come in via
// explicit point files.
struct SamplerSpec {
    double q_min = 0.1, q_max = 0.5;
    double z_min = 0.1, z_max = 0.6;
    std::vector<int> alphas = {-1, 0, 1, 2};
    double c_min = 0.05, c_max = 0.3;
    double c_sep = 0.01;
    std::size_t count = 20;
    std::uint64_t seed = 12345;
};

struct SuiteConfig {
    std::vector<std::string> identities; // empty = full catalog
    std::optional<std::string> points_file;
    SamplerSpec sampler;
    unsigned precision = 50;
    std::size_t max_terms = 500;
    std::string tail_tol = "1e-40";   // materialized as Real after set_precision
    std::string assert_tol = "1e-30";
    std::string out_path = "qmt_report.jsonl";
    unsigned threads = 1;
};

struct Rejection {
    std::string identity;
    std::size_t point_index;
    std::string reason;
};

struct RunOutcome {
    std::vector<ResidualRecord> records;
    std::vector<Rejection> rejections;
    bool established_failure = false;
    std::string report_text; // full JSON-lines report, ready to write
};

// Evaluates every (identity, point) pair; every pair lands as records (one
// per transcription variant) or exactly one listed rejection. Deterministic
// for a fixed config regardless of thread count. ConfigError on bad input.
RunOutcome run_suite(const SuiteConfig& config);

// IoError when the path cannot be written.
void write_text_file(const std::string& path, const std::string& text);

// Point files: one point per line, `q=<v> z=<v> t=<v> alpha=<v> c1=<v> c2=<v>`,
// complex values as re+imi; '#' starts a comment. Missing fields default to 0.
std::vector<ParameterPoint> load_point_file(const std::string& path);
std::string format_point_line(const ParameterPoint& p);

// Stable catalog listing: one line per identity, trust class and parameters.
std::string list_identities_text();

// One-record stable output of a single function evaluation.
std::string eval_record_line(const FunctionId& f, const ParameterPoint& p,
                             const TruncationPolicy& pol,
                             Psi3Denominator psi3 = Psi3Denominator::AsPrinted);

} // namespace qmt
