#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "qcircle/analysis.hpp"
#include "qcircle/beltrami.hpp"
#include "qcircle/geometry.hpp"

namespace qcircle {

enum class ScenarioKind { ball, prop2, ba_extension, custom_file };

const char* to_string(ScenarioKind k);
ScenarioKind parse_scenario_kind(const std::string& s);

struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::ball;
    // ball
    double c = 0.3;
    cplx center{0.0, 2.0};
    double radius = 1.0;
    double mollify_fraction = 0.25;  ///< ramp width as a fraction of the radius
    // prop2 / ba_extension
    double K = 1.5;
    std::string boundary_map = "power";  ///< "power" or "identity"
    // custom_file
    std::string field_path;
    // grid and numerics
    double L = 8.0;
    std::size_t n = 128;
    double tol = 1e-8;
    double opnorm_tol = 1e-6;
    int max_iter = 200;
    int opnorm_max_iter = 1000;
    std::uint64_t seed = 0;
    std::size_t probe_count = 8;
    double trace_window = 0.0;  ///< 0 means L
    std::size_t trace_samples = 512;
    double cauchy_tol = 1e-4;
    std::string output_dir = ".";

    /// Throws DomainError on any inconsistency; performs no computation.
    void validate() const;
    double effective_window() const { return trace_window > 0.0 ? trace_window : L; }
};

/// Canonical JSON of the numerical parameters (output directory excluded).
nlohmann::ordered_json config_to_json(const ScenarioConfig& cfg);
/// FNV-1a 64 of the canonical JSON dump, as 16 hex digits.
std::string config_hash(const ScenarioConfig& cfg);

nlohmann::ordered_json to_json(const SolveReport& r);
nlohmann::ordered_json to_json(const OperatorStats& s);
nlohmann::ordered_json to_json(const CarlesonReport& r);
nlohmann::ordered_json to_json(const ChordArcReport& r);
nlohmann::ordered_json to_json(const CauchyNormReport& r);
nlohmann::ordered_json to_json(const BilipschitzProfile& p);

struct ScenarioOutcome {
    nlohmann::ordered_json report;
    bool converged = true;
    std::vector<std::string> files;
};

/// Runs the full measurement chain, writes report.json and trace.csv under output_dir.
ScenarioOutcome run_scenario(const ScenarioConfig& cfg);

struct Theorem1Config {
    double L = 32.0;
    std::size_t n = 256;
    std::vector<double> radii{0.5, 1.0, 2.0, 4.0};
    std::vector<double> c_values{0.2, 0.5, 0.8};
    std::vector<double> t_values{0.2, 0.4, 0.8};
    double x0 = 0.0;
    double mollify_fraction = 0.0;
    double tol = 1e-6;
    int max_iter = 2000;
    std::string output_dir = ".";

    void validate() const;
};

struct Theorem1Row {
    double r, c;
    double carleson;
    double opnorm;
    double ratio;  ///< opnorm^2 / carleson
    int iterations;
};

struct Theorem1Result {
    std::vector<Theorem1Row> rows;
    std::vector<double> t_values;
    std::vector<double> t_opnorms;
    double slope_norm_sq = 0.0;  ///< log-log slope of opnorm^2 against t
    double bracket_lo = 0.0, bracket_hi = 0.0;
    double bracket_C = 0.0;  ///< smallest C with all ratios in [1/C, C]
    nlohmann::ordered_json summary;
};

/// Writes theorem1.csv and theorem1.json under output_dir.
Theorem1Result compare_theorem1(const Theorem1Config& cfg);

/// Writes theorem2.json under output_dir.
nlohmann::ordered_json verify_theorem2(const ScenarioConfig& cfg);

/// Spectral sanity checks on a grid; writes selftest.json under output_dir.
nlohmann::ordered_json transform_selftest(double L, std::size_t n, const std::string& output_dir);

/// Writes pretty JSON with a trailing newline.
void write_json(const nlohmann::ordered_json& j, const std::string& path);

}  // namespace qcircle
