#pragma once

// Batch scenario runner behind the volkov-fp executable.
//
// A run reads one JSON config, validates all of it, computes, and only then
// writes artifacts: one or more CSV tables (each opened by a comment line
// with the SHA-256 of the config) and summary.json with every assertion's
// measured value, tolerance and verdict.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "volkov/io.hpp"
#include "volkov/projector.hpp"
#include "volkov/spectral.hpp"

namespace volkov::cli {

using io::json;

enum class ExitCode : int { pass = 0, assertion_failure = 1, config_error = 2, domain_error = 3 };

inline constexpr int schema_version = 1;
inline constexpr const char* workers_env = "VOLKOV_FP_WORKERS";

const std::vector<std::string>& scenario_names();

// ---------------------------------------------------------------------------
// Configuration

struct Range {
    double lo;
    double hi;
};

/// Tensor axis written as [lo, hi, n]; n = 1 requires lo = hi.
struct AxisSpec {
    double lo;
    double hi;
    std::size_t n;
    Axis axis() const;
};

struct DiracResidualParams {
    std::size_t modes = 1000;
    Range k{-1.0, 1.0};
    Range u_magnitude{0.2, 2.0};
    Range mass{0.5, 2.0};
    Range point{-5.0, 5.0};
    double relative_residual = 0.0;  // 0 selects 1e-10 (closed-form phase) or 1e-8
};

struct NullProductParams {
    std::size_t packets = 50;
    double mass = 1.0;
    AxisSpec u{0.3, 1.5, 4};
    AxisSpec k2{-0.5, 0.5, 3};
    AxisSpec k3{-0.5, 0.5, 3};
    std::vector<double> s_values;  // default −10, −9, …, 10
    double relative_deviation = 1e-10;
};

struct MassPairingParams {
    std::size_t draws = 200;
    std::optional<Range> amplitude;  // redraw the harmonic amplitude per draw
    Range mass{0.5, 2.0};
    Range k{-1.0, 1.0};
    Range u_magnitude{0.2, 2.0};
    Range s{-10.0, 10.0};
    double relative_gap = 1e-10;
};

struct MassOscillationParams {
    Range interval{0.8, 1.2};
    std::size_t masses = 21;
    std::optional<MassWeight> weight;  // default: bump over the interval
    bool disjoint_check = true;
    AxisSpec u{-0.08, -0.04, 9};
    AxisSpec k2{-0.2, 0.2, 5};
    AxisSpec k3{-0.2, 0.2, 5};
    std::vector<double> epsilons{0.1, 0.05, 0.025};
    SGrid s_grid{};
    double relative_gap = 1e-2;
    double disjoint_ratio = 1e-3;
};

struct DecayScanParams {
    double mass = 1.0;
    AxisSpec u{-2.0, -0.2, 801};
    AxisSpec k2{0.0, 0.0, 1};
    AxisSpec k3{0.0, 0.0, 1};
    double weight_center = -1.1;
    double weight_width = 0.25;
    std::vector<double> s_values{-5.0, 0.0, 5.0};
    AxisSpec l{20.0, 200.0, 721};
    double min_order = 4.0;
    std::optional<double> single_mode_u = -0.7;
};

struct FpKernelParams {
    double mass = 1.0;
    AxisSpec u{-1.5, -0.3, 3};
    AxisSpec k2{-0.5, 0.5, 2};
    AxisSpec k3{0.0, 0.0, 1};
    std::vector<double> s_values{-2.0, -0.5, 0.0, 1.0};
    std::vector<double> s_tilde_values{-1.0, 0.0, 0.7};
    double relative_deviation = 1e-12;
};

struct ModeSpec {
    double k2 = 0.3;
    double k3 = 0.0;
    double u = -0.5;
    double m = 1.0;
    ModeParams params() const { return {k2, k3, u, m}; }
};

struct SidebandsParams {
    ModeSpec mode;
    int n_max = 3;
    double periods = 32.0;
    double step = 0.1;
    double s_tilde = 0.0;
    int pad = 4;
    double window_fraction = 0.05;  // Gaussian window width as a fraction of the span
    double amplitude_relative = 1e-4;
    double parseval = 1e-10;
    double frequency_bins = 1.0;
};

struct WavefrontParams {
    ModeSpec mode;
    WindowFunction window = WindowFunction::bump(0.0, 10.0);
    double v_lo = -60.0;
    double v_hi = 60.0;
    double v_step = 0.25;
    Range fit{5.0, 50.0};
    double min_order = 6.0;
    double plancherel_relative = 1e-6;
};

using ScenarioParams = std::variant<DiracResidualParams, NullProductParams, MassPairingParams, MassOscillationParams,
                                    DecayScanParams, FpKernelParams, SidebandsParams, WavefrontParams>;

struct ScenarioConfig {
    std::string scenario;
    std::uint64_t seed = 1;
    std::optional<unsigned> workers;
    std::optional<std::filesystem::path> output_dir;
    PlaneWavePotential potential = PlaneWavePotential::zero();
    ScenarioParams params;
    std::string hash;  // SHA-256 of the document without "workers" and "output_dir"
};

/// Validates the whole document. Throws ConfigError on any schema violation.
ScenarioConfig parse_config(const std::string& scenario, const json& doc, const std::filesystem::path& base_dir = {});

/// Hex SHA-256 of the canonical dump of doc with run-local keys removed.
std::string config_hash(const json& doc);

// ---------------------------------------------------------------------------
// Execution

struct Assertion {
    std::string name;
    std::string anchor;
    double measured = 0.0;
    double tolerance = 0.0;
    std::string relation;  // "<=", ">=", "==" or "<"
    bool pass = false;
};

struct Table {
    std::string file;
    std::string body;  // header row and data rows
};

struct ScenarioResult {
    std::string scenario;
    std::string anchor;
    std::vector<Assertion> assertions;
    std::vector<Table> tables;
    json report = json::object();
    bool pass() const;
};

/// Runs a validated scenario. Numerical failures propagate as DomainError
/// or GridError; nothing is written.
ScenarioResult execute(const ScenarioConfig& cfg, unsigned workers);

json summary_json(const ScenarioResult& result, const std::string& hash);

/// Writes every table (hash comment line first) and summary.json into dir.
void write_artifacts(const ScenarioResult& result, const std::string& hash, const std::filesystem::path& dir);

// ---------------------------------------------------------------------------
// Command line

struct Invocation {
    std::string scenario;
    std::filesystem::path config;
    std::optional<std::filesystem::path> out;
    std::optional<unsigned> workers;
};

/// Full run with exit-code mapping: 0 pass, 1 assertion failure, 2 config
/// error, 3 numerical-domain or undersampled-grid error.
int run(const Invocation& inv, std::ostream& out, std::ostream& err);

/// Parses argv and calls run().
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace volkov::cli
