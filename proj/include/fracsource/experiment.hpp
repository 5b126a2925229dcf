#pragma once

#include "fracsource/profiles.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fracsource {

/// Malformed config text or override (CLI exit code 2).
class ConfigParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Well-formed config with a bad or missing value (exit code 3). key() names it.
class ConfigValidationError : public std::runtime_error {
public:
    ConfigValidationError(std::string key, const std::string& what)
        : std::runtime_error(key + ": " + what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

struct SolverParams {
    std::optional<double> K;  ///< fixed point / thresholding; computed when unset
    double beta = 1e-8;
    std::optional<double> mu;
    double delta = 0.0;
    double tol = 1e-10;
    std::size_t m_max = 200;
    std::size_t smoothing_width = 5;
    double point_tolerance = 1e-8;
    double gamma = 1.0;  ///< smoothness index for the Holder ratio
};

struct SweepParams {
    /// caputo_l1 | volterra | duhamel | x0-distance
    std::string target = "caputo_l1";
    std::vector<std::size_t> n_steps{64, 128, 256, 512};
    std::vector<double> x0;
};

struct ExperimentConfig {
    /// forward | invert-rho-volterra | invert-rho-fixedpoint | invert-g-final |
    /// invert-g-interior | ml-eval | sweep
    std::string mode;
    double L = 1.0;
    std::size_t N = 64;
    double T = 1.0;
    std::size_t n_steps = 512;
    double alpha = 0.5;
    GProfile g;
    RhoProfile rho;
    double x0 = 0.5;
    double omega_a = 0.1;
    double omega_b = 0.35;
    std::size_t mesh_intervals = 0;  ///< 0: 8 N
    double noise_level = 0.0;
    std::uint64_t seed = 1;
    SolverParams solver;
    double ml_alpha = 0.5;
    double ml_beta = 1.0;
    std::vector<double> ml_z{-1.0};
    SweepParams sweep;
    std::string output = "fracsource_out.csv";
};

/// Sets a dotted key ("grid.n_steps") from "key=value"; the value is read as
/// JSON when it parses, as a string otherwise. Throws ConfigParseError.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Validates every field before anything runs. Throws ConfigValidationError.
ExperimentConfig parse_config(const nlohmann::json& doc);

struct ResultTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct ResultSet {
    std::vector<std::pair<std::string, std::string>> summary;
    /// The first table goes to the output path, the others next to it.
    std::vector<ResultTable> tables;
};

/// Runs the configured mode. Solver failures propagate as SolverError.
ResultSet run_experiment(const ExperimentConfig& config);

/// Numbers as %.17g, '\n' line endings, header line first.
std::string format_csv(const ResultTable& table);

/// Writes tables[0] to output, tables[i] to <stem>_<name>.csv and the summary
/// to <stem>_summary.csv. Returns the written paths.
std::vector<std::string> write_results(const ResultSet& results, const std::string& output);

}  // namespace fracsource
