#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "samd/dynamics.hpp"

namespace samd {

/// One experiment scenario. Stored as flat `key = value` lines; dotted keys
/// group related settings and `#` starts a comment.
struct ScenarioConfig {
    std::string system = "samd";  ///< md | smd | amd | samd | nesterov
    double beta = 2.0;

    std::string objective = "sum-exp";  ///< sum-exp | rank1-quadratic | quadratic
    std::string objective_source = "default";  ///< default | seed | inline
    int dim = 3;
    int terms = 3;
    std::uint64_t objective_seed = 1;
    std::vector<double> coefficients;  ///< row-major, inline source only

    std::string mirror = "entropic";  ///< entropic | euclidean

    std::optional<double> alpha_r = 1.0;  ///< empty means "auto"
    double alpha_s = 0.5;
    double coef_r = 1.0;
    double coef_s = 1.0;
    std::string eta = "rdot";  ///< rdot (eta = r-dot) | power
    double eta_coef = 1.0;
    double eta_exponent = 0.0;

    std::string noise = "scalar";  ///< scalar | diagonal | state-scaled
    double sigma0 = 0.1;
    double alpha_sigma = 0.0;
    std::vector<double> noise_weights;  ///< state-scaled factor weights

    double t0 = 1.0;
    double t_end = 200.0;
    double h = 1e-2;
    int stride = 10;

    int count = 100;
    std::uint64_t seed = 20171030;
    std::string out_dir = "out";
    bool svg = true;

    std::vector<double> sweep_alpha_sigma = {0.0};
    std::vector<double> sweep_alpha_s = {0.5};
    std::vector<double> sweep_alpha_r = {1.0};
    std::vector<double> compare_sigma0 = {0.1};

    /// alpha_r, resolved from alpha_s - alpha_sigma + 1/2 when set to auto.
    /// Throws InvalidRegime when auto is requested outside that formula's range.
    double resolved_alpha_r() const;

    RateBundle rates() const;
    MirrorMap mirror_map() const;
    Objective make_objective() const;
    NoiseModel noise_model() const;
    SystemSpec system_spec() const;
    SimulationOptions simulation_options() const;

    /// Every violated constraint, empty when the configuration is usable.
    std::vector<std::string> violations() const;
    /// Throws ValidationError listing all violations.
    void validate() const;

    bool operator==(const ScenarioConfig&) const = default;
};

/// Parses config text. Throws ParseError (with line number) on syntax errors,
/// unknown or duplicate keys and malformed values, then ValidationError.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

/// Parses without validating (for round trips and manifests).
ScenarioConfig parse_config_unchecked(const std::string& text);

/// Canonical text form; parse_config_unchecked(emit_config(c)) == c.
std::string emit_config(const ScenarioConfig& config);

/// Recovers the scenario embedded in a manifest (its `config.*` lines).
ScenarioConfig config_from_manifest(const std::string& manifest_text);

/// FNV-1a hash of the canonical text form, as 16 hex digits.
std::string config_hash(const ScenarioConfig& config);

}  // namespace samd
