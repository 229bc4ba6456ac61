#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "samd/analysis.hpp"
#include "samd/config.hpp"

namespace samd {

struct RunContext {
    std::string out_dir;
    int threads = 0;
};

/// One trajectory (index 0) to trajectory.csv plus manifest.txt and plots.
void cmd_simulate(const ScenarioConfig& config, const RunContext& ctx, std::ostream& log);

/// ensemble.csv, rate_fit.txt, manifest.txt and plots.
void cmd_ensemble(const ScenarioConfig& config, const RunContext& ctx, std::ostream& log);

struct RatesRow {
    double alpha_sigma = 0.0;
    double alpha_s = 0.0;
    double alpha_r = 0.0;
    double slope = 0.0;
    double stderr_slope = 0.0;
    double predicted_slope = 0.0;  ///< alpha_sigma - 1/2
    double bound_slope = 0.0;
    double formula_alpha_r = 0.0;  ///< alpha_s - alpha_sigma + 1/2
    bool best = false;             ///< steepest fitted slope in its (alpha_sigma, alpha_s) cell
    std::string note;
};

/// Sweeps every (alpha_sigma, alpha_s, alpha_r) of the config with eta = r-dot,
/// fits the mean-gap slope on [t_end / 10, t_end] and flags the best alpha_r per cell.
std::vector<RatesRow> rates_sweep(const ScenarioConfig& config, int threads);
std::string rates_csv(const std::vector<RatesRow>& rows);
void cmd_rates(const ScenarioConfig& config, const RunContext& ctx, std::ostream& log);

/// Paired SMD (alpha_s = max(0, alpha_sigma + 1/2)) and SAMD
/// (alpha_r = alpha_s - alpha_sigma + 1/2) ensembles on identical noise
/// streams, one side-by-side CSV per value of compare.sigma0.
void cmd_compare(const ScenarioConfig& config, const RunContext& ctx, std::ostream& log);

std::string compare_csv_header();

}  // namespace samd
