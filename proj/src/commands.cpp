#include "samd/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <ostream>
#include <sstream>

#include "samd/errors.hpp"
#include "samd/report.hpp"

namespace samd {

namespace {

std::string join_path(const std::string& dir, const std::string& file) {
    return (std::filesystem::path(dir) / file).string();
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string short_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::vector<std::uint64_t> stream_keys(std::uint64_t seed, int count) {
    std::vector<std::uint64_t> keys;
    for (int i = 0; i < count; ++i) keys.push_back(stream_key(seed, static_cast<std::uint64_t>(i)));
    return keys;
}

std::vector<double> positive_part(const std::vector<double>& v) {
    std::vector<double> out;
    for (double x : v) out.push_back(std::max(x, 0.0));
    return out;
}

std::optional<RateFit> try_fit(const std::vector<double>& t, const std::vector<double>& y, double t_end) {
    try {
        return fit_rate_exponent(t, y, t_end / 10.0, t_end);
    } catch (const Error&) {
        return std::nullopt;
    }
}

}  // namespace

void cmd_simulate(const ScenarioConfig& config, const RunContext& ctx, std::ostream& log) {
    config.validate();
    const SystemSpec spec = config.system_spec();
    NoiseStream stream(config.seed, 0);
    const Trajectory traj = simulate(spec, config.simulation_options(), stream);

    std::ostringstream csv;
    write_trajectory_csv(csv, traj);
    write_text_file(join_path(ctx.out_dir, "trajectory.csv"), csv.str());
    write_text_file(join_path(ctx.out_dir, "manifest.txt"),
                    make_manifest(config, "simulate", {traj.stream_key},
                                  {{"steps", std::to_string(traj.steps)},
                                   {"energy_available", traj.energy_available ? "true" : "false"}}));
    if (config.svg) {
        std::vector<PlotSeries> series{{"gap", traj.times, positive_part(traj.gap)}};
        if (traj.energy_available) series.push_back({"energy", traj.times, traj.energy});
        write_text_file(join_path(ctx.out_dir, "trajectory.svg"),
                        svg_loglog_plot(to_string(traj.kind) + " trajectory", "value", series));
    }
    log << "simulate: " << traj.steps << " steps, " << traj.size() << " records, final gap "
        << short_num(traj.gap.back()) << " -> " << ctx.out_dir << "\n";
}

void cmd_ensemble(const ScenarioConfig& config, const RunContext& ctx, std::ostream& log) {
    config.validate();
    const SystemSpec spec = config.system_spec();
    const EnsembleResult res =
        ensemble(spec, config.simulation_options(), config.count, config.seed, ctx.threads, false);
    const EnsembleStats& st = res.stats;

    std::ostringstream csv;
    write_ensemble_csv(csv, st);
    write_text_file(join_path(ctx.out_dir, "ensemble.csv"), csv.str());

    std::string fit_text;
    if (auto fit = try_fit(st.times, st.mean_gap, config.t_end)) {
        fit_text = "series=mean_gap\n" + to_string(*fit);
        log << "ensemble: fitted slope " << short_num(fit->slope) << " +/- " << short_num(fit->stderr_slope)
            << " on [" << short_num(fit->t_lo) << ", " << short_num(fit->t_hi) << "]\n";
    } else {
        fit_text = "series=mean_gap\nstatus=unavailable\n";
    }
    write_text_file(join_path(ctx.out_dir, "rate_fit.txt"), fit_text);
    write_text_file(join_path(ctx.out_dir, "manifest.txt"),
                    make_manifest(config, "ensemble", stream_keys(config.seed, config.count)));
    if (config.svg) {
        std::vector<PlotSeries> series{{"mean gap", st.times, positive_part(st.mean_gap)}};
        if (!st.mean_energy.empty()) series.push_back({"mean energy", st.times, st.mean_energy});
        if (!st.bound.empty()) series.push_back({"expected-gap bound", st.times, st.bound});
        write_text_file(join_path(ctx.out_dir, "ensemble.svg"),
                        svg_loglog_plot(std::to_string(config.count) + " trajectories of " + config.system,
                                        "value", series));
    }
    log << "ensemble: " << config.count << " trajectories -> " << ctx.out_dir << "\n";
}

std::vector<RatesRow> rates_sweep(const ScenarioConfig& config, int threads) {
    std::vector<RatesRow> rows;
    for (double as : config.sweep_alpha_sigma) {
        for (double ss : config.sweep_alpha_s) {
            for (double ar : config.sweep_alpha_r) {
                RatesRow row;
                row.alpha_sigma = as;
                row.alpha_s = ss;
                row.alpha_r = ar;
                row.predicted_slope = as - 0.5;
                row.formula_alpha_r = ss - as + 0.5;
                ScenarioConfig cell = config;
                cell.system = "samd";
                cell.alpha_sigma = as;
                cell.alpha_s = ss;
                cell.alpha_r = ar;
                cell.eta = "rdot";
                const auto problems = cell.violations();
                if (!problems.empty()) {
                    row.note = problems.front();
                    row.slope = row.stderr_slope = row.bound_slope = std::nan("");
                    rows.push_back(row);
                    continue;
                }
                const EnsembleResult res =
                    ensemble(cell.system_spec(), cell.simulation_options(), cell.count, cell.seed, threads, false);
                if (auto fit = try_fit(res.stats.times, res.stats.mean_gap, cell.t_end)) {
                    row.slope = fit->slope;
                    row.stderr_slope = fit->stderr_slope;
                } else {
                    row.slope = row.stderr_slope = std::nan("");
                    row.note = "mean gap not positive in the fit window";
                }
                auto bound_fit = res.stats.bound.empty() ? std::nullopt
                                                         : try_fit(res.stats.times, res.stats.bound, cell.t_end);
                row.bound_slope = bound_fit ? bound_fit->slope : std::nan("");
                rows.push_back(row);
            }
        }
    }
    // Best alpha_r per (alpha_sigma, alpha_s) cell.
    std::map<std::pair<double, double>, std::size_t> best;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (std::isnan(rows[i].slope)) continue;
        const auto key = std::make_pair(rows[i].alpha_sigma, rows[i].alpha_s);
        const auto it = best.find(key);
        if (it == best.end() || rows[i].slope < rows[it->second].slope) best[key] = i;
    }
    for (const auto& [key, idx] : best) rows[idx].best = true;
    return rows;
}

std::string rates_csv(const std::vector<RatesRow>& rows) {
    std::string out =
        "alpha_sigma,alpha_s,alpha_r,fitted_slope,stderr,predicted_slope,bound_slope,formula_alpha_r,best,note\n";
    for (const auto& r : rows) {
        out += num(r.alpha_sigma) + "," + num(r.alpha_s) + "," + num(r.alpha_r) + "," + num(r.slope) + "," +
               num(r.stderr_slope) + "," + num(r.predicted_slope) + "," + num(r.bound_slope) + "," +
               num(r.formula_alpha_r) + "," + (r.best ? "1" : "0") + ",\"" + r.note + "\"\n";
    }
    return out;
}

void cmd_rates(const ScenarioConfig& config, const RunContext& ctx, std::ostream& log) {
    config.validate();
    const auto rows = rates_sweep(config, ctx.threads);
    write_text_file(join_path(ctx.out_dir, "rates.csv"), rates_csv(rows));
    write_text_file(join_path(ctx.out_dir, "manifest.txt"),
                    make_manifest(config, "rates", stream_keys(config.seed, config.count)));
    char line[160];
    log << "alpha_sigma alpha_s alpha_r   slope  stderr predicted   bound best\n";
    for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%11.3g %7.3g %7.3g %7.3f %7.3f %9.3f %7.3f %s\n", r.alpha_sigma,
                      r.alpha_s, r.alpha_r, r.slope, r.stderr_slope, r.predicted_slope, r.bound_slope,
                      r.best ? "*" : "");
        log << line;
    }
    for (const auto& r : rows) {
        if (r.best) {
            log << "cell (alpha_sigma=" << short_num(r.alpha_sigma) << ", alpha_s=" << short_num(r.alpha_s)
                << "): best alpha_r=" << short_num(r.alpha_r) << ", formula " << short_num(r.formula_alpha_r)
                << (r.alpha_r < r.formula_alpha_r ? " (observed below formula)" : "") << "\n";
        }
    }
}

std::string compare_csv_header() {
    return "t,smd_mean_gap,smd_std_gap,samd_mean_gap,samd_std_gap";
}

void cmd_compare(const ScenarioConfig& config, const RunContext& ctx, std::ostream& log) {
    config.validate();
    const SmdExponents smd_exp = optimal_smd_exponent(config.alpha_sigma);
    const AmdExponents samd_exp = optimal_amd_exponents(config.alpha_sigma, config.alpha_s);
    std::vector<std::pair<std::string, std::string>> extra{
        {"smd.alpha_s", num(smd_exp.alpha_s)},
        {"samd.alpha_s", num(config.alpha_s)},
        {"samd.alpha_r", num(samd_exp.alpha_r)},
    };
    for (double sigma0 : config.compare_sigma0) {
        ScenarioConfig smd = config;
        smd.system = "smd";
        smd.sigma0 = sigma0;
        smd.alpha_s = smd_exp.alpha_s;
        ScenarioConfig samd = config;
        samd.system = "samd";
        samd.sigma0 = sigma0;
        samd.alpha_r = samd_exp.alpha_r;
        samd.eta = "rdot";
        if (sigma0 == 0.0) {
            smd.system = "md";
            samd.system = "amd";
        }
        smd.validate();
        samd.validate();
        const auto a = ensemble(smd.system_spec(), smd.simulation_options(), config.count, config.seed, ctx.threads, false);
        const auto b = ensemble(samd.system_spec(), samd.simulation_options(), config.count, config.seed, ctx.threads, false);

        std::string csv = compare_csv_header() + "\n";
        for (std::size_t k = 0; k < a.stats.times.size(); ++k) {
            csv += num(a.stats.times[k]) + "," + num(a.stats.mean_gap[k]) + "," +
                   (a.stats.std_gap.empty() ? "" : num(a.stats.std_gap[k])) + "," + num(b.stats.mean_gap[k]) +
                   "," + (b.stats.std_gap.empty() ? "" : num(b.stats.std_gap[k])) + "\n";
        }
        const std::string stem = "compare_sigma0_" + short_num(sigma0);
        write_text_file(join_path(ctx.out_dir, stem + ".csv"), csv);
        if (config.svg) {
            write_text_file(join_path(ctx.out_dir, stem + ".svg"),
                            svg_loglog_plot("SMD vs SAMD, sigma0 = " + short_num(sigma0), "mean gap",
                                            {{"SMD", a.stats.times, positive_part(a.stats.mean_gap)},
                                             {"SAMD", b.stats.times, positive_part(b.stats.mean_gap)}}));
        }
        log << "compare sigma0=" << short_num(sigma0) << ": final mean gap SMD " << short_num(a.stats.mean_gap.back())
            << ", SAMD " << short_num(b.stats.mean_gap.back()) << "\n";
    }
    write_text_file(join_path(ctx.out_dir, "manifest.txt"),
                    make_manifest(config, "compare", stream_keys(config.seed, config.count), extra));
}

}  // namespace samd
