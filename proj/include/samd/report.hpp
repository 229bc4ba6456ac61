#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "samd/config.hpp"

namespace samd {

std::string tool_version();

/// Flat key=value manifest: tool version, command, config hash, step size,
/// seeds, one stream key per trajectory and the full config under `config.`.
std::string make_manifest(const ScenarioConfig& config, const std::string& command,
                          const std::vector<std::uint64_t>& stream_keys,
                          const std::vector<std::pair<std::string, std::string>>& extra = {});

struct PlotSeries {
    std::string label;
    std::vector<double> t;
    std::vector<double> y;
};

/// Standalone SVG line chart with logarithmic axes. Non-positive points are skipped.
std::string svg_loglog_plot(const std::string& title, const std::string& y_label,
                            const std::vector<PlotSeries>& series);

/// Creates parent directories as needed; throws Error when the file cannot be written.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace samd
