#include "samd/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "samd/errors.hpp"

namespace samd {

namespace {

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

}  // namespace

std::string tool_version() { return SAMD_VERSION; }

std::string make_manifest(const ScenarioConfig& config, const std::string& command,
                          const std::vector<std::uint64_t>& stream_keys,
                          const std::vector<std::pair<std::string, std::string>>& extra) {
    std::ostringstream out;
    out << "tool=samd\n";
    out << "version=" << tool_version() << "\n";
    out << "command=" << command << "\n";
    out << "config_hash=" << config_hash(config) << "\n";
    char h[32];
    std::snprintf(h, sizeof h, "%.17g", config.h);
    out << "h=" << h << "\n";
    out << "base_seed=" << config.seed << "\n";
    out << "rng=splitmix64-counter+box-muller\n";
    out << "trajectories=" << stream_keys.size() << "\n";
    for (std::size_t i = 0; i < stream_keys.size(); ++i) {
        out << "trajectory." << i << ".stream_key=" << hex64(stream_keys[i]) << "\n";
    }
    for (const auto& [k, v] : extra) {
        out << k << "=" << v << "\n";
    }
    std::istringstream lines(emit_config(config));
    std::string line;
    while (std::getline(lines, line)) {
        const auto eq = line.find(" = ");
        out << "config." << line.substr(0, eq) << "=" << line.substr(eq + 3) << "\n";
    }
    return out.str();
}

std::string svg_loglog_plot(const std::string& title, const std::string& y_label,
                            const std::vector<PlotSeries>& series) {
    constexpr double width = 640.0;
    constexpr double height = 420.0;
    constexpr double left = 70.0;
    constexpr double right = 150.0;
    constexpr double top = 40.0;
    constexpr double bottom = 50.0;

    double tmin = std::numeric_limits<double>::infinity();
    double tmax = -tmin;
    double ymin = tmin;
    double ymax = -tmin;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.t.size() && i < s.y.size(); ++i) {
            if (s.t[i] > 0.0 && s.y[i] > 0.0 && std::isfinite(s.y[i])) {
                tmin = std::min(tmin, s.t[i]);
                tmax = std::max(tmax, s.t[i]);
                ymin = std::min(ymin, s.y[i]);
                ymax = std::max(ymax, s.y[i]);
            }
        }
    }
    if (!(tmax > tmin)) {
        tmin = 1.0;
        tmax = 10.0;
    }
    if (!(ymax > ymin)) {
        ymin = ymin > 0.0 && std::isfinite(ymin) ? ymin / 10.0 : 1e-3;
        ymax = ymin * 100.0;
    }
    const double lt0 = std::floor(std::log10(tmin));
    const double lt1 = std::ceil(std::log10(tmax));
    const double ly0 = std::floor(std::log10(ymin));
    const double ly1 = std::ceil(std::log10(ymax));
    const double pw = width - left - right;
    const double ph = height - top - bottom;
    auto px = [&](double t) { return left + (std::log10(t) - lt0) / (lt1 - lt0) * pw; };
    auto py = [&](double y) { return top + (ly1 - std::log10(y)) / (ly1 - ly0) * ph; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
        << escape_xml(title) << "</text>\n";
    for (double e = lt0; e <= lt1; e += 1.0) {
        const double x = px(std::pow(10.0, e));
        svg << "<line x1=\"" << x << "\" y1=\"" << top << "\" x2=\"" << x << "\" y2=\"" << top + ph
            << "\" stroke=\"#ddd\"/>\n";
        svg << "<text x=\"" << x << "\" y=\"" << top + ph + 16 << "\" text-anchor=\"middle\">1e" << e
            << "</text>\n";
    }
    for (double e = ly0; e <= ly1; e += 1.0) {
        const double y = py(std::pow(10.0, e));
        svg << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << left + pw << "\" y2=\"" << y
            << "\" stroke=\"#ddd\"/>\n";
        svg << "<text x=\"" << left - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">1e" << e << "</text>\n";
    }
    svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\">t</text>\n";
    svg << "<text x=\"16\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << top + ph / 2 << ")\">" << escape_xml(y_label) << "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = kPalette[k % (sizeof kPalette / sizeof kPalette[0])];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.t.size() && i < s.y.size(); ++i) {
            if (s.t[i] > 0.0 && s.y[i] > 0.0 && std::isfinite(s.y[i])) {
                svg << num(px(s.t[i])) << ',' << num(py(s.y[i])) << ' ';
            }
        }
        svg << "\"/>\n";
        const double ly = top + 16.0 * static_cast<double>(k + 1);
        svg << "<line x1=\"" << left + pw + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << left + pw + 30 << "\" y2=\""
            << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << left + pw + 34 << "\" y=\"" << ly << "\">" << escape_xml(s.label) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(p, std::ios::binary);
    if (!out) {
        throw Error("cannot write '" + path + "'");
    }
    out << content;
    if (!out) {
        throw Error("failed writing '" + path + "'");
    }
}

}  // namespace samd
