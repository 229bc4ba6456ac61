#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "samd/commands.hpp"
#include "samd/report.hpp"

using namespace samd;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

std::vector<double> column(const std::vector<std::string>& rows, int col) {
    std::vector<double> out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        std::istringstream in(rows[i]);
        std::string cell;
        for (int c = 0; c <= col; ++c) std::getline(in, cell, ',');
        out.push_back(cell.empty() ? std::nan("") : std::stod(cell));
    }
    return out;
}

ScenarioConfig small_config() {
    ScenarioConfig c;
    c.t_end = 6.0;
    c.stride = 20;
    c.count = 6;
    return c;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("samd_test_" + name)) {
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("simulate writes a CSV with a monotone time column and a manifest") {
    TempDir dir("simulate");
    std::ostringstream log;
    cmd_simulate(small_config(), {dir.path.string(), 1}, log);
    const auto rows = lines(slurp(dir.path / "trajectory.csv"));
    REQUIRE(rows.size() > 2);
    CHECK(rows.front() == trajectory_csv_header(3));
    const auto t = column(rows, 0);
    for (std::size_t i = 1; i < t.size(); ++i) CHECK(t[i] > t[i - 1]);

    const std::string manifest = slurp(dir.path / "manifest.txt");
    CHECK(manifest.find("tool=samd\n") != std::string::npos);
    CHECK(manifest.find("version=" + tool_version()) != std::string::npos);
    CHECK(manifest.find("config_hash=" + config_hash(small_config())) != std::string::npos);
    CHECK(manifest.find("h=0.01") != std::string::npos);
    CHECK(manifest.find("trajectory.0.stream_key=") != std::string::npos);
    CHECK(config_from_manifest(manifest) == small_config());
    CHECK(slurp(dir.path / "trajectory.svg").rfind("<svg", 0) == 0);
}

TEST_CASE("zero-noise ensemble has all-zero std columns") {
    TempDir dir("ensemble0");
    ScenarioConfig c = small_config();
    c.sigma0 = 0.0;
    std::ostringstream log;
    cmd_ensemble(c, {dir.path.string(), 2}, log);
    const auto rows = lines(slurp(dir.path / "ensemble.csv"));
    CHECK(rows.front() == ensemble_csv_header());
    for (double v : column(rows, 2)) CHECK(v == 0.0);
    for (double v : column(rows, 5)) CHECK(v == 0.0);
    CHECK(fs::exists(dir.path / "rate_fit.txt"));
    CHECK(fs::exists(dir.path / "ensemble.svg"));
}

TEST_CASE("ensemble output is reproducible from the manifest") {
    TempDir a("ensA"), b("ensB");
    std::ostringstream log;
    ScenarioConfig c = small_config();
    c.svg = false;
    cmd_ensemble(c, {a.path.string(), 1}, log);
    const ScenarioConfig replay = config_from_manifest(slurp(a.path / "manifest.txt"));
    cmd_ensemble(replay, {b.path.string(), 3}, log);
    CHECK(slurp(a.path / "ensemble.csv") == slurp(b.path / "ensemble.csv"));
    CHECK_FALSE(fs::exists(a.path / "ensemble.svg"));
}

TEST_CASE("rates sweep flags one best alpha_r per cell") {
    ScenarioConfig c = small_config();
    c.t_end = 40.0;
    c.sweep_alpha_r = {0.6, 1.0};
    c.sweep_alpha_s = {0.5};
    c.sweep_alpha_sigma = {0.0, 0.2};
    const auto rows = rates_sweep(c, 1);
    REQUIRE(rows.size() == 4);
    int best = 0;
    for (const auto& r : rows) best += r.best ? 1 : 0;
    CHECK(best == 2);
    CHECK(rows[2].predicted_slope == doctest::Approx(-0.3));
    CHECK(rows[2].formula_alpha_r == doctest::Approx(0.8));
    CHECK(lines(rates_csv(rows)).size() == 5);
}

TEST_CASE("compare writes one side-by-side CSV per sigma0") {
    TempDir dir("compare");
    ScenarioConfig c = small_config();
    c.compare_sigma0 = {0.0, 0.1};
    c.svg = false;
    std::ostringstream log;
    cmd_compare(c, {dir.path.string(), 1}, log);
    for (const char* name : {"compare_sigma0_0.csv", "compare_sigma0_0.1.csv"}) {
        const auto rows = lines(slurp(dir.path / name));
        REQUIRE(rows.size() > 2);
        CHECK(rows.front() == compare_csv_header());
    }
    const auto det = lines(slurp(dir.path / "compare_sigma0_0.csv"));
    for (double v : column(det, 2)) CHECK(v == 0.0);
}

TEST_CASE("svg plot is self-contained") {
    const std::string svg = svg_loglog_plot("a < b", "gap", {{"s", {1.0, 10.0}, {1.0, 0.1}}});
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("a &lt; b") != std::string::npos);
    CHECK(svg.find("http://") == svg.find("http://www.w3.org/2000/svg"));
}
