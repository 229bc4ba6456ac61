#include "samd/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "samd/errors.hpp"

namespace samd {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
        return s.substr(1, s.size() - 2);
    }
    return s;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& raw) {
    const std::string s = unquote(trim(raw));
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw Error("expected a number, got '" + s + "'");
    }
    if (used != s.size()) {
        throw Error("expected a number, got '" + s + "'");
    }
    return v;
}

long long parse_integer(const std::string& raw) {
    const std::string s = unquote(trim(raw));
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw Error("expected an integer, got '" + s + "'");
    }
    return v;
}

std::uint64_t parse_unsigned(const std::string& raw) {
    const std::string s = unquote(trim(raw));
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw Error("expected a non-negative integer, got '" + s + "'");
    }
    return v;
}

bool parse_bool(const std::string& raw) {
    const std::string s = unquote(trim(raw));
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw Error("expected true or false, got '" + s + "'");
}

std::vector<double> parse_list(const std::string& raw) {
    std::string s = unquote(trim(raw));
    if (!s.empty() && s.front() == '[' && s.back() == ']') {
        s = s.substr(1, s.size() - 2);
    }
    for (char& c : s) {
        if (c == ',' || c == ';') c = ' ';
    }
    std::istringstream in(s);
    std::vector<double> out;
    std::string token;
    while (in >> token) {
        out.push_back(parse_double(token));
    }
    return out;
}

std::string emit_list(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) out += ", ";
        out += fmt(v[i]);
    }
    return out;
}

struct Field {
    const char* key;
    std::function<std::string(const ScenarioConfig&)> get;
    std::function<void(ScenarioConfig&, const std::string&)> set;
};

const std::vector<Field>& fields() {
    static const std::vector<Field> table = {
        {"system.kind", [](const ScenarioConfig& c) { return c.system; },
         [](ScenarioConfig& c, const std::string& v) { c.system = unquote(v); }},
        {"system.beta", [](const ScenarioConfig& c) { return fmt(c.beta); },
         [](ScenarioConfig& c, const std::string& v) { c.beta = parse_double(v); }},
        {"objective.kind", [](const ScenarioConfig& c) { return c.objective; },
         [](ScenarioConfig& c, const std::string& v) { c.objective = unquote(v); }},
        {"objective.source", [](const ScenarioConfig& c) { return c.objective_source; },
         [](ScenarioConfig& c, const std::string& v) { c.objective_source = unquote(v); }},
        {"objective.dim", [](const ScenarioConfig& c) { return std::to_string(c.dim); },
         [](ScenarioConfig& c, const std::string& v) { c.dim = static_cast<int>(parse_integer(v)); }},
        {"objective.terms", [](const ScenarioConfig& c) { return std::to_string(c.terms); },
         [](ScenarioConfig& c, const std::string& v) { c.terms = static_cast<int>(parse_integer(v)); }},
        {"objective.seed", [](const ScenarioConfig& c) { return std::to_string(c.objective_seed); },
         [](ScenarioConfig& c, const std::string& v) { c.objective_seed = parse_unsigned(v); }},
        {"objective.coefficients", [](const ScenarioConfig& c) { return emit_list(c.coefficients); },
         [](ScenarioConfig& c, const std::string& v) { c.coefficients = parse_list(v); }},
        {"mirror.kind", [](const ScenarioConfig& c) { return c.mirror; },
         [](ScenarioConfig& c, const std::string& v) { c.mirror = unquote(v); }},
        {"rates.alpha_r",
         [](const ScenarioConfig& c) { return c.alpha_r ? fmt(*c.alpha_r) : std::string("auto"); },
         [](ScenarioConfig& c, const std::string& v) {
             if (unquote(v) == "auto") {
                 c.alpha_r.reset();
             } else {
                 c.alpha_r = parse_double(v);
             }
         }},
        {"rates.alpha_s", [](const ScenarioConfig& c) { return fmt(c.alpha_s); },
         [](ScenarioConfig& c, const std::string& v) { c.alpha_s = parse_double(v); }},
        {"rates.coef_r", [](const ScenarioConfig& c) { return fmt(c.coef_r); },
         [](ScenarioConfig& c, const std::string& v) { c.coef_r = parse_double(v); }},
        {"rates.coef_s", [](const ScenarioConfig& c) { return fmt(c.coef_s); },
         [](ScenarioConfig& c, const std::string& v) { c.coef_s = parse_double(v); }},
        {"rates.eta", [](const ScenarioConfig& c) { return c.eta; },
         [](ScenarioConfig& c, const std::string& v) { c.eta = unquote(v); }},
        {"rates.eta_coef", [](const ScenarioConfig& c) { return fmt(c.eta_coef); },
         [](ScenarioConfig& c, const std::string& v) { c.eta_coef = parse_double(v); }},
        {"rates.eta_exponent", [](const ScenarioConfig& c) { return fmt(c.eta_exponent); },
         [](ScenarioConfig& c, const std::string& v) { c.eta_exponent = parse_double(v); }},
        {"noise.kind", [](const ScenarioConfig& c) { return c.noise; },
         [](ScenarioConfig& c, const std::string& v) { c.noise = unquote(v); }},
        {"noise.sigma0", [](const ScenarioConfig& c) { return fmt(c.sigma0); },
         [](ScenarioConfig& c, const std::string& v) { c.sigma0 = parse_double(v); }},
        {"noise.alpha_sigma", [](const ScenarioConfig& c) { return fmt(c.alpha_sigma); },
         [](ScenarioConfig& c, const std::string& v) { c.alpha_sigma = parse_double(v); }},
        {"noise.weights", [](const ScenarioConfig& c) { return emit_list(c.noise_weights); },
         [](ScenarioConfig& c, const std::string& v) { c.noise_weights = parse_list(v); }},
        {"time.t0", [](const ScenarioConfig& c) { return fmt(c.t0); },
         [](ScenarioConfig& c, const std::string& v) { c.t0 = parse_double(v); }},
        {"time.t_end", [](const ScenarioConfig& c) { return fmt(c.t_end); },
         [](ScenarioConfig& c, const std::string& v) { c.t_end = parse_double(v); }},
        {"time.h", [](const ScenarioConfig& c) { return fmt(c.h); },
         [](ScenarioConfig& c, const std::string& v) { c.h = parse_double(v); }},
        {"time.stride", [](const ScenarioConfig& c) { return std::to_string(c.stride); },
         [](ScenarioConfig& c, const std::string& v) { c.stride = static_cast<int>(parse_integer(v)); }},
        {"ensemble.count", [](const ScenarioConfig& c) { return std::to_string(c.count); },
         [](ScenarioConfig& c, const std::string& v) { c.count = static_cast<int>(parse_integer(v)); }},
        {"ensemble.seed", [](const ScenarioConfig& c) { return std::to_string(c.seed); },
         [](ScenarioConfig& c, const std::string& v) { c.seed = parse_unsigned(v); }},
        {"output.dir", [](const ScenarioConfig& c) { return c.out_dir; },
         [](ScenarioConfig& c, const std::string& v) { c.out_dir = unquote(v); }},
        {"output.svg", [](const ScenarioConfig& c) { return std::string(c.svg ? "true" : "false"); },
         [](ScenarioConfig& c, const std::string& v) { c.svg = parse_bool(v); }},
        {"sweep.alpha_sigma", [](const ScenarioConfig& c) { return emit_list(c.sweep_alpha_sigma); },
         [](ScenarioConfig& c, const std::string& v) { c.sweep_alpha_sigma = parse_list(v); }},
        {"sweep.alpha_s", [](const ScenarioConfig& c) { return emit_list(c.sweep_alpha_s); },
         [](ScenarioConfig& c, const std::string& v) { c.sweep_alpha_s = parse_list(v); }},
        {"sweep.alpha_r", [](const ScenarioConfig& c) { return emit_list(c.sweep_alpha_r); },
         [](ScenarioConfig& c, const std::string& v) { c.sweep_alpha_r = parse_list(v); }},
        {"compare.sigma0", [](const ScenarioConfig& c) { return emit_list(c.compare_sigma0); },
         [](ScenarioConfig& c, const std::string& v) { c.compare_sigma0 = parse_list(v); }},
    };
    return table;
}

const Field* find_field(const std::string& key) {
    for (const auto& f : fields()) {
        if (key == f.key) return &f;
    }
    return nullptr;
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

double ScenarioConfig::resolved_alpha_r() const {
    if (alpha_r) {
        return *alpha_r;
    }
    return optimal_amd_exponents(alpha_sigma, alpha_s).alpha_r;
}

RateBundle ScenarioConfig::rates() const {
    RateBundle b = RateBundle::power_laws(resolved_alpha_r(), alpha_s, coef_r, coef_s, t0);
    if (eta == "power") {
        b.eta = Schedule::power_law(eta_coef, eta_exponent);
    }
    return b;
}

MirrorMap ScenarioConfig::mirror_map() const {
    if (mirror == "entropic") return MirrorMap::entropic_simplex(dim);
    if (mirror == "euclidean") return MirrorMap::euclidean(dim);
    throw Error("unknown mirror kind '" + mirror + "' (expected entropic or euclidean)");
}

Objective ScenarioConfig::make_objective() const {
    if (objective == "sum-exp") {
        if (objective_source == "default") return Objective::default_sum_exp();
        if (objective_source == "seed") return Objective::seeded_sum_exp(dim, terms, objective_seed);
        if (objective_source == "inline") {
            if (static_cast<int>(coefficients.size()) != terms * dim) {
                throw Error("objective.coefficients needs terms * dim = " +
                            std::to_string(terms * dim) + " entries");
            }
            Matrix c(terms, dim);
            for (int i = 0; i < terms; ++i)
                for (int j = 0; j < dim; ++j) c(i, j) = coefficients[static_cast<std::size_t>(i * dim + j)];
            return Objective::sum_exp(std::move(c));
        }
    } else if (objective == "rank1-quadratic" || objective == "quadratic") {
        Vector c;
        if (objective_source == "default") {
            if (objective == "rank1-quadratic") return Objective::default_rank1();
            c = Vector::LinSpaced(dim, 1.0, static_cast<double>(dim));
        } else if (objective_source == "inline") {
            if (static_cast<int>(coefficients.size()) != dim) {
                throw Error("objective.coefficients needs dim = " + std::to_string(dim) + " entries");
            }
            c = Eigen::Map<const Vector>(coefficients.data(), dim);
        } else {
            throw Error("objective.source '" + objective_source + "' is only supported for sum-exp");
        }
        return objective == "quadratic" ? Objective::quadratic(c) : Objective::rank1_quadratic(c);
    }
    throw Error("unknown objective '" + objective + "' or source '" + objective_source + "'");
}

NoiseModel ScenarioConfig::noise_model() const {
    if (noise == "scalar") return NoiseModel::scalar(dim, sigma0, alpha_sigma);
    if (noise == "diagonal") {
        return NoiseModel::diagonal(Vector::Constant(dim, sigma0), Vector::Constant(dim, alpha_sigma));
    }
    if (noise == "state-scaled") {
        const Vector w = noise_weights.empty() ? Vector::Ones(dim)
                                               : Vector(Eigen::Map<const Vector>(noise_weights.data(),
                                                                                 static_cast<Eigen::Index>(noise_weights.size())));
        return NoiseModel::state_scaled(mirror_map(), sigma0, alpha_sigma, w);
    }
    throw Error("unknown noise kind '" + noise + "' (expected scalar, diagonal or state-scaled)");
}

SystemSpec ScenarioConfig::system_spec() const {
    SystemSpec spec(system_kind_from_string(system), mirror_map(), make_objective(), rates(), noise_model());
    spec.beta = beta;
    return spec;
}

SimulationOptions ScenarioConfig::simulation_options() const {
    SimulationOptions opt;
    opt.t0 = t0;
    opt.t_end = t_end;
    opt.h = h;
    opt.stride = stride;
    return opt;
}

std::vector<std::string> ScenarioConfig::violations() const {
    std::vector<std::string> out;
    std::optional<SystemKind> kind;
    try {
        kind = system_kind_from_string(system);
    } catch (const Error& e) {
        out.push_back(std::string("system.kind: ") + e.what());
    }
    if (mirror != "entropic" && mirror != "euclidean") {
        out.push_back("mirror.kind must be entropic or euclidean, got '" + mirror + "'");
    }
    if (dim < 1) out.push_back("objective.dim must be >= 1");
    if (terms < 1) out.push_back("objective.terms must be >= 1");
    if (!(t0 > 0.0) || !finite(t0)) out.push_back("time.t0 must be a positive number");
    if (!(t_end > t0) || !finite(t_end)) out.push_back("time.t_end must exceed time.t0");
    if (!(h > 0.0) || !(h <= t_end - t0)) out.push_back("time.h must satisfy 0 < h <= t_end - t0");
    if (stride < 1) out.push_back("time.stride must be >= 1");
    if (count < 1) out.push_back("ensemble.count must be >= 1");
    if (!(sigma0 >= 0.0) || !finite(sigma0)) out.push_back("noise.sigma0 must be >= 0");
    if (!finite(alpha_sigma)) out.push_back("noise.alpha_sigma must be finite");
    if (eta != "rdot" && eta != "power") out.push_back("rates.eta must be rdot or power, got '" + eta + "'");
    if (!(coef_r > 0.0) || !(coef_s > 0.0)) out.push_back("rates.coef_r and rates.coef_s must be positive");
    if (alpha_s < 0.0) {
        out.push_back(std::string(kCondSensitivity) +
                      " fails: s(t) must be a non-decreasing, inverse sensitivity parameter (alpha_s = " +
                      fmt(alpha_s) + " < 0)");
    }
    if (kind && !is_stochastic(*kind) && sigma0 != 0.0) {
        out.push_back("noise.sigma0 must be 0 for the deterministic system '" + system + "'");
    }
    if (kind && *kind == SystemKind::NesterovOde) {
        if (mirror != "euclidean") out.push_back("system nesterov needs mirror.kind = euclidean");
        if (!(beta >= 2.0)) out.push_back("system.beta must be >= 2");
    }
    if (!alpha_r) {
        try {
            (void)optimal_amd_exponents(alpha_sigma, alpha_s);
        } catch (const InvalidRegime& e) {
            out.push_back(std::string("rates.alpha_r = auto: ") + e.what());
        }
    }
    if (!out.empty()) {
        return out;
    }

    // Remaining checks need the objects themselves.
    try {
        const Objective obj = make_objective();
        if (obj.dim() != dim) {
            out.push_back("objective has dimension " + std::to_string(obj.dim()) + " but objective.dim = " +
                          std::to_string(dim));
        }
        (void)noise_model();
    } catch (const Error& e) {
        out.push_back(e.what());
        return out;
    }
    if (kind && is_accelerated(*kind)) {
        const RateBundle b = rates();
        const AdmissibilityReport report = check_admissible(b, t_end);
        for (const auto& c : report.conditions) {
            if (!c.passed) {
                std::string msg = c.name + " fails at t = " + fmt(c.worst_time) + " (margin " + fmt(c.worst_value) + ")";
                if (!c.note.empty()) msg += ": " + c.note;
                out.push_back(msg);
            }
        }
        const Schedule a = b.averaging();
        const double t_last = t0 + static_cast<double>(step_count(t0, t_end, h)) * h;
        const double worst = std::max(a(t0), a(t_last)) * h;
        if (worst > kMaxAveragingStep) {
            out.push_back("step guard fails: a(t) h = " + fmt(worst) + " > 0.5; reduce time.h");
        }
    }
    return out;
}

void ScenarioConfig::validate() const {
    auto v = violations();
    if (!v.empty()) {
        throw ValidationError(std::move(v));
    }
}

ScenarioConfig parse_config_unchecked(const std::string& text) {
    ScenarioConfig config;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError(line_no, "expected 'key = value', got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const Field* field = find_field(key);
        if (field == nullptr) {
            throw ParseError(line_no, "unknown key '" + key + "'");
        }
        if (!seen.insert(key).second) {
            throw ParseError(line_no, "duplicate key '" + key + "'");
        }
        try {
            field->set(config, value);
        } catch (const Error& e) {
            throw ParseError(line_no, key + ": " + e.what());
        }
    }
    return config;
}

ScenarioConfig parse_config(const std::string& text) {
    ScenarioConfig config = parse_config_unchecked(text);
    config.validate();
    return config;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot read config file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string emit_config(const ScenarioConfig& config) {
    std::string out;
    for (const auto& f : fields()) {
        out += f.key;
        out += " = ";
        out += f.get(config);
        out += '\n';
    }
    return out;
}

ScenarioConfig config_from_manifest(const std::string& manifest_text) {
    std::istringstream in(manifest_text);
    std::string line;
    std::string embedded;
    const std::string prefix = "config.";
    while (std::getline(in, line)) {
        if (line.rfind(prefix, 0) == 0) {
            embedded += line.substr(prefix.size()) + '\n';
        }
    }
    return parse_config_unchecked(embedded);
}

std::string config_hash(const ScenarioConfig& config) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : emit_config(config)) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

}  // namespace samd
