#include "samd/dynamics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "samd/energy.hpp"
#include "samd/errors.hpp"

namespace samd {

namespace {

void check_finite(const State& s, const char* what) {
    if (!s.x.allFinite() || !s.z.allFinite()) {
        throw NonFinite(std::string(what) + ": state became non-finite");
    }
}

// Shared AMD / SAMD update. `noise_term` is sigma(X, t) dW or empty.
State accelerated_step(const State& state, double t, double h, const SystemSpec& spec,
                       const Vector* noise_term) {
    const double eta = spec.rates.eta(t);
    const double a = eta / spec.rates.r(t);
    const double s = spec.rates.s(t);
    const Vector mirror = spec.map.grad_psi_star(state.z / s);
    const Vector g = spec.objective.gradient(state.x);

    State next;
    if (noise_term != nullptr) {
        next.z = state.z - eta * (g * h + *noise_term);
    } else {
        next.z = state.z - eta * (g * h);
    }
    next.z = spec.map.dual_projection(next.z);
    next.x = state.x + (a * h) * (mirror - state.x);
    check_finite(next, "accelerated step");
    return next;
}

State mirror_step(const State& state, double t, double h, const SystemSpec& spec,
                  const Vector* noise_term) {
    const Vector g = spec.objective.gradient(state.x);
    State next;
    if (noise_term != nullptr) {
        next.z = state.z - (g * h + *noise_term);
    } else {
        next.z = state.z - g * h;
    }
    next.z = spec.map.dual_projection(next.z);
    next.x = spec.map.grad_psi_star(next.z / spec.rates.s(t + h));
    check_finite(next, "mirror step");
    return next;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// Dual-space weight multiplying the noise in the Z equation.
double noise_weight(const SystemSpec& spec, double t) {
    switch (spec.kind) {
        case SystemKind::AMD:
        case SystemKind::SAMD:
            return spec.rates.eta(t);
        case SystemKind::MD:
        case SystemKind::SMD:
            return 1.0;
        case SystemKind::NesterovOde:
            return 0.0;
    }
    return 0.0;
}

void append_number(std::string& line, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    line += buf;
}

}  // namespace

std::string to_string(SystemKind kind) {
    switch (kind) {
        case SystemKind::MD:
            return "md";
        case SystemKind::SMD:
            return "smd";
        case SystemKind::AMD:
            return "amd";
        case SystemKind::SAMD:
            return "samd";
        case SystemKind::NesterovOde:
            return "nesterov";
    }
    return "unknown";
}

SystemKind system_kind_from_string(const std::string& name) {
    const std::string key = lower(name);
    if (key == "md") return SystemKind::MD;
    if (key == "smd" || key == "smd_s") return SystemKind::SMD;
    if (key == "amd") return SystemKind::AMD;
    if (key == "samd") return SystemKind::SAMD;
    if (key == "nesterov" || key == "nesterov_ode") return SystemKind::NesterovOde;
    throw Error("unknown system kind '" + name + "' (expected md, smd, amd, samd or nesterov)");
}

bool is_stochastic(SystemKind kind) noexcept {
    return kind == SystemKind::SMD || kind == SystemKind::SAMD;
}

bool is_accelerated(SystemKind kind) noexcept {
    return kind == SystemKind::AMD || kind == SystemKind::SAMD;
}

SystemSpec::SystemSpec(SystemKind kind_, MirrorMap map_, Objective objective_, RateBundle rates_,
                       std::optional<NoiseModel> noise_)
    : kind(kind_),
      map(map_),
      objective(std::move(objective_)),
      rates(std::move(rates_)),
      noise(noise_ ? std::move(*noise_) : NoiseModel::zero(map_.dim())),
      x0(map_.is_entropic() ? Vector::Constant(map_.dim(), 1.0 / map_.dim())
                            : Vector::Zero(map_.dim())),
      z0(Vector::Zero(map_.dim())) {}

void SystemSpec::validate(double horizon) const {
    const int n = map.dim();
    if (objective.dim() != n || noise.dim() != n || x0.size() != n || z0.size() != n) {
        throw Error("system spec: map, objective, noise and initial state dimensions differ");
    }
    if (!map.is_feasible(x0)) {
        throw InfeasiblePoint("system spec: x0 is not feasible");
    }
    if (!z0.allFinite()) {
        throw NonFinite("system spec: z0 is not finite");
    }
    if (!is_stochastic(kind) && !noise.is_zero()) {
        throw Error("system spec: deterministic kind " + to_string(kind) +
                    " must carry the zero noise model");
    }
    if (kind == SystemKind::NesterovOde) {
        if (map.is_entropic()) {
            throw Error("system spec: the second-order ODE needs the euclidean map");
        }
        if (!(beta >= 2.0)) {
            throw Error("system spec: the second-order ODE needs beta >= 2");
        }
    }
    if (is_accelerated(kind)) {
        const AdmissibilityReport report = check_admissible(rates, horizon);
        if (!report.all_passed()) {
            std::string failed;
            for (const auto& c : report.conditions) {
                if (!c.passed) {
                    failed += (failed.empty() ? "" : ", ") + c.name;
                }
            }
            throw Error("system spec: rates not admissible (" + failed + ")");
        }
    } else if (kind != SystemKind::NesterovOde) {
        const AdmissibilityReport report = check_admissible(rates, horizon);
        const ConditionResult* sens = report.find(kCondSensitivity);
        if (sens != nullptr && !sens->passed) {
            throw Error("system spec: " + sens->note);
        }
    }
}

State step_samd(const State& state, double t, double h, const SystemSpec& spec, const Vector& dw) {
    if (spec.noise.is_zero()) {
        return accelerated_step(state, t, h, spec, nullptr);
    }
    const Vector noise_term = spec.noise.apply(state.x, t, dw);
    return accelerated_step(state, t, h, spec, &noise_term);
}

State step_amd(const State& state, double t, double h, const SystemSpec& spec) {
    return accelerated_step(state, t, h, spec, nullptr);
}

State step_md(const State& state, double t, double h, const SystemSpec& spec) {
    return mirror_step(state, t, h, spec, nullptr);
}

State step_smd(const State& state, double t, double h, const SystemSpec& spec, const Vector& dw) {
    if (spec.noise.is_zero()) {
        return mirror_step(state, t, h, spec, nullptr);
    }
    const Vector noise_term = spec.noise.apply(state.x, t, dw);
    return mirror_step(state, t, h, spec, &noise_term);
}

State step_nesterov_ode(const State& state, double t, double h, double beta,
                        const Objective& objective) {
    if (!(t > 0.0)) {
        throw NonPositiveTime("second-order ODE stepped at non-positive time");
    }
    State next;
    next.x = state.x + h * state.z;
    next.z = state.z + h * (-objective.gradient(state.x) - state.z * ((beta + 1.0) / t));
    check_finite(next, "second-order ODE step");
    return next;
}

long step_count(double t0, double t_end, double h) {
    // The slack keeps exact multiples (e.g. 99 / 1e-3) from gaining a step.
    return static_cast<long>(std::ceil((t_end - t0) / h - 1e-9));
}

bool Trajectory::operator==(const Trajectory& other) const {
    auto same_vectors = [](const std::vector<Vector>& a, const std::vector<Vector>& b) {
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i].size() != b[i].size() || a[i] != b[i]) return false;
        }
        return true;
    };
    return kind == other.kind && h == other.h && stride == other.stride && steps == other.steps &&
           stream_key == other.stream_key && energy_available == other.energy_available &&
           times == other.times && same_vectors(x, other.x) && same_vectors(z, other.z) &&
           gap == other.gap && energy == other.energy && b == other.b &&
           martingale == other.martingale;
}

Trajectory simulate(const SystemSpec& spec, const SimulationOptions& opt, NoiseStream& stream) {
    if (!(opt.t0 > 0.0)) {
        throw NonPositiveTime("simulate: t0 must be positive");
    }
    if (!(opt.t_end > opt.t0) || !(opt.h > 0.0) || opt.h > opt.t_end - opt.t0) {
        throw Error("simulate: need t_end > t0 and 0 < h <= t_end - t0");
    }
    if (opt.stride < 1) {
        throw Error("simulate: record stride must be >= 1");
    }
    spec.validate(opt.t_end);

    const long steps = step_count(opt.t0, opt.t_end, opt.h);
    const double t_last = opt.t0 + static_cast<double>(steps) * opt.h;
    if (is_accelerated(spec.kind)) {
        const Schedule a = spec.rates.averaging();
        double worst = std::max(a(opt.t0), a(t_last));
        if (!a.is_power_law()) {
            for (int i = 0; i <= 200; ++i) {
                worst = std::max(worst, a(opt.t0 * std::pow(t_last / opt.t0, i / 200.0)));
            }
        }
        if (worst * opt.h > kMaxAveragingStep) {
            throw StepTooLarge("simulate: a(t) h = " + std::to_string(worst * opt.h) +
                               " exceeds " + std::to_string(kMaxAveragingStep));
        }
    }

    const MinimizerCertificate cert =
        opt.certificate ? *opt.certificate : solve_minimizer(spec.objective, spec.map, 1e-12);
    std::optional<EnergyContext> ctx;
    if (cert.interior() && spec.kind != SystemKind::NesterovOde) {
        ctx.emplace(spec.map, spec.objective, cert, spec.rates, is_accelerated(spec.kind));
    }

    Trajectory traj;
    traj.kind = spec.kind;
    traj.h = opt.h;
    traj.stride = opt.stride;
    traj.steps = steps;
    traj.stream_key = stream.key();
    traj.energy_available = ctx.has_value();
    const std::size_t records = static_cast<std::size_t>(steps / opt.stride + 2);
    traj.times.reserve(records);
    traj.x.reserve(records);
    traj.z.reserve(records);
    traj.gap.reserve(records);
    traj.b.reserve(records);

    State state{spec.x0, spec.z0};
    if (spec.kind == SystemKind::MD || spec.kind == SystemKind::SMD) {
        state.x = spec.map.grad_psi_star(state.z / spec.rates.s(opt.t0));
    }

    const int n = spec.map.dim();
    const bool noisy = is_stochastic(spec.kind) && !spec.noise.is_zero();
    double b = 0.0;
    double martingale = 0.0;

    auto record = [&](double t) {
        traj.times.push_back(t);
        traj.x.push_back(state.x);
        traj.z.push_back(state.z);
        traj.gap.push_back(spec.objective.value(state.x) - cert.f_star);
        traj.b.push_back(b);
        if (ctx) {
            traj.energy.push_back(energy(*ctx, state.x, state.z, t));
            traj.martingale.push_back(martingale);
        }
    };

    record(opt.t0);
    Vector dw;
    for (long k = 0; k < steps; ++k) {
        const double t = opt.t0 + static_cast<double>(k) * opt.h;
        if (noisy) {
            dw = stream.increments(opt.h, n);
            const double weight = noise_weight(spec, t);
            if (ctx) {
                const Vector deviation =
                    spec.map.grad_psi_star(state.z / spec.rates.s(t)) - cert.x_star;
                martingale -= weight * spec.noise.apply(state.x, t, deviation).dot(dw);
            }
            b += weight * weight * spec.noise.sigma_star_sq(t) * opt.h;
        }
        try {
            switch (spec.kind) {
                case SystemKind::MD:
                    state = step_md(state, t, opt.h, spec);
                    break;
                case SystemKind::SMD:
                    state = noisy ? step_smd(state, t, opt.h, spec, dw) : step_md(state, t, opt.h, spec);
                    break;
                case SystemKind::AMD:
                    state = step_amd(state, t, opt.h, spec);
                    break;
                case SystemKind::SAMD:
                    state = noisy ? step_samd(state, t, opt.h, spec, dw)
                                  : step_amd(state, t, opt.h, spec);
                    break;
                case SystemKind::NesterovOde:
                    state = step_nesterov_ode(state, t, opt.h, spec.beta, spec.objective);
                    break;
            }
        } catch (const NonFinite& e) {
            throw NonFinite(std::string(e.what()) + " at step " + std::to_string(k) +
                            " (t = " + std::to_string(t) + ")");
        }
        if ((k + 1) % opt.stride == 0 || k + 1 == steps) {
            record(opt.t0 + static_cast<double>(k + 1) * opt.h);
        }
    }
    return traj;
}

std::vector<Vector> averaged_iterate(const Trajectory& traj) {
    if (traj.size() < 2) {
        throw Error("averaged_iterate: need at least two recorded times");
    }
    std::vector<Vector> out;
    out.reserve(traj.size());
    out.push_back(traj.x.front());
    Vector integral = Vector::Zero(traj.x.front().size());
    const double t0 = traj.times.front();
    for (std::size_t i = 1; i < traj.size(); ++i) {
        const double dt = traj.times[i] - traj.times[i - 1];
        integral += 0.5 * dt * (traj.x[i] + traj.x[i - 1]);
        out.push_back(integral / (traj.times[i] - t0));
    }
    return out;
}

double primal_average_residual(const Trajectory& traj, const MirrorMap& map, const RateBundle& rates) {
    if (!is_accelerated(traj.kind)) {
        throw Error("primal_average_residual: needs an AMD or SAMD trajectory");
    }
    if (traj.stride != 1) {
        throw StrideTooCoarse("primal_average_residual: trajectory must be recorded at every step");
    }
    if (traj.size() < 2) {
        throw Error("primal_average_residual: need at least two recorded times");
    }
    const Schedule a = rates.averaging();
    auto mirror = [&](std::size_t i) { return map.grad_psi_star(traj.z[i] / rates.s(traj.times[i])); };

    // y = (x0 w(t0) + int w' m) / w(t), advanced interval by interval with the
    // ratio w(t_k) / w(t_{k+1}) so w itself never overflows.
    Vector y = traj.x.front();
    Vector m_prev = mirror(0);
    double a_prev = a(traj.times.front());
    double residual = 0.0;
    for (std::size_t i = 1; i < traj.size(); ++i) {
        const double t_prev = traj.times[i - 1];
        const double t = traj.times[i];
        const double ratio = std::exp(-a.integral(t_prev, t));
        const Vector m = mirror(i);
        const double a_now = a(t);
        y = ratio * y + (0.5 * (t - t_prev)) * (a_prev * ratio * m_prev + a_now * m);
        residual = std::max(residual, (traj.x[i] - y).cwiseAbs().maxCoeff());
        m_prev = m;
        a_prev = a_now;
    }
    return residual;
}

std::string trajectory_csv_header(int n) {
    std::string header = "t";
    for (int i = 1; i <= n; ++i) header += ",x_" + std::to_string(i);
    for (int i = 1; i <= n; ++i) header += ",z_" + std::to_string(i);
    header += ",gap,energy,b,martingale";
    return header;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    const int n = traj.dim();
    out << trajectory_csv_header(n) << '\n';
    std::string line;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        line.clear();
        append_number(line, traj.times[i]);
        for (int j = 0; j < n; ++j) {
            line += ',';
            append_number(line, traj.x[i][j]);
        }
        for (int j = 0; j < n; ++j) {
            line += ',';
            append_number(line, traj.z[i][j]);
        }
        line += ',';
        append_number(line, traj.gap[i]);
        line += ',';
        if (traj.energy_available) append_number(line, traj.energy[i]);
        line += ',';
        append_number(line, traj.b[i]);
        line += ',';
        if (traj.energy_available) append_number(line, traj.martingale[i]);
        out << line << '\n';
    }
}

}  // namespace samd
