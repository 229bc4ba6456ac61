#include "samd/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "samd/errors.hpp"

namespace samd {

namespace {

// int_{t0}^t eta^2 sigma*^2 / s^k (k = 0 or 1).
double noise_integral(const Schedule& eta, const Schedule& sigma_star, const Schedule* s, double t0,
                      double t) {
    if (t <= t0) {
        return 0.0;
    }
    const bool closed = eta.is_power_law() && sigma_star.is_power_law() && (s == nullptr || s->is_power_law());
    if (closed) {
        const auto& e = eta.power();
        const auto& q = sigma_star.power();
        double coef = e.coef * e.coef * q.coef * q.coef;
        double exponent = 2.0 * e.exponent + 2.0 * q.exponent;
        if (s != nullptr) {
            coef /= s->power().coef;
            exponent -= s->power().exponent;
        }
        return power_law_integral(coef, exponent, t0, t);
    }
    return integrate(
        [&](double tau) {
            const double v = eta(tau) * sigma_star(tau);
            return s == nullptr ? v * v : v * v / (*s)(tau);
        },
        t0, t, 1e-12);
}

Schedule sigma_star_schedule_or_table(const NoiseModel& noise, double t0, double t1) {
    if (auto sched = noise.sigma_star_schedule()) {
        return *sched;
    }
    std::vector<double> times;
    std::vector<double> values;
    for (int i = 0; i <= 400; ++i) {
        const double t = t0 * std::pow(t1 / t0, i / 400.0);
        times.push_back(t);
        values.push_back(noise.sigma_star(t));
    }
    return Schedule::tabulated(std::move(times), std::move(values));
}

Schedule effective_eta(const SystemSpec& spec) {
    return is_accelerated(spec.kind) ? spec.rates.eta : Schedule::constant(1.0);
}

struct Moments {
    double mean = 0.0;
    double sd = 0.0;
};

// Two-pass moments; identical samples give sd = 0 and mean = the sample exactly.
Moments moments(const std::vector<double>& v) {
    Moments m;
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    if (*lo == *hi) {
        m.mean = *lo;
        return m;
    }
    double sum = 0.0;
    for (double x : v) sum += x;
    m.mean = sum / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - m.mean) * (x - m.mean);
    m.sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
    return m;
}

void append_number(std::string& line, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    line += buf;
}

}  // namespace

double lyapunov_drift_check(const Trajectory& traj, const EnergyContext& ctx) {
    if (traj.stride != 1) {
        throw StrideTooCoarse("lyapunov_drift_check: trajectory must be recorded at every step");
    }
    if (!traj.energy_available) {
        throw BoundaryMinimizer("lyapunov_drift_check: trajectory carries no energy series");
    }
    const RateBundle& rates = ctx.rates();
    const double psi_star_point = ctx.psi_x_star();
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
        const double t = traj.times[i];
        const double slope = (traj.energy[i + 1] - traj.energy[i - 1]) / (traj.times[i + 1] - traj.times[i - 1]);
        const double rhs = traj.gap[i] * (rates.r.derivative(t) - rates.eta(t)) +
                           psi_star_point * rates.s.derivative(t);
        worst = std::max(worst, slope - rhs);
    }
    return worst;
}

double deterministic_rate_bound(const EnergyContext& ctx, double initial_energy, double t) {
    const RateBundle& rates = ctx.rates();
    return (ctx.psi_x_star() * (rates.s(t) - rates.s(rates.t0)) + initial_energy) / rates.r(t);
}

double expected_value_bound(const EnergyContext& ctx, const NoiseModel& noise,
                            double initial_energy, double t) {
    const RateBundle& rates = ctx.rates();
    const double base = ctx.psi_x_star() * (rates.s(t) - rates.s(rates.t0)) + initial_energy;
    double ito = 0.0;
    if (!noise.is_zero() && t > rates.t0) {
        const Schedule sigma_star = sigma_star_schedule_or_table(noise, rates.t0, t);
        const double n = ctx.map().dim();
        ito = 0.5 * n * ctx.map().conjugate_lipschitz() *
              noise_integral(rates.eta, sigma_star, &rates.s, rates.t0, t);
    }
    return (base + ito) / rates.r(t);
}

double martingale_envelope(double b) {
    if (b <= 0.0) {
        return 0.0;
    }
    const double e = std::numbers::e;
    return std::sqrt(std::max(b, e) * std::log(std::log(std::max(b, e * e))));
}

BEnvelope b_and_envelope(const Schedule& eta, const Schedule& sigma_star, double t0, double t) {
    BEnvelope out;
    out.b = noise_integral(eta, sigma_star, nullptr, t0, t);
    out.envelope = martingale_envelope(out.b);
    return out;
}

EnsembleResult ensemble(const SystemSpec& spec, const SimulationOptions& options, int count,
                        std::uint64_t base_seed, int threads, bool keep_trajectories) {
    if (count < 1) {
        throw Error("ensemble: count must be >= 1");
    }
    EnsembleResult result;
    result.certificate = options.certificate ? *options.certificate
                                             : solve_minimizer(spec.objective, spec.map, 1e-12);
    SimulationOptions opt = options;
    opt.certificate = result.certificate;

    std::vector<Trajectory> trajs(static_cast<std::size_t>(count));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (int i = next++; i < count; i = next++) {
            try {
                NoiseStream stream(base_seed, static_cast<std::uint64_t>(i));
                trajs[static_cast<std::size_t>(i)] = simulate(spec, opt, stream);
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
    };
    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, count);
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (int i = 0; i < count; ++i) {
        if (errors[static_cast<std::size_t>(i)]) {
            try {
                std::rethrow_exception(errors[static_cast<std::size_t>(i)]);
            } catch (const NonFinite& e) {
                throw NonFinite("trajectory " + std::to_string(i) + ": " + e.what());
            } catch (const Error& e) {
                throw Error("trajectory " + std::to_string(i) + ": " + e.what());
            }
        }
    }

    EnsembleStats& st = result.stats;
    st.count = count;
    st.times = trajs.front().times;
    const std::size_t len = st.times.size();
    const bool with_energy = trajs.front().energy_available;
    const double f_star = result.certificate.f_star;

    std::vector<std::vector<Vector>> averages;
    averages.reserve(trajs.size());
    for (const auto& tr : trajs) {
        averages.push_back(len >= 2 ? averaged_iterate(tr) : tr.x);
    }

    std::vector<double> column(static_cast<std::size_t>(count));
    for (std::size_t k = 0; k < len; ++k) {
        for (int i = 0; i < count; ++i) column[static_cast<std::size_t>(i)] = trajs[static_cast<std::size_t>(i)].gap[k];
        const Moments g = moments(column);
        st.mean_gap.push_back(g.mean);
        if (st.spread_available()) {
            st.std_gap.push_back(g.sd);
            st.stderr_gap.push_back(g.sd / std::sqrt(static_cast<double>(count)));
        }
        if (with_energy) {
            for (int i = 0; i < count; ++i) column[static_cast<std::size_t>(i)] = trajs[static_cast<std::size_t>(i)].energy[k];
            const Moments e = moments(column);
            st.mean_energy.push_back(e.mean);
            if (st.spread_available()) st.std_energy.push_back(e.sd);
        }
        for (int i = 0; i < count; ++i) {
            column[static_cast<std::size_t>(i)] = spec.objective.value(averages[static_cast<std::size_t>(i)][k]) - f_star;
        }
        st.mean_averaged_gap.push_back(moments(column).mean);
    }

    const double t0 = st.times.front();
    const Schedule eta = effective_eta(spec);
    const Schedule sigma_star = sigma_star_schedule_or_table(spec.noise, t0, std::max(st.times.back(), t0 * 1.0001));
    std::optional<EnergyContext> ctx;
    if (with_energy && is_accelerated(spec.kind)) {
        ctx.emplace(spec.map, spec.objective, result.certificate, spec.rates, true);
    }
    const double initial_energy = with_energy ? trajs.front().energy.front() : 0.0;
    for (std::size_t k = 0; k < len; ++k) {
        const BEnvelope be = spec.noise.is_zero() ? BEnvelope{}
                                                  : b_and_envelope(eta, sigma_star, t0, st.times[k]);
        st.b.push_back(be.b);
        st.envelope.push_back(be.envelope);
        if (ctx) {
            st.bound.push_back(expected_value_bound(*ctx, spec.noise, initial_energy, st.times[k]));
        }
    }
    if (keep_trajectories) {
        result.trajectories = std::move(trajs);
    }
    return result;
}

RateFit fit_rate_exponent(const std::vector<double>& times, const std::vector<double>& values,
                          double t_lo, double t_hi, int points) {
    if (times.size() != values.size() || times.empty()) {
        throw Error("fit_rate_exponent: times and values must be non-empty and of equal length");
    }
    if (!(t_lo > 0.0) || !(t_hi > t_lo) || points < 2) {
        throw Error("fit_rate_exponent: need 0 < t_lo < t_hi and at least two target points");
    }
    std::vector<std::size_t> picked;
    for (int i = 0; i < points; ++i) {
        const double target = t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / (points - 1));
        auto it = std::lower_bound(times.begin(), times.end(), target);
        std::size_t idx = static_cast<std::size_t>(it - times.begin());
        if (idx == times.size()) {
            idx = times.size() - 1;
        } else if (idx > 0 && target - times[idx - 1] < times[idx] - target) {
            --idx;
        }
        if (times[idx] < t_lo * (1.0 - 1e-12) || times[idx] > t_hi * (1.0 + 1e-12)) {
            continue;
        }
        if (picked.empty() || picked.back() != idx) {
            picked.push_back(idx);
        }
    }
    if (picked.size() < 10) {
        throw Error("fit_rate_exponent: only " + std::to_string(picked.size()) +
                    " distinct recorded points in the window (need 10)");
    }
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t idx : picked) {
        if (!(values[idx] > 0.0)) {
            throw NonPositiveValues("fit_rate_exponent: value " + std::to_string(values[idx]) +
                                    " at t = " + std::to_string(times[idx]) + " is not positive");
        }
        lx.push_back(std::log(times[idx]));
        ly.push_back(std::log(values[idx]));
    }
    const double m = static_cast<double>(lx.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    RateFit fit;
    fit.t_lo = t_lo;
    fit.t_hi = t_hi;
    fit.points = static_cast<int>(lx.size());
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double r = ly[i] - fit.intercept - fit.slope * lx[i];
        sse += r * r;
    }
    fit.stderr_slope = std::sqrt(sse / (m - 2.0) / sxx);
    fit.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    return fit;
}

std::string to_string(const RateFit& fit) {
    std::ostringstream out;
    out.precision(10);
    out << "t_lo=" << fit.t_lo << "\n"
        << "t_hi=" << fit.t_hi << "\n"
        << "points=" << fit.points << "\n"
        << "slope=" << fit.slope << "\n"
        << "stderr=" << fit.stderr_slope << "\n"
        << "intercept=" << fit.intercept << "\n"
        << "r_squared=" << fit.r_squared << "\n";
    return out.str();
}

double martingale_envelope_check(const std::vector<Trajectory>& trajs, double diameter, double c) {
    if (trajs.empty()) {
        throw Error("martingale_envelope_check: no trajectories");
    }
    int within = 0;
    for (const auto& tr : trajs) {
        if (!tr.energy_available || tr.martingale.empty()) {
            throw Error("martingale_envelope_check: trajectory has no martingale series");
        }
        const double limit = c * diameter * martingale_envelope(tr.b.back());
        if (std::abs(tr.martingale.back()) <= limit) {
            ++within;
        }
    }
    return static_cast<double>(within) / static_cast<double>(trajs.size());
}

double AptReport::max_distance() const {
    double worst = 0.0;
    for (const auto& w : windows) worst = std::max(worst, w.max_distance);
    return worst;
}

bool AptReport::all_within() const {
    return detected && !windows.empty() && max_distance() < radius;
}

double detect_t2(const Trajectory& traj, double window, double epsilon) {
    if (!traj.energy_available) {
        return -1.0;
    }
    for (std::size_t i = 0; i < traj.size(); ++i) {
        if (traj.times[i] >= window && traj.energy[i] <= epsilon / 3.0) {
            return traj.times[i];
        }
    }
    return -1.0;
}

AptReport apt_experiment(const Trajectory& traj, const SystemSpec& spec,
                         const MinimizerCertificate& cert, double t2, double window, double epsilon) {
    AptReport report;
    report.t2 = t2;
    report.t0_window = window;
    report.epsilon = epsilon;
    report.radius = epsilon / 3.0;
    if (!is_accelerated(spec.kind)) {
        throw Error("apt_experiment: needs an AMD or SAMD specification");
    }
    if (!traj.energy_available || t2 < traj.times.front()) {
        return report;
    }
    report.detected = true;

    SystemSpec restart = spec;
    restart.kind = SystemKind::AMD;
    restart.noise = NoiseModel::zero(spec.map.dim());

    const double dt = traj.h * traj.stride;
    auto index_of = [&](double t) {
        const auto it = std::lower_bound(traj.times.begin(), traj.times.end(), t - 0.5 * dt);
        return static_cast<std::size_t>(it - traj.times.begin());
    };
    const long per_window = std::lround(window / dt);
    for (int k = 0;; ++k) {
        const std::size_t first = index_of(t2 + k * window);
        if (first >= traj.size() || first + static_cast<std::size_t>(per_window) >= traj.size()) {
            break;
        }
        AptWindow w;
        w.start = traj.times[first];
        restart.x0 = traj.x[first];
        restart.z0 = traj.z[first];
        SimulationOptions opt;
        opt.t0 = w.start;
        opt.t_end = traj.times[first + static_cast<std::size_t>(per_window)];
        opt.h = traj.h;
        opt.stride = traj.stride;
        opt.certificate = cert;
        NoiseStream unused(0, 0);
        const Trajectory det = simulate(restart, opt, unused);
        const std::size_t len = std::min(det.size(), static_cast<std::size_t>(per_window) + 1);
        for (std::size_t j = 0; j < len; ++j) {
            w.times.push_back(traj.times[first + j]);
            w.stochastic_energy.push_back(traj.energy[first + j]);
            w.restart_energy.push_back(det.energy[j]);
            w.max_distance = std::max(w.max_distance, std::abs(traj.energy[first + j] - det.energy[j]));
        }
        report.windows.push_back(std::move(w));
    }
    return report;
}

CovariationResult covariation_check(int n, double eta, double sigma0, double h, int steps,
                                    std::uint64_t seed) {
    if (n < 1 || steps < 2 || !(h > 0.0) || !(eta > 0.0)) {
        throw Error("covariation_check: need n >= 1, steps >= 2, h > 0 and eta > 0");
    }
    RateBundle rates;
    rates.eta = Schedule::constant(eta);
    rates.r = Schedule::constant(1.0);
    rates.s = Schedule::constant(1.0);
    SystemSpec spec(SystemKind::SAMD, MirrorMap::euclidean(n), Objective::quadratic(Vector::Zero(n)),
                    rates, NoiseModel::scalar(n, sigma0, 0.0));
    SimulationOptions opt;
    opt.t0 = 1.0;
    opt.h = h;
    opt.t_end = 1.0 + h * steps;
    opt.stride = 1;
    // The averaging step is irrelevant here; keep it inside the guard.
    if (eta * h > kMaxAveragingStep) {
        throw StepTooLarge("covariation_check: eta h must stay <= 0.5");
    }
    NoiseStream stream(seed, 0);
    const Trajectory traj = simulate(spec, opt, stream);

    const int m = static_cast<int>(traj.size()) - 1;
    Matrix inc(m, n);
    for (int k = 0; k < m; ++k) {
        inc.row(k) = (traj.z[static_cast<std::size_t>(k + 1)] - traj.z[static_cast<std::size_t>(k)]).transpose();
    }
    const Eigen::RowVectorXd mean = inc.colwise().mean();
    const Matrix centered = inc.rowwise() - mean;
    const Matrix cov = centered.transpose() * centered / static_cast<double>(m - 1);

    CovariationResult out;
    out.steps = m;
    out.target = eta * eta * sigma0 * sigma0 * h;
    out.off_diagonal_band = 4.0 / std::sqrt(static_cast<double>(m)) * out.target;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) {
                const double err = out.target > 0.0 ? std::abs(cov(i, i) - out.target) / out.target
                                                    : std::abs(cov(i, i));
                out.max_relative_error = std::max(out.max_relative_error, err);
            } else {
                out.max_off_diagonal = std::max(out.max_off_diagonal, std::abs(cov(i, j)));
            }
        }
    }
    return out;
}

std::string ensemble_csv_header() {
    return "t,mean_gap,std_gap,stderr_gap,mean_energy,std_energy,bound_thm42,b,envelope";
}

void write_ensemble_csv(std::ostream& out, const EnsembleStats& st) {
    out << ensemble_csv_header() << '\n';
    std::string line;
    auto cell = [&](const std::vector<double>& v, std::size_t k) {
        line += ',';
        if (k < v.size()) append_number(line, v[k]);
    };
    for (std::size_t k = 0; k < st.times.size(); ++k) {
        line.clear();
        append_number(line, st.times[k]);
        cell(st.mean_gap, k);
        cell(st.std_gap, k);
        cell(st.stderr_gap, k);
        cell(st.mean_energy, k);
        cell(st.std_energy, k);
        cell(st.bound, k);
        cell(st.b, k);
        cell(st.envelope, k);
        out << line << '\n';
    }
}

}  // namespace samd
