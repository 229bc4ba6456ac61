#include "samd/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

#include "samd/errors.hpp"

namespace samd {

namespace {

void require_positive_time(double t) {
    if (!(t > 0.0)) {
        throw NonPositiveTime("schedule evaluated at non-positive time t = " + std::to_string(t));
    }
}

double simpson_step(const std::function<double(double)>& fn, double a, double b, double fa,
                    double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = fn(lm);
    const double frm = fn(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return simpson_step(fn, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(fn, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

// Log-spaced sample of [t0, t1] including both endpoints.
std::vector<double> log_grid(double t0, double t1, int points) {
    std::vector<double> grid(points);
    const double ratio = std::log(t1 / t0);
    for (int i = 0; i < points; ++i) {
        grid[i] = t0 * std::exp(ratio * i / (points - 1));
    }
    grid.back() = t1;
    return grid;
}

// Growth order t^power (log t)^log_power (log log t)^loglog_power.
struct Growth {
    double power = 0.0;
    double log_power = 0.0;
    double loglog_power = 0.0;

    bool diverges() const { return power > 0.0 || log_power > 0.0 || loglog_power > 0.0; }
    auto key() const { return std::make_tuple(power, log_power, loglog_power); }
    std::string describe() const {
        if (!diverges()) {
            return "bounded";
        }
        std::ostringstream os;
        const char* sep = "";
        if (power > 0.0) {
            os << "t^" << power;
            sep = " ";
        }
        if (log_power > 0.0) {
            os << sep << (log_power == 1.0 ? "log t" : "(log t)^" + std::to_string(log_power));
            sep = " ";
        }
        if (loglog_power > 0.0) {
            os << sep << "(log log t)^" << loglog_power;
        }
        return os.str();
    }
};

// Growth of int_{t0}^t tau^exponent dtau.
Growth integral_growth(double exponent) {
    constexpr double eps = 1e-12;
    if (exponent > -1.0 + eps) {
        return {exponent + 1.0, 0.0, 0.0};
    }
    if (exponent >= -1.0 - eps) {
        return {0.0, 1.0, 0.0};
    }
    return {};
}

}  // namespace

bool Schedule::Quotient::operator==(const Quotient& other) const {
    return *numerator == *other.numerator && *denominator == *other.denominator;
}

Schedule Schedule::power_law(double coef, double exponent) {
    if (!std::isfinite(coef) || !std::isfinite(exponent) || coef < 0.0) {
        throw Error("power-law schedule needs a finite, non-negative coefficient and a finite exponent");
    }
    return Schedule(PowerLaw{coef, exponent});
}

Schedule Schedule::tabulated(std::vector<double> times, std::vector<double> values) {
    if (times.size() < 2 || times.size() != values.size()) {
        throw Error("tabulated schedule needs at least two (time, value) pairs");
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] > 0.0) || (i > 0 && !(times[i] > times[i - 1]))) {
            throw Error("tabulated schedule times must be positive and strictly increasing");
        }
        if (!std::isfinite(values[i]) || values[i] < 0.0) {
            throw Error("tabulated schedule values must be finite and non-negative");
        }
    }
    return Schedule(Tabulated{std::move(times), std::move(values)});
}

Schedule Schedule::quotient(const Schedule& numerator, const Schedule& denominator) {
    if (numerator.is_power_law() && denominator.is_power_law()) {
        const auto& num = numerator.power();
        const auto& den = denominator.power();
        if (!(den.coef > 0.0)) {
            throw Error("quotient schedule with a zero denominator");
        }
        return power_law(num.coef / den.coef, num.exponent - den.exponent);
    }
    return Schedule(Quotient{std::make_shared<const Schedule>(numerator),
                             std::make_shared<const Schedule>(denominator)});
}

const Schedule::PowerLaw& Schedule::power() const {
    if (const auto* p = std::get_if<PowerLaw>(&form_)) {
        return *p;
    }
    throw Error("schedule is not a power law");
}

double Schedule::value(double t) const {
    require_positive_time(t);
    return std::visit(
        [t](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, PowerLaw>) {
                return f.exponent == 0.0 ? f.coef : f.coef * std::pow(t, f.exponent);
            } else if constexpr (std::is_same_v<T, Tabulated>) {
                if (t <= f.times.front()) {
                    return f.values.front();
                }
                if (t >= f.times.back()) {
                    return f.values.back();
                }
                const auto hi = std::upper_bound(f.times.begin(), f.times.end(), t);
                const auto i = static_cast<std::size_t>(hi - f.times.begin());
                const double w = (t - f.times[i - 1]) / (f.times[i] - f.times[i - 1]);
                return (1.0 - w) * f.values[i - 1] + w * f.values[i];
            } else {
                return f.numerator->value(t) / f.denominator->value(t);
            }
        },
        form_);
}

double Schedule::derivative(double t) const {
    require_positive_time(t);
    return std::visit(
        [t](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, PowerLaw>) {
                return f.exponent == 0.0 ? 0.0
                                         : f.coef * f.exponent * std::pow(t, f.exponent - 1.0);
            } else if constexpr (std::is_same_v<T, Tabulated>) {
                if (t < f.times.front() || t >= f.times.back()) {
                    return 0.0;
                }
                const auto hi = std::upper_bound(f.times.begin(), f.times.end(), t);
                const auto i = static_cast<std::size_t>(hi - f.times.begin());
                return (f.values[i] - f.values[i - 1]) / (f.times[i] - f.times[i - 1]);
            } else {
                const double num = f.numerator->value(t);
                const double den = f.denominator->value(t);
                return (f.numerator->derivative(t) * den - num * f.denominator->derivative(t)) /
                       (den * den);
            }
        },
        form_);
}

double power_law_integral(double coef, double exponent, double t0, double t1) {
    require_positive_time(t0);
    require_positive_time(t1);
    if (coef == 0.0) {
        return 0.0;
    }
    if (std::abs(exponent + 1.0) < 1e-14) {
        return coef * std::log(t1 / t0);
    }
    const double p = exponent + 1.0;
    return coef * (std::pow(t1, p) - std::pow(t0, p)) / p;
}

double integrate(const std::function<double(double)>& fn, double a, double b, double tol) {
    if (a == b) {
        return 0.0;
    }
    const double fa = fn(a);
    const double fb = fn(b);
    const double fm = fn(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(fn, a, b, fa, fm, fb, whole, tol, 50);
}

double Schedule::integral(double t0, double t1) const {
    if (const auto* p = std::get_if<PowerLaw>(&form_)) {
        return power_law_integral(p->coef, p->exponent, t0, t1);
    }
    require_positive_time(t0);
    require_positive_time(t1);
    if (const auto* tab = std::get_if<Tabulated>(&form_)) {
        // Split at the knots so every Simpson panel sees a smooth piece.
        const double lo = std::min(t0, t1);
        const double hi = std::max(t0, t1);
        std::vector<double> cuts{lo};
        for (double knot : tab->times) {
            if (knot > lo && knot < hi) {
                cuts.push_back(knot);
            }
        }
        cuts.push_back(hi);
        double total = 0.0;
        for (std::size_t i = 1; i < cuts.size(); ++i) {
            total += integrate([this](double t) { return value(t); }, cuts[i - 1], cuts[i]);
        }
        return t1 >= t0 ? total : -total;
    }
    return integrate([this](double t) { return value(t); }, t0, t1);
}

double averaging_weight(const Schedule& a, double t0, double t) {
    if (t < t0) {
        throw Error("averaging_weight requires t >= t0");
    }
    return std::exp(a.integral(t0, t));
}

Schedule RateBundle::averaging() const { return Schedule::quotient(eta, r); }

RateBundle RateBundle::power_laws(double alpha_r, double alpha_s, double coef_r, double coef_s,
                                  double t0) {
    RateBundle b;
    b.r = Schedule::power_law(coef_r, alpha_r);
    b.eta = Schedule::power_law(coef_r * alpha_r, alpha_r - 1.0);
    b.s = Schedule::power_law(coef_s, alpha_s);
    b.t0 = t0;
    return b;
}

bool AdmissibilityReport::all_passed() const {
    return std::all_of(conditions.begin(), conditions.end(),
                       [](const ConditionResult& c) { return c.passed; });
}

const ConditionResult* AdmissibilityReport::find(const std::string& name) const {
    for (const auto& c : conditions) {
        if (c.name == name) {
            return &c;
        }
    }
    return nullptr;
}

AdmissibilityReport check_admissible(const RateBundle& b, double horizon) {
    if (!(horizon > b.t0) || !(b.t0 > 0.0)) {
        throw Error("check_admissible requires horizon > t0 > 0");
    }
    constexpr double rel_tol = 1e-12;
    AdmissibilityReport report;
    const bool analytic = b.eta.is_power_law() && b.r.is_power_law() && b.s.is_power_law();
    const std::vector<double> grid =
        analytic ? std::vector<double>{b.t0, horizon} : log_grid(b.t0, horizon, 1000);

    ConditionResult positive{kCondPositive, true, b.t0, 0.0, ""};
    ConditionResult coupling{kCondCoupling, true, b.t0, 0.0, ""};
    ConditionResult monotone{kCondSensitivity, true, b.t0, 0.0, ""};
    ConditionResult dominates{kCondEtaDominates, true, b.t0, 0.0, ""};
    bool first = true;
    const Schedule a = b.averaging();
    for (double t : grid) {
        const double eta = b.eta(t);
        const double r = b.r(t);
        const double s = b.s(t);
        const double min_rate = std::min({eta, r, s});
        const double coupling_err = std::abs(a(t) * r - eta) - rel_tol * std::max(1.0, eta);
        const double sdot = b.s.derivative(t);
        const double margin = eta - b.r.derivative(t);
        const double margin_tol = rel_tol * std::max({1.0, eta, std::abs(b.r.derivative(t))});
        if (first || min_rate < positive.worst_value) {
            positive.worst_time = t;
            positive.worst_value = min_rate;
        }
        if (first || -coupling_err < coupling.worst_value) {
            coupling.worst_time = t;
            coupling.worst_value = -coupling_err;
        }
        if (first || sdot < monotone.worst_value) {
            monotone.worst_time = t;
            monotone.worst_value = sdot;
        }
        if (first || margin + margin_tol < dominates.worst_value) {
            dominates.worst_time = t;
            dominates.worst_value = margin + margin_tol;
        }
        first = false;
    }
    // eta may vanish (a = 0 is a legitimate degenerate case); r and s may not.
    positive.passed = std::min(b.r(positive.worst_time), b.s(positive.worst_time)) > 0.0 &&
                      positive.worst_value >= 0.0;
    coupling.passed = coupling.worst_value >= 0.0;
    monotone.passed = monotone.worst_value >= 0.0;
    monotone.note = "s(t) must be a non-decreasing, inverse sensitivity parameter";
    dominates.passed = dominates.worst_value >= 0.0;
    dominates.note = "needed by the deterministic and expected-value rate bounds";
    if (!analytic) {
        for (auto* c : {&positive, &coupling, &monotone, &dominates}) {
            c->note += c->note.empty() ? "sampled on a 1000-point log grid"
                                       : "; sampled on a 1000-point log grid";
        }
    }
    report.conditions = {positive, coupling, monotone, dominates};
    return report;
}

AmdExponents optimal_amd_exponents(double alpha_sigma, double alpha_s) {
    if (!(alpha_sigma < 0.5)) {
        throw InvalidRegime("optimal AMD exponents need alpha_sigma < 1/2");
    }
    const double alpha_r = alpha_s - alpha_sigma + 0.5;
    if (!(alpha_r > 0.0)) {
        throw InvalidRegime("optimal alpha_r = alpha_s - alpha_sigma + 1/2 must be positive");
    }
    return {alpha_r, alpha_sigma - 0.5};
}

SmdExponents optimal_smd_exponent(double alpha_sigma) {
    if (!(alpha_sigma < 0.5)) {
        throw InvalidRegime("optimal SMD sensitivity needs alpha_sigma < 1/2");
    }
    return {std::max(0.0, alpha_sigma + 0.5), std::max(alpha_sigma - 0.5, -1.0)};
}

AsConvergenceReport as_convergence_conditions(const Schedule& eta, const Schedule& sigma_star,
                                              double horizon, double t0) {
    AsConvergenceReport report;
    if (!eta.is_power_law() || !sigma_star.is_power_law()) {
        report.abstained = true;
        report.note = "verdict is only available for power-law schedules";
        return report;
    }
    const auto& e = eta.power();
    const auto& sg = sigma_star.power();
    const bool noiseless = sg.coef == 0.0;
    report.product_exponent = e.exponent + sg.exponent;
    report.eta_integral_at_horizon = eta.integral(t0, horizon);
    const double b_coef = e.coef * e.coef * sg.coef * sg.coef;
    const double b_exp = 2.0 * report.product_exponent;
    report.b_at_horizon = power_law_integral(b_coef, b_exp, t0, horizon);

    if (noiseless || report.product_exponent < 0.0) {
        report.product_vanishes = true;
    } else if (report.product_exponent == 0.0) {
        report.note = "eta * sigma* is constant, which is not o(1/sqrt(log t))";
    } else {
        report.note = "eta * sigma* grows";
    }

    const Growth eta_growth = e.coef == 0.0 ? Growth{} : integral_growth(e.exponent);
    const Growth b_growth = noiseless ? Growth{} : integral_growth(b_exp);
    Growth envelope_growth;
    if (b_growth.diverges()) {
        envelope_growth = {b_growth.power / 2.0, b_growth.log_power / 2.0, 0.5};
    }
    report.b_growth = b_growth.describe();
    report.eta_integral_growth = eta_growth.describe();
    report.integral_dominates = eta_growth.diverges() && eta_growth.key() > b_growth.key() &&
                                eta_growth.key() > envelope_growth.key();
    if (!report.integral_dominates) {
        if (!report.note.empty()) {
            report.note += "; ";
        }
        report.note += "int eta (" + report.eta_integral_growth + ") does not dominate b (" +
                       report.b_growth + ") and its envelope";
    }
    return report;
}

}  // namespace samd
