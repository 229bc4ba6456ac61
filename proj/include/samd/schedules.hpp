#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace samd {

/// A non-negative scalar function of time t > 0 with derivative access.
///
/// Power laws coef * t^exponent are first class: value, derivative and
/// integral are exact. Two other forms exist for checking the generic
/// (quadrature) code paths: a piecewise-linear table and the pointwise
/// quotient of two schedules.
class Schedule {
public:
    struct PowerLaw {
        double coef = 1.0;
        double exponent = 0.0;
        bool operator==(const PowerLaw&) const = default;
    };
    struct Tabulated {
        std::vector<double> times;
        std::vector<double> values;
        bool operator==(const Tabulated&) const = default;
    };
    struct Quotient {
        std::shared_ptr<const Schedule> numerator;
        std::shared_ptr<const Schedule> denominator;
        bool operator==(const Quotient& other) const;
    };

    Schedule() : form_(PowerLaw{}) {}

    static Schedule power_law(double coef, double exponent);
    static Schedule constant(double value) { return power_law(value, 0.0); }
    /// Piecewise-linear interpolation, constant extrapolation outside the table.
    static Schedule tabulated(std::vector<double> times, std::vector<double> values);
    static Schedule quotient(const Schedule& numerator, const Schedule& denominator);

    bool is_power_law() const noexcept { return std::holds_alternative<PowerLaw>(form_); }
    /// Throws if the schedule is not a power law.
    const PowerLaw& power() const;

    double value(double t) const;
    double operator()(double t) const { return value(t); }
    double derivative(double t) const;
    /// int_{t0}^{t1} value(tau) dtau (closed form for power laws).
    double integral(double t0, double t1) const;

    bool operator==(const Schedule& other) const { return form_ == other.form_; }

private:
    using Form = std::variant<PowerLaw, Tabulated, Quotient>;
    explicit Schedule(Form form) : form_(std::move(form)) {}

    Form form_;
};

/// Closed-form int_{t0}^{t1} coef * tau^exponent dtau.
double power_law_integral(double coef, double exponent, double t0, double t1);

/// Adaptive Simpson quadrature of fn over [a, b].
double integrate(const std::function<double(double)>& fn, double a, double b,
                 double tol = 1e-12);

/// w(t) = exp(int_{t0}^t a), with w(t0) = 1.
double averaging_weight(const Schedule& a, double t0, double t);

/// Learning rate eta, energy rate r and inverse sensitivity s. The averaging
/// rate a = eta / r is derived, never stored.
struct RateBundle {
    Schedule eta = Schedule::constant(1.0);
    Schedule r = Schedule::constant(1.0);
    Schedule s = Schedule::constant(1.0);
    double t0 = 1.0;

    /// a = eta / r; a power law whenever eta and r are.
    Schedule averaging() const;
    double a(double t) const { return eta(t) / r(t); }

    /// r = coef_r t^alpha_r, eta = r-dot, s = coef_s t^alpha_s.
    static RateBundle power_laws(double alpha_r, double alpha_s, double coef_r = 1.0,
                                 double coef_s = 1.0, double t0 = 1.0);

    bool operator==(const RateBundle&) const = default;
};

struct ConditionResult {
    std::string name;
    bool passed = true;
    double worst_time = 0.0;
    double worst_value = 0.0;  ///< signed margin at worst_time; negative means violated
    std::string note;
};

struct AdmissibilityReport {
    std::vector<ConditionResult> conditions;
    bool all_passed() const;
    const ConditionResult* find(const std::string& name) const;
};

inline constexpr const char* kCondPositive = "positive rates";
inline constexpr const char* kCondCoupling = "a = eta / r";
inline constexpr const char* kCondSensitivity = "s non-decreasing";
inline constexpr const char* kCondEtaDominates = "eta >= r-dot";

/// Checks positivity, a * r = eta, s-dot >= 0 and eta >= r-dot on
/// [t0, horizon]. Power laws are decided from their endpoints (the ratios
/// involved are monotone); other schedules are sampled on a log grid.
AdmissibilityReport check_admissible(const RateBundle& bundle, double horizon);

struct AmdExponents {
    double alpha_r = 0.0;
    double predicted_rate = 0.0;  ///< exponent of the expected-gap bound, alpha_sigma - 1/2
};

/// alpha_r = alpha_s - alpha_sigma + 1/2; throws InvalidRegime when
/// alpha_sigma >= 1/2 or the resulting alpha_r <= 0.
AmdExponents optimal_amd_exponents(double alpha_sigma, double alpha_s);

struct SmdExponents {
    double alpha_s = 0.0;
    double predicted_rate = 0.0;  ///< max(alpha_sigma - 1/2, -1)
};

/// alpha_s = max(0, alpha_sigma + 1/2) for the non-accelerated averaged iterate.
SmdExponents optimal_smd_exponent(double alpha_sigma);

struct AsConvergenceReport {
    bool abstained = false;          ///< non-power-law input: no verdict
    bool product_vanishes = false;   ///< eta * sigma* = o(1/sqrt(log t))
    bool integral_dominates = false; ///< int eta dominates b and sqrt(b log log b)
    bool passed() const { return !abstained && product_vanishes && integral_dominates; }
    double product_exponent = 0.0;
    std::string b_growth;            ///< e.g. "t^0.4", "log t", "bounded"
    std::string eta_integral_growth;
    double b_at_horizon = 0.0;
    double eta_integral_at_horizon = 0.0;
    std::string note;
};

/// Symbolic check, for power laws, of the almost-sure convergence conditions
/// of SAMD with r = s = 1 and a = eta.
AsConvergenceReport as_convergence_conditions(const Schedule& eta, const Schedule& sigma_star,
                                              double horizon, double t0 = 1.0);

}  // namespace samd
