#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "samd/mirror.hpp"
#include "samd/noise.hpp"
#include "samd/objectives.hpp"
#include "samd/schedules.hpp"

namespace samd {

enum class SystemKind {
    MD,           ///< dz = -grad f(x) dt, x = grad psi*(z / s)
    SMD,          ///< dZ = -grad f(X) dt - sigma dB, X = grad psi*(Z / s)
    AMD,          ///< dz = -eta grad f(x) dt, dx = a (grad psi*(z / s) - x) dt
    SAMD,         ///< AMD driven by the noisy gradient dG = grad f dt + sigma dB
    NesterovOde,  ///< x'' = -grad f(x) - x' (beta + 1) / t; z holds the velocity
};

std::string to_string(SystemKind kind);
/// Accepts md, smd, amd, samd, nesterov (case-insensitive). Throws Error otherwise.
SystemKind system_kind_from_string(const std::string& name);
bool is_stochastic(SystemKind kind) noexcept;
bool is_accelerated(SystemKind kind) noexcept;

/// One dynamics run minus the time grid. MD and SMD only read rates.s.
struct SystemSpec {
    SystemKind kind;
    MirrorMap map;
    Objective objective;
    RateBundle rates;
    NoiseModel noise;
    Vector x0;
    Vector z0;
    double beta = 2.0;  ///< NesterovOde damping parameter

    /// x0 defaults to the barycenter (entropic) or the origin, z0 to zero and
    /// the noise to the zero model.
    SystemSpec(SystemKind kind, MirrorMap map, Objective objective, RateBundle rates = {},
               std::optional<NoiseModel> noise = std::nullopt);

    /// Checks the kind-specific invariants: matching dimensions, feasible x0,
    /// zero noise for deterministic kinds, euclidean map and beta >= 2 for the
    /// ODE, admissible rates for AMD / SAMD. Throws Error listing the first failure.
    void validate(double horizon) const;
};

struct State {
    Vector x;
    Vector z;  ///< dual state, or the velocity for NesterovOde
};

State step_samd(const State& state, double t, double h, const SystemSpec& spec, const Vector& dw);
State step_amd(const State& state, double t, double h, const SystemSpec& spec);
State step_md(const State& state, double t, double h, const SystemSpec& spec);
State step_smd(const State& state, double t, double h, const SystemSpec& spec, const Vector& dw);
State step_nesterov_ode(const State& state, double t, double h, double beta,
                        const Objective& objective);

struct SimulationOptions {
    double t0 = 1.0;
    double t_end = 10.0;
    double h = 1e-2;
    int stride = 1;
    /// Minimizer used for gaps, energy and the martingale term. Computed with
    /// solve_minimizer when absent.
    std::optional<MinimizerCertificate> certificate;
};

struct Trajectory {
    SystemKind kind = SystemKind::AMD;
    double h = 0.0;
    int stride = 1;
    long steps = 0;
    std::uint64_t stream_key = 0;
    bool energy_available = false;  ///< false: energy and martingale series are empty

    std::vector<double> times;
    std::vector<Vector> x;
    std::vector<Vector> z;
    std::vector<double> gap;
    std::vector<double> energy;
    std::vector<double> b;
    std::vector<double> martingale;

    std::size_t size() const noexcept { return times.size(); }
    int dim() const noexcept { return x.empty() ? 0 : static_cast<int>(x.front().size()); }
    bool operator==(const Trajectory& other) const;
};

/// Largest allowed a(t) h; keeps the primal averaging step a convex combination.
inline constexpr double kMaxAveragingStep = 0.5;

/// Explicit Euler(-Maruyama) integration over ceil((t_end - t0) / h) steps,
/// recording every `stride` steps plus the final step. The martingale
/// integral uses the same dW as the dual update (left-point rule).
/// Throws StepTooLarge, NonFinite (with the step index) or Error on bad input.
Trajectory simulate(const SystemSpec& spec, const SimulationOptions& options, NoiseStream& stream);

/// Number of steps simulate takes for the given grid.
long step_count(double t0, double t_end, double h);

/// Running trapezoidal average (1 / (t - t0)) int X over the recorded times.
std::vector<Vector> averaged_iterate(const Trajectory& traj);

/// Max over recorded times of |X(t) - x_w(t)|_inf where x_w is the weighted
/// average of the mirror trajectory with weights w = exp(int a), evaluated by
/// trapezoidal quadrature. Needs an AMD / SAMD trajectory with stride 1.
double primal_average_residual(const Trajectory& traj, const MirrorMap& map, const RateBundle& rates);

/// Header `t,x_1..x_n,z_1..z_n,gap,energy,b,martingale`.
std::string trajectory_csv_header(int n);
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

}  // namespace samd
