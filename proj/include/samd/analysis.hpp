#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "samd/dynamics.hpp"
#include "samd/energy.hpp"
#include "samd/noise.hpp"

namespace samd {

/// Max over interior recorded steps of (central-difference dL/dt) minus the
/// drift bound (f - f*)(r-dot - eta) + psi(x*) s-dot, clamped below at 0.
/// Needs a deterministic AMD trajectory recorded with stride 1.
double lyapunov_drift_check(const Trajectory& traj, const EnergyContext& ctx);

/// (psi(x*) (s(t) - s(t0)) + L0) / r(t) with L0 the energy at t0.
double deterministic_rate_bound(const EnergyContext& ctx, double initial_energy, double t);

/// Expected-gap bound
///   (L0 + psi(x*) (s(t) - s(t0)) + (n L_psi* / 2) int_{t0}^t eta^2 sigma*^2 / s) / r(t),
/// closed form for power-law inputs, adaptive quadrature otherwise.
double expected_value_bound(const EnergyContext& ctx, const NoiseModel& noise,
                            double initial_energy, double t);

/// sqrt(max(b, e) ln ln max(b, e^2)); 0 for b = 0.
double martingale_envelope(double b);

struct BEnvelope {
    double b = 0.0;
    double envelope = 0.0;
};

/// b(t) = int_{t0}^t eta^2 sigma*^2 and its envelope.
BEnvelope b_and_envelope(const Schedule& eta, const Schedule& sigma_star, double t0, double t);

struct EnsembleStats {
    std::vector<double> times;
    std::vector<double> mean_gap;
    std::vector<double> std_gap;       ///< empty when count < 2
    std::vector<double> stderr_gap;    ///< empty when count < 2
    std::vector<double> mean_energy;   ///< empty when the energy is unavailable
    std::vector<double> std_energy;    ///< empty when count < 2 or no energy
    std::vector<double> mean_averaged_gap;  ///< f(running average of X) - f*
    std::vector<double> bound;         ///< expected-gap bound; empty unless AMD / SAMD with energy
    std::vector<double> b;             ///< closed-form b(t)
    std::vector<double> envelope;
    int count = 0;

    bool spread_available() const noexcept { return count >= 2; }
};

struct EnsembleResult {
    EnsembleStats stats;
    std::vector<Trajectory> trajectories;
    MinimizerCertificate certificate;
};

/// Runs trajectories 0..count-1 of `spec` with streams (base_seed, index) on
/// `threads` workers (0: hardware concurrency) and reduces them in index
/// order, so the result does not depend on the thread count.
EnsembleResult ensemble(const SystemSpec& spec, const SimulationOptions& options, int count,
                        std::uint64_t base_seed, int threads = 0, bool keep_trajectories = true);

struct RateFit {
    double t_lo = 0.0;
    double t_hi = 0.0;
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    double r_squared = 0.0;
    int points = 0;
};

/// Least-squares slope of ln(value) against ln(t) using the recorded times
/// nearest to `points` geometrically spaced targets in [t_lo, t_hi].
/// Throws NonPositiveValues if a selected value is <= 0 and Error when fewer
/// than 10 distinct points fall in the window.
RateFit fit_rate_exponent(const std::vector<double>& times, const std::vector<double>& values,
                          double t_lo, double t_hi, int points = 30);

/// Key-value text block describing a fit.
std::string to_string(const RateFit& fit);

/// Fraction of trajectories with |int <V, dB>| <= c D envelope(b) at the final time.
double martingale_envelope_check(const std::vector<Trajectory>& trajs, double diameter, double c);

struct AptWindow {
    double start = 0.0;
    double max_distance = 0.0;
    std::vector<double> times;
    std::vector<double> stochastic_energy;
    std::vector<double> restart_energy;
};

struct AptReport {
    bool detected = false;  ///< false when the energy never reached epsilon / 3 after T0
    double t2 = 0.0;
    double t0_window = 0.0;
    double epsilon = 0.0;
    double radius = 0.0;     ///< epsilon / 3
    std::vector<AptWindow> windows;

    double max_distance() const;
    bool all_within() const;
};

/// First recorded time >= T0 at which the energy is <= epsilon / 3, or a
/// negative value if there is none.
double detect_t2(const Trajectory& traj, double window, double epsilon);

/// Restarts the deterministic AMD flow from (X, Z) at T2 + k T0 for every
/// full window in the trajectory and compares energies along each window.
AptReport apt_experiment(const Trajectory& traj, const SystemSpec& spec,
                         const MinimizerCertificate& cert, double t2, double window, double epsilon);

struct CovariationResult {
    int steps = 0;
    double target = 0.0;              ///< eta^2 sigma0^2 h on the diagonal
    double max_relative_error = 0.0;  ///< diagonal entries; 0 when the target is 0
    double max_off_diagonal = 0.0;
    double off_diagonal_band = 0.0;   ///< 4 / sqrt(steps) * target
    bool off_diagonal_ok() const { return max_off_diagonal <= off_diagonal_band; }
};

/// Simulates dZ = -eta sigma dB alone (euclidean map, zero gradient) and
/// compares the sample covariance of the increments with eta^2 Sigma h.
CovariationResult covariation_check(int n, double eta, double sigma0, double h, int steps,
                                    std::uint64_t seed);

/// Header `t,mean_gap,std_gap,stderr_gap,mean_energy,std_energy,bound_thm42,b,envelope`.
std::string ensemble_csv_header();
void write_ensemble_csv(std::ostream& out, const EnsembleStats& stats);

}  // namespace samd
