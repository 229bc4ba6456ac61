#include <doctest.h>

#include <cmath>
#include <sstream>

#include "samd/analysis.hpp"
#include "samd/errors.hpp"

using namespace samd;

namespace {

SystemSpec default_spec(SystemKind kind, double sigma0) {
    return SystemSpec(kind, MirrorMap::entropic_simplex(3), Objective::default_sum_exp(),
                      RateBundle::power_laws(1.0, 0.5), NoiseModel::scalar(3, sigma0, 0.0));
}

}  // namespace

TEST_CASE("martingale envelope frozen values") {
    CHECK(martingale_envelope(100.0) == doctest::Approx(12.357910931091472749).epsilon(1e-14));
    CHECK(martingale_envelope(0.0) == 0.0);
    CHECK(martingale_envelope(1.0) == martingale_envelope(std::exp(1.0)));
    const BEnvelope be = b_and_envelope(Schedule::constant(1.0), Schedule::constant(0.1), 1.0, 101.0);
    CHECK(be.b == doctest::Approx(1.0));
}

TEST_CASE("rate bounds on the default instance match the oracle") {
    const SystemSpec spec = default_spec(SystemKind::SAMD, 0.1);
    const MinimizerCertificate cert = solve_minimizer(spec.objective, spec.map, 1e-13);
    const EnergyContext ctx(spec.map, spec.objective, cert, spec.rates);
    const double l0 = 0.59663144784346633;
    CHECK(deterministic_rate_bound(ctx, l0, 10.0) == doctest::Approx(0.082988007971933589).epsilon(1e-9));
    CHECK(expected_value_bound(ctx, spec.noise, l0, 10.0) == doctest::Approx(0.089474840952438727).epsilon(1e-9));
    CHECK(expected_value_bound(ctx, NoiseModel::zero(3), l0, 10.0) ==
          doctest::Approx(deterministic_rate_bound(ctx, l0, 10.0)));
}

TEST_CASE("rate fit recovers exact exponents") {
    std::vector<double> t, y;
    for (int i = 0; i < 500; ++i) {
        t.push_back(1.0 + 0.5 * i);
        y.push_back(3.0 * std::pow(t.back(), -0.75));
    }
    const RateFit fit = fit_rate_exponent(t, y, 10.0, 200.0);
    CHECK(fit.slope == doctest::Approx(-0.75).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-10));
    CHECK(fit.r_squared == doctest::Approx(1.0));
    CHECK(fit.points >= 10);
    CHECK(to_string(fit).find("slope=") != std::string::npos);

    for (int i = 80; i < 120; ++i) y[i] = -1.0;
    CHECK_THROWS_AS(fit_rate_exponent(t, y, 40.0, 60.0 + 1e-9), NonPositiveValues);
    CHECK_THROWS(fit_rate_exponent(t, y, 1.0, 2.0));
}

TEST_CASE("ensemble does not depend on the thread count") {
    SimulationOptions opt;
    opt.t_end = 10.0;
    opt.stride = 10;
    const SystemSpec spec = default_spec(SystemKind::SAMD, 0.1);
    const EnsembleResult one = ensemble(spec, opt, 12, 77, 1);
    const EnsembleResult four = ensemble(spec, opt, 12, 77, 4);
    CHECK(one.stats.mean_gap == four.stats.mean_gap);
    CHECK(one.stats.std_gap == four.stats.std_gap);
    CHECK(one.stats.mean_energy == four.stats.mean_energy);
    REQUIRE(one.trajectories.size() == 12);
    for (std::size_t i = 0; i < 12; ++i) CHECK(one.trajectories[i] == four.trajectories[i]);
    CHECK(one.stats.spread_available());
    CHECK(one.stats.bound.size() == one.stats.times.size());
}

TEST_CASE("zero-noise ensemble has zero spread") {
    SimulationOptions opt;
    opt.t_end = 5.0;
    const EnsembleResult res = ensemble(default_spec(SystemKind::SAMD, 0.0), opt, 5, 1, 2, false);
    CHECK(res.trajectories.empty());
    for (double v : res.stats.std_gap) CHECK(v == 0.0);
    for (double v : res.stats.std_energy) CHECK(v == 0.0);

    const EnsembleResult single = ensemble(default_spec(SystemKind::SAMD, 0.1), opt, 1, 1, 1);
    CHECK_FALSE(single.stats.spread_available());
    CHECK(single.stats.std_gap.empty());
}

TEST_CASE("ensemble CSV header") {
    CHECK(ensemble_csv_header() == "t,mean_gap,std_gap,stderr_gap,mean_energy,std_energy,bound_thm42,b,envelope");
    SimulationOptions opt;
    opt.t_end = 2.0;
    opt.stride = 20;
    const EnsembleResult res = ensemble(default_spec(SystemKind::SAMD, 0.1), opt, 3, 1, 1);
    std::ostringstream out;
    write_ensemble_csv(out, res.stats);
    CHECK(out.str().rfind(ensemble_csv_header() + "\n", 0) == 0);
}

TEST_CASE("Lyapunov drift excess is small for deterministic AMD") {
    const SystemSpec spec = default_spec(SystemKind::AMD, 0.0);
    const MinimizerCertificate cert = solve_minimizer(spec.objective, spec.map, 1e-12);
    const EnergyContext ctx(spec.map, spec.objective, cert, spec.rates);
    SimulationOptions opt;
    opt.t_end = 10.0;
    opt.h = 1e-3;
    opt.certificate = cert;
    NoiseStream s(0, 0);
    const Trajectory tr = simulate(spec, opt, s);
    CHECK(lyapunov_drift_check(tr, ctx) < 1e-2);
}

TEST_CASE("quadratic covariation") {
    const CovariationResult c = covariation_check(3, 1.0, 0.1, 1e-2, 10000, 1);
    CHECK(c.target == doctest::Approx(1e-4));
    CHECK(c.max_relative_error < 0.1);
    CHECK(c.off_diagonal_ok());
}

TEST_CASE("martingale envelope holds on a small ensemble") {
    SimulationOptions opt;
    opt.t_end = 50.0;
    opt.stride = 50;
    const EnsembleResult res = ensemble(default_spec(SystemKind::SAMD, 0.1), opt, 20, 3, 2);
    CHECK(martingale_envelope_check(res.trajectories, 2.0, 3.0) >= 0.9);
}

TEST_CASE("APT detection") {
    RateBundle rates;
    rates.eta = Schedule::power_law(1.0, -0.8);
    rates.r = Schedule::constant(1.0);
    rates.s = Schedule::constant(1.0);
    const SystemSpec spec(SystemKind::SAMD, MirrorMap::entropic_simplex(3), Objective::default_sum_exp(), rates,
                          NoiseModel::scalar(3, 0.03, 0.3));
    SimulationOptions opt;
    opt.t_end = 400.0;
    opt.stride = 10;
    opt.certificate = solve_minimizer(spec.objective, spec.map, 1e-12);
    NoiseStream s(20171030, 0);
    const Trajectory tr = simulate(spec, opt, s);
    const double t2 = detect_t2(tr, 20.0, 2.4e-3);
    REQUIRE(t2 >= 20.0);
    const AptReport rep = apt_experiment(tr, spec, *opt.certificate, t2, 20.0, 2.4e-3);
    CHECK(rep.detected);
    CHECK(rep.radius == doctest::Approx(8e-4));
    CHECK_FALSE(rep.windows.empty());
    for (const auto& w : rep.windows) CHECK(w.start >= t2);

    CHECK(detect_t2(tr, 20.0, 1e-12) < 0.0);
}
