#include <doctest.h>

#include <cmath>
#include <sstream>

#include "samd/dynamics.hpp"
#include "samd/energy.hpp"
#include "samd/errors.hpp"

using namespace samd;

namespace {

SystemSpec default_spec(SystemKind kind, double sigma0) {
    return SystemSpec(kind, MirrorMap::entropic_simplex(3), Objective::default_sum_exp(),
                      RateBundle::power_laws(1.0, 0.5), NoiseModel::scalar(3, sigma0, 0.0));
}

void check_vec(const Vector& v, std::initializer_list<double> expected, double eps) {
    REQUIRE(v.size() == static_cast<Eigen::Index>(expected.size()));
    int i = 0;
    for (double e : expected) CHECK(v[i++] == doctest::Approx(e).epsilon(eps));
}

}  // namespace

TEST_CASE("one Euler-Maruyama step matches the oracle") {
    const State s0{Vector{{0.2, 0.5, 0.3}}, Vector{{0.3, -0.1, -0.2}}};
    const Vector dw{{0.01, -0.02, 0.005}};

    const State samd = step_samd(s0, 2.0, 0.01, default_spec(SystemKind::SAMD, 0.1), dw);
    check_vec(samd.z, {0.29411754649067342, -0.098705639719456285, -0.19541190677121714}, 1e-13);
    check_vec(samd.x, {0.20103597418344815, 0.49903438815593683, 0.29992963766061502}, 1e-14);

    const State smd = step_smd(s0, 2.0, 0.01, default_spec(SystemKind::SMD, 0.1), dw);
    check_vec(smd.z, {0.29411754649067342, -0.098705639719456285, -0.19541190677121714}, 1e-13);
    check_vec(smd.x, {0.40551276694684009, 0.30737738056047843, 0.28710985249268148}, 1e-13);
}

TEST_CASE("energy matches the oracle and vanishes at the anchor") {
    const SystemSpec spec = default_spec(SystemKind::SAMD, 0.1);
    const MinimizerCertificate cert = solve_minimizer(spec.objective, spec.map, 1e-13);
    const EnergyContext ctx(spec.map, spec.objective, cert, spec.rates);
    CHECK(energy(ctx, Vector{{0.2, 0.5, 0.3}}, Vector{{0.3, -0.1, -0.2}}, 2.0) ==
          doctest::Approx(0.39662194860373143).epsilon(1e-9));
    CHECK(energy(ctx, Vector::Constant(3, 1.0 / 3.0), Vector::Zero(3), 1.0) ==
          doctest::Approx(0.59663144784346633).epsilon(1e-9));
    for (double t : {1.0, 4.0, 50.0}) {
        CHECK(std::abs(energy(ctx, ctx.x_star(), std::sqrt(t) * ctx.z_star(), t)) < 1e-12);
    }
}

TEST_CASE("energy context needs an interior minimizer") {
    Matrix c(1, 3);
    c << 5.0, 0.0, 0.0;
    const Objective obj = Objective::sum_exp(c);
    const MirrorMap map = MirrorMap::entropic_simplex(3);
    const MinimizerCertificate cert = solve_minimizer(obj, map, 1e-10);
    CHECK_THROWS_AS(EnergyContext(map, obj, cert, RateBundle::power_laws(1.0, 0.5)), BoundaryMinimizer);
}

TEST_CASE("simulate: time grid, records and feasibility") {
    SimulationOptions opt;
    opt.t0 = 1.0;
    opt.t_end = 5.0;
    opt.h = 0.01;
    opt.stride = 7;
    NoiseStream stream(1, 0);
    const Trajectory tr = simulate(default_spec(SystemKind::SAMD, 0.1), opt, stream);
    CHECK(tr.steps == 400);
    CHECK(step_count(1.0, 5.0, 0.01) == 400);
    CHECK(tr.times.front() == 1.0);
    CHECK(tr.times.back() == doctest::Approx(5.0));
    CHECK(tr.size() == 400 / 7 + 2);  // every 7th step plus the last one
    const MirrorMap map = MirrorMap::entropic_simplex(3);
    for (std::size_t i = 0; i < tr.size(); ++i) {
        CHECK(map.is_feasible(tr.x[i]));
        CHECK(tr.gap[i] >= -1e-12);
        CHECK(tr.energy[i] >= -1e-12);
        if (i > 0) CHECK(tr.times[i] > tr.times[i - 1]);
    }
    CHECK(tr.energy_available);
    CHECK(tr.b.back() == doctest::Approx(0.01 * 4.0).epsilon(1e-9));  // eta = 1, sigma* = 0.1
}

TEST_CASE("zero noise reduces stochastic systems to deterministic ones bitwise") {
    SimulationOptions opt;
    opt.t_end = 8.0;
    auto run = [&](SystemKind k) {
        NoiseStream stream(9, 0);
        Trajectory tr = simulate(default_spec(k, 0.0), opt, stream);
        tr.kind = SystemKind::AMD;
        tr.stream_key = 0;
        return tr;
    };
    CHECK(run(SystemKind::SAMD) == run(SystemKind::AMD));
    CHECK(run(SystemKind::SMD) == run(SystemKind::MD));
}

TEST_CASE("same seed, same trajectory; different seed, different trajectory") {
    SimulationOptions opt;
    opt.t_end = 4.0;
    NoiseStream a(5, 2), b(5, 2), c(6, 2);
    const SystemSpec spec = default_spec(SystemKind::SAMD, 0.1);
    const Trajectory ta = simulate(spec, opt, a);
    CHECK(ta == simulate(spec, opt, b));
    CHECK_FALSE(ta == simulate(spec, opt, c));
}

TEST_CASE("deterministic AMD decreases the gap under admissible rates") {
    SimulationOptions opt;
    opt.t_end = 100.0;
    opt.h = 1e-2;
    opt.stride = 100;
    NoiseStream s(0, 0);
    const Trajectory tr = simulate(SystemSpec(SystemKind::AMD, MirrorMap::entropic_simplex(3),
                                              Objective::default_sum_exp(), RateBundle::power_laws(2.0, 0.0)),
                                   opt, s);
    CHECK(tr.gap.back() < 1e-3 * tr.gap.front());
}

TEST_CASE("MD gap is monotone") {
    SimulationOptions opt;
    opt.t_end = 50.0;
    NoiseStream s(0, 0);
    const Trajectory tr = simulate(default_spec(SystemKind::MD, 0.0), opt, s);
    for (std::size_t i = 1; i < tr.size(); ++i) CHECK(tr.gap[i] <= tr.gap[i - 1] + 1e-14);
}

TEST_CASE("Nesterov ODE converges on a quadratic") {
    SystemSpec spec(SystemKind::NesterovOde, MirrorMap::euclidean(2), Objective::quadratic(Vector{{1.0, 3.0}}));
    spec.x0 = Vector{{1.0, -0.5}};
    SimulationOptions opt;
    opt.t_end = 30.0;
    opt.h = 1e-3;
    opt.stride = 100;
    NoiseStream s(0, 0);
    const Trajectory tr = simulate(spec, opt, s);
    CHECK(tr.gap.back() < 1e-2 * tr.gap.front());
    CHECK_FALSE(tr.energy_available);
}

TEST_CASE("averaged iterate and primal averaging residual") {
    SimulationOptions opt;
    opt.t_end = 5.0;
    opt.h = 1e-3;
    NoiseStream s(0, 0);
    const SystemSpec spec = default_spec(SystemKind::AMD, 0.0);
    const Trajectory tr = simulate(spec, opt, s);
    const auto avg = averaged_iterate(tr);
    CHECK(avg.front() == tr.x.front());
    CHECK(MirrorMap::entropic_simplex(3).is_feasible(avg.back()));
    CHECK(primal_average_residual(tr, spec.map, spec.rates) < 1e-3);

    opt.stride = 2;
    NoiseStream s2(0, 0);
    CHECK_THROWS_AS(primal_average_residual(simulate(spec, opt, s2), spec.map, spec.rates), StrideTooCoarse);
}

TEST_CASE("trajectory CSV header and rows") {
    CHECK(trajectory_csv_header(2) == "t,x_1,x_2,z_1,z_2,gap,energy,b,martingale");
    SimulationOptions opt;
    opt.t_end = 1.05;
    NoiseStream s(0, 0);
    const Trajectory tr = simulate(default_spec(SystemKind::SAMD, 0.1), opt, s);
    std::ostringstream out;
    write_trajectory_csv(out, tr);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == trajectory_csv_header(3));
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 10);
    }
    CHECK(rows == static_cast<int>(tr.size()));
}

TEST_CASE("error paths") {
    SimulationOptions opt;
    opt.h = 0.4;
    NoiseStream s(0, 0);
    const SystemSpec fast(SystemKind::AMD, MirrorMap::entropic_simplex(3), Objective::default_sum_exp(),
                          RateBundle::power_laws(2.0, 0.0));
    CHECK_THROWS_AS(simulate(fast, opt, s), StepTooLarge);

    SimulationOptions ok;
    SystemSpec noisy_md = default_spec(SystemKind::MD, 0.1);
    CHECK_THROWS(simulate(noisy_md, ok, s));

    SystemSpec entropic_ode(SystemKind::NesterovOde, MirrorMap::entropic_simplex(3), Objective::default_sum_exp());
    CHECK_THROWS(simulate(entropic_ode, ok, s));

    SystemSpec bad_x0 = default_spec(SystemKind::AMD, 0.0);
    bad_x0.x0 = Vector{{0.5, 0.5, 0.5}};
    CHECK_THROWS_AS(simulate(bad_x0, ok, s), InfeasiblePoint);

    RateBundle slow;
    slow.r = Schedule::power_law(1.0, 2.0);
    slow.eta = Schedule::constant(1.0);
    const SystemSpec inadmissible(SystemKind::AMD, MirrorMap::entropic_simplex(3), Objective::default_sum_exp(), slow);
    CHECK_THROWS(simulate(inadmissible, ok, s));

    SimulationOptions backwards;
    backwards.t0 = 5.0;
    backwards.t_end = 1.0;
    CHECK_THROWS(simulate(default_spec(SystemKind::AMD, 0.0), backwards, s));

    CHECK_THROWS(system_kind_from_string("sgd"));
    CHECK(system_kind_from_string("SAMD") == SystemKind::SAMD);
}
