#include <doctest.h>

#include <cmath>
#include <random>

#include "samd/errors.hpp"
#include "samd/objectives.hpp"

using namespace samd;

namespace {

double fd_error(const Objective& obj, const Vector& x) {
    const Vector grad = obj.gradient(x);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        Vector xp = x, xm = x;
        xp[i] += 1e-6;
        xm[i] -= 1e-6;
        const double fd = (obj.value(xp) - obj.value(xm)) / 2e-6;
        worst = std::max(worst, std::abs(fd - grad[i]) / std::max(1.0, std::abs(grad[i])));
    }
    return worst;
}

}  // namespace

TEST_CASE("default sum-exp instance: minimizer matches the extended-precision oracle") {
    const Objective obj = Objective::default_sum_exp();
    const MirrorMap map = MirrorMap::entropic_simplex(3);
    const MinimizerCertificate cert = solve_minimizer(obj, map, 1e-12);
    CHECK(cert.x_star[0] == doctest::Approx(0.13541173668770248).epsilon(1e-9));
    CHECK(cert.x_star[1] == doctest::Approx(0.38542020687554025).epsilon(1e-9));
    CHECK(cert.x_star[2] == doctest::Approx(0.47916805643675732).epsilon(1e-9));
    CHECK(cert.f_star == doctest::Approx(6.9748511037872459).epsilon(1e-13));
    REQUIRE(cert.interior());
    const Vector z = map.dual_projection(*cert.z_star);
    CHECK(z[0] == doctest::Approx(-0.76991516442761808).epsilon(1e-8));
    CHECK(z[1] == doctest::Approx(0.27609898278091038).epsilon(1e-8));
    CHECK(z[2] == doctest::Approx(0.49381618164670769).epsilon(1e-8));
    CHECK(cert.residual < 1e-12);
    CHECK(obj.value(Vector::Constant(3, 1.0 / 3.0)) == doctest::Approx(7.463610821661627).epsilon(1e-14));
}

TEST_CASE("sum-exp with one term: value e at the vertex") {
    Matrix c(1, 2);
    c << 1.0, 0.0;
    const Objective obj = Objective::sum_exp(c);
    CHECK(obj.value(Vector{{1.0, 0.0}}) == doctest::Approx(2.7182818284590452354).epsilon(1e-15));
}

TEST_CASE("property: gradients agree with central differences") {
    std::mt19937_64 rng(8);
    for (const Objective& obj : {Objective::default_sum_exp(), Objective::default_rank1(),
                                 Objective::seeded_sum_exp(6, 4, 9),
                                 Objective::quadratic(Vector{{1.0, 2.0, 0.5}})}) {
        const MirrorMap map = MirrorMap::entropic_simplex(obj.dim());
        for (int k = 0; k < 100; ++k) {
            CHECK(fd_error(obj, sample_feasible(map, rng)) < 1e-6);
        }
    }
}

TEST_CASE("property: analytic bounds dominate sampled estimates") {
    for (const Objective& obj : {Objective::default_sum_exp(), Objective::default_rank1(),
                                 Objective::seeded_sum_exp(5, 3, 2)}) {
        const MirrorMap map = MirrorMap::entropic_simplex(obj.dim());
        const LipschitzEstimate est = lipschitz_constants(obj, map, 2000, 4);
        CHECK(est.sampled_grad_lipschitz <= est.analytic_grad_lipschitz * (1.0 + 1e-12));
        CHECK(est.sampled_gradient_bound <= est.analytic_gradient_bound * (1.0 + 1e-12));
        CHECK(est.grad_lipschitz <= est.analytic_grad_lipschitz);
    }
}

TEST_CASE("seeded instances are reproducible") {
    CHECK(Objective::seeded_sum_exp(4, 3, 5) == Objective::seeded_sum_exp(4, 3, 5));
    CHECK_FALSE(Objective::seeded_sum_exp(4, 3, 5) == Objective::seeded_sum_exp(4, 3, 6));
}

TEST_CASE("boundary minimizer has no dual anchor") {
    Matrix c(1, 3);
    c << 5.0, 0.0, 0.0;  // pushes mass off coordinate 0 only
    const Objective obj = Objective::sum_exp(c);
    const MirrorMap map = MirrorMap::entropic_simplex(3);
    const MinimizerCertificate cert = solve_minimizer(obj, map, 1e-10);
    CHECK(cert.x_star[0] < 1e-8);
    CHECK_FALSE(cert.interior());
}

TEST_CASE("euclidean quadratic minimizer is the origin") {
    const Objective obj = Objective::quadratic(Vector{{1.0, 3.0}});
    const MinimizerCertificate cert = solve_minimizer(obj, MirrorMap::euclidean(2), 1e-12);
    CHECK(cert.x_star.norm() < 1e-12);
    CHECK(cert.f_star == doctest::Approx(0.0));
}

TEST_CASE("error paths") {
    const Objective obj = Objective::default_sum_exp();
    CHECK_THROWS_AS(obj.value(Vector{{1.0, 0.0}}), InfeasiblePoint);
    CHECK_THROWS_AS(obj.gradient(Vector{{1.0, NAN, 0.0}}), InfeasiblePoint);
    CHECK_THROWS(Objective::quadratic(Vector{{1.0, -1.0}}));
    CHECK_THROWS(Objective::seeded_sum_exp(0, 3, 1));
    CHECK_THROWS(solve_minimizer(obj, MirrorMap::entropic_simplex(4), 1e-10));
    CHECK_THROWS(solve_minimizer(obj, MirrorMap::entropic_simplex(3), 0.0));
    CHECK_THROWS_AS(solve_minimizer(obj, MirrorMap::euclidean(3), 1e-10), NoConvergence);
}
