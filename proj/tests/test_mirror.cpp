#include <doctest.h>

#include <cmath>
#include <random>

#include "samd/errors.hpp"
#include "samd/mirror.hpp"
#include "samd/objectives.hpp"

using namespace samd;

TEST_CASE("entropic map: frozen values") {
    const MirrorMap m = MirrorMap::entropic_simplex(2);
    CHECK(m.psi(Vector{{0.9, 0.1}}) == doctest::Approx(0.36806420716849706991).epsilon(1e-14));
    CHECK(m.psi_star(Vector{{1.0, 0.0}}) == doctest::Approx(0.62011450695827752463).epsilon(1e-14));
    CHECK(m.bregman_div_star(Vector{{1.0, 0.0}}, Vector{{0.0, 0.0}}) ==
          doctest::Approx(0.12011450695827752463).epsilon(1e-13));
    CHECK(m.grad_psi_star(Vector{{std::log(3.0), 0.0}})[0] == doctest::Approx(0.75).epsilon(1e-15));
    const Vector z = m.dual_of(Vector{{0.75, 0.25}});
    CHECK(z[0] == doctest::Approx(0.5493061443340548457).epsilon(1e-14));
    CHECK(z.sum() == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("entropic map: psi is zero at the barycenter and at most ln n") {
    for (int n : {2, 3, 10}) {
        const MirrorMap m = MirrorMap::entropic_simplex(n);
        CHECK(std::abs(m.psi(Vector::Constant(n, 1.0 / n))) < 1e-14);
        Vector vertex = Vector::Zero(n);
        vertex[0] = 1.0;
        CHECK(m.psi(vertex) == doctest::Approx(std::log(n)));
        CHECK(m.psi_sup() == doctest::Approx(std::log(n)));
        CHECK(m.diameter() == 2.0);
    }
}

TEST_CASE("log_sum_exp does not overflow") {
    CHECK(log_sum_exp(Vector{{1000.0, 1000.0}}) == doctest::Approx(1000.0 + std::log(2.0)));
    CHECK(log_sum_exp(Vector{{-1000.0, -1000.0}}) == doctest::Approx(-1000.0 + std::log(2.0)));
    const MirrorMap m = MirrorMap::entropic_simplex(3);
    const Vector x = m.grad_psi_star(Vector{{800.0, -800.0, 0.0}});
    CHECK(x.allFinite());
    CHECK(x[0] == doctest::Approx(1.0));
}

TEST_CASE("property: Fenchel, Bregman identity and shift invariance") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> normal(0.0, 2.0);
    for (const MirrorMap& m : {MirrorMap::entropic_simplex(4), MirrorMap::euclidean(4)}) {
        for (int k = 0; k < 200; ++k) {
            Vector z1(4), z2(4);
            for (int i = 0; i < 4; ++i) {
                z1[i] = normal(rng);
                z2[i] = normal(rng);
            }
            const Vector x1 = m.grad_psi_star(z1);
            const Vector x2 = m.grad_psi_star(z2);
            CHECK(m.is_feasible(x1));
            CHECK(std::abs(m.psi(x1) + m.psi_star(z1) - x1.dot(z1)) < 1e-12);
            const double d = m.bregman_div_star(z2, z1);
            CHECK(d >= -1e-14);
            CHECK(std::abs(m.psi(x1) - m.psi(x2) - (d - (x2 - x1).dot(z2))) < 1e-11);
            CHECK(m.primal_norm(x1 - x2) <= m.dual_norm(z1 - z2) + 1e-12);
            CHECK((m.grad_psi_star(m.dual_projection(z1)) - x1).cwiseAbs().maxCoeff() < 1e-14);
            if (m.is_entropic()) {
                const Vector shifted = m.grad_psi_star(z1 + Vector::Constant(4, 37.5));
                CHECK((shifted - x1).cwiseAbs().maxCoeff() < 1e-12);
            }
        }
    }
}

TEST_CASE("property: dual_of inverts the mirror map in the interior") {
    std::mt19937_64 rng(3);
    const MirrorMap m = MirrorMap::entropic_simplex(5);
    for (int k = 0; k < 100; ++k) {
        const Vector x = sample_feasible(m, rng);
        CHECK((m.grad_psi_star(m.dual_of(x)) - x).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("euclidean map is the identity") {
    const MirrorMap m = MirrorMap::euclidean(3);
    const Vector z{{1.0, -2.0, 0.5}};
    CHECK(m.grad_psi_star(z) == z);
    CHECK(m.dual_of(z) == z);
    CHECK(m.bregman_div_star(z, Vector::Zero(3)) == doctest::Approx(0.5 * z.squaredNorm()));
    CHECK(std::isinf(m.diameter()));
}

TEST_CASE("error paths") {
    const MirrorMap m = MirrorMap::entropic_simplex(3);
    CHECK_THROWS_AS(m.psi(Vector{{0.5, 0.6, -0.1}}), InfeasiblePoint);
    CHECK_THROWS_AS(m.psi(Vector{{0.5, 0.6, 0.1}}), InfeasiblePoint);
    CHECK_THROWS_AS(m.dual_of(Vector{{0.5, 0.5, 0.0}}), BoundaryMinimizer);
    CHECK_THROWS_AS(m.grad_psi_star(Vector{{1.0, NAN, 0.0}}), NonFinite);
    CHECK_THROWS(m.grad_psi_star(Vector{{1.0, 0.0}}));
    CHECK_THROWS(MirrorMap::entropic_simplex(0));
}
