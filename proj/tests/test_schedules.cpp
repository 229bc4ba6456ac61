#include <doctest.h>

#include <cmath>

#include "samd/errors.hpp"
#include "samd/schedules.hpp"

using namespace samd;

TEST_CASE("power-law bundle: eta is r-dot") {
    const RateBundle b = RateBundle::power_laws(0.8, 0.5);
    CHECK(b.eta(10.0) == doctest::Approx(0.50476587558415459955).epsilon(1e-14));
    CHECK(b.r(10.0) == doctest::Approx(std::pow(10.0, 0.8)));
    CHECK(b.s(4.0) == doctest::Approx(2.0));
    CHECK(b.a(10.0) == doctest::Approx(0.08));
    REQUIRE(b.averaging().is_power_law());
    CHECK(b.averaging().power().exponent == doctest::Approx(-1.0));
}

TEST_CASE("power-law integral and derivative are exact") {
    const Schedule s = Schedule::power_law(3.0, 2.0);
    CHECK(s.integral(1.0, 2.0) == doctest::Approx(7.0).epsilon(1e-15));
    CHECK(s.derivative(2.0) == doctest::Approx(12.0));
    CHECK(power_law_integral(1.0, -1.0, 1.0, std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(averaging_weight(Schedule::power_law(2.0, -1.0), 1.0, 3.0) == doctest::Approx(9.0));
}

TEST_CASE("generic forms agree with quadrature") {
    const Schedule tab = Schedule::tabulated({1.0, 2.0, 4.0}, {1.0, 3.0, 3.0});
    CHECK(tab(1.5) == doctest::Approx(2.0));
    CHECK(tab(10.0) == doctest::Approx(3.0));
    CHECK(tab.integral(1.0, 4.0) == doctest::Approx(2.0 + 6.0));
    const Schedule q = Schedule::quotient(Schedule::power_law(1.0, 2.0), Schedule::power_law(2.0, 1.0));
    CHECK(q(6.0) == doctest::Approx(3.0));
    CHECK(q.integral(1.0, 3.0) == doctest::Approx(2.0));
    CHECK(integrate([](double t) { return std::sin(t); }, 0.0, M_PI) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("admissibility") {
    CHECK(check_admissible(RateBundle::power_laws(1.0, 0.5), 200.0).all_passed());
    CHECK(check_admissible(RateBundle::power_laws(2.0, 0.0), 100.0).all_passed());

    RateBundle slow;
    slow.r = Schedule::power_law(1.0, 2.0);
    slow.eta = Schedule::constant(1.0);
    const auto rep = check_admissible(slow, 10.0);
    CHECK_FALSE(rep.all_passed());
    CHECK_FALSE(rep.find(kCondEtaDominates)->passed);

    RateBundle shrinking = RateBundle::power_laws(1.0, 0.0);
    shrinking.s = Schedule::power_law(1.0, -0.5);
    const auto rep2 = check_admissible(shrinking, 10.0);
    CHECK_FALSE(rep2.find(kCondSensitivity)->passed);
    CHECK(rep2.find(kCondSensitivity)->note.find("non-decreasing, inverse sensitivity parameter") !=
          std::string::npos);
}

TEST_CASE("optimal exponents") {
    CHECK(optimal_amd_exponents(0.0, 0.5).alpha_r == doctest::Approx(1.0));
    CHECK(optimal_amd_exponents(0.2, 0.5).alpha_r == doctest::Approx(0.8));
    CHECK(optimal_amd_exponents(-0.5, 0.0).predicted_rate == doctest::Approx(-1.0));
    CHECK_THROWS_AS(optimal_amd_exponents(0.5, 0.5), InvalidRegime);
    CHECK(optimal_smd_exponent(0.0).alpha_s == doctest::Approx(0.5));
    CHECK(optimal_smd_exponent(-1.0).alpha_s == doctest::Approx(0.0));
    CHECK(optimal_smd_exponent(-1.0).predicted_rate == doctest::Approx(-1.0));
}

TEST_CASE("almost-sure convergence conditions") {
    const auto ok = as_convergence_conditions(Schedule::power_law(1.0, -0.8), Schedule::power_law(0.1, 0.3), 1e4);
    CHECK(ok.passed());
    const auto constant = as_convergence_conditions(Schedule::constant(1.0), Schedule::constant(0.1), 1e4);
    CHECK_FALSE(constant.passed());
    const auto tab = as_convergence_conditions(Schedule::tabulated({1.0, 2.0}, {1.0, 1.0}),
                                               Schedule::constant(0.1), 1e4);
    CHECK(tab.abstained);
}

TEST_CASE("error paths") {
    CHECK_THROWS_AS(Schedule::constant(1.0)(0.0), NonPositiveTime);
    CHECK_THROWS_AS(Schedule::constant(1.0)(-1.0), NonPositiveTime);
    CHECK_THROWS(Schedule::power_law(-1.0, 1.0));
    CHECK_THROWS(Schedule::tabulated({2.0, 1.0}, {1.0, 1.0}));
    CHECK_THROWS(Schedule::tabulated({1.0}, {1.0}).value(1.0));
    CHECK_THROWS(Schedule::tabulated({1.0, 2.0}, {1.0, 1.0}).power());
    CHECK_THROWS(check_admissible(RateBundle::power_laws(1.0, 0.5), 0.5));
}
