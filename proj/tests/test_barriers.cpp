#include <cmath>
#include <vector>

#include "doctest.h"
#include "test_profiles.hpp"
#include "trudlab/barriers.hpp"
#include "trudlab/errors.hpp"

using namespace trudlab;
namespace tp = testing_profiles;

namespace {
const double kPi = std::acos(-1.0);
const Exponent P2 = Exponent::finite(2);
const Exponent P3 = Exponent::finite(3);
const Exponent P4 = Exponent::finite(4);
const Exponent PINF = Exponent::infinity();
}  // namespace

TEST_CASE("eigen barrier constants") {
    const auto s = make_eigen_barrier(P2, 2, 1.0);
    CHECK(s.constant("k") == 2.0);
    CHECK(s.constant("alpha") == 2.5);
    CHECK(s.constant("theta2") == doctest::Approx(2.0 / 3.0));
    CHECK(s.constant("lambda") == doctest::Approx(30.0).epsilon(1e-14));
    // Oracle values from an independent arbitrary-precision script.
    CHECK(make_eigen_barrier(P2, 3, 1.0).constant("lambda") == doctest::Approx(72.0).epsilon(1e-14));
    CHECK(make_eigen_barrier(P3, 2, 1.0).constant("lambda") ==
          doctest::Approx(665.1075101064489).epsilon(1e-13));
    CHECK(make_eigen_barrier(PINF, 2, 2.0).constant("lambda") == 16.0);
    for (const Exponent& p : {P2, P3, P4, PINF}) {
        const auto e = make_eigen_barrier(p, 3, 1.5);
        CHECK(e.value(0.0, 0.0) == 1.0);
        CHECK(e.value(1.5, 0.7) == 0.0);
    }
    CHECK_THROWS_AS(make_eigen_barrier(P2, 2, 0.0), DomainError);
}

TEST_CASE("growth barrier constants and constraint") {
    const auto s = make_growth_barrier(P2, 2, 1.0, 1.0, 1.0 / 17.0);
    CHECK(s.constant("a") == doctest::Approx(2.0 / 17.0).epsilon(1e-14));
    CHECK(s.value(0.0, 0.0) == 1.0);
    CHECK(make_growth_barrier(PINF, 3, 1.0, 0.5, 0.1).value(0.0, 0.0) == 1.0);
    try {
        make_growth_barrier(P2, 2, 1.0, 1.0, 1.0 / 16.0);
        FAIL("boundary b accepted");
    } catch (const ConstraintViolation& e) {
        CHECK(e.bound == doctest::Approx(1.0 / 16.0));
    }
    CHECK_THROWS_AS(make_growth_barrier(P3, 2, 1.0, 1.0, 10.0), ConstraintViolation);
}

TEST_CASE("kernels") {
    const auto K2 = make_kernel(P2, 3);
    for (double r : {0.0, 0.5, 2.0}) {
        for (double t : {0.3, 1.0, 4.0}) {
            CHECK(K2.value(r, t) == doctest::Approx(std::pow(t, -1.5) * std::exp(-r * r / (4 * t))));
        }
    }
    CHECK(make_kernel(P3, 2).value(0.0, 1.0) == 1.0);
    for (const Exponent& p : {P2, Exponent::finite(2.5), P3, P4, PINF}) {
        const auto K = make_kernel(p, 2);
        double prev = K.value(1.0, 1.0);
        for (double s = 2.0; s < 1e4; s *= 3.0) {
            const double now = K.value(s, s);
            CHECK(now <= prev);
            prev = now;
        }
        CHECK(prev < 1e-3);
        CHECK_THROWS_AS(K.value(0.5, 0.0), DomainError);
    }
}

TEST_CASE("power solutions match the corrected closed form") {
    auto one = [](double) { return 1.0; };
    auto zero = [](double) { return 0.0; };
    const auto s = make_power_solution(P3, 2, +1, one, zero);
    CHECK(s.closed_form(1.0, 0.3) == doctest::Approx(11.25));
    CHECK(g_p_residual(s.stored, P3, 2, {1.0, 0.3}) == doctest::Approx(11.25).epsilon(1e-13));
    // Finite-difference cross-check of G_3(r^{3/2}) at r = 1.
    const double h = 1e-4;
    auto v = [](double r) { return std::pow(r, 1.5); };
    const double q = (v(1 + h) - v(1 - h)) / (2 * h);
    const double d2 = (v(1 + h) - 2 * v(1) + v(1 - h)) / (h * h);
    const double fd = std::abs(q) * (2 * d2 + q) + 2 * std::pow(std::abs(q), 3);
    CHECK(fd == doctest::Approx(11.25).epsilon(1e-6));

    const auto inf = make_power_solution(PINF, 2, +1, one, zero);
    CHECK(g_p_residual(inf.stored, PINF, 2, {1.0, 0.0}) == doctest::Approx(320.0 / 81.0));
    CHECK(inf.closed_form(1.0, 0.0) == doctest::Approx(320.0 / 81.0));

    const auto z = make_power_solution(P3, 3, -1, zero, zero);
    CHECK(g_p_residual(z.stored, P3, 3, {0.4, 0.2}) == 0.0);
    CHECK(z.closed_form(0.4, 0.2) == 0.0);

    CHECK_THROWS_AS(make_power_solution(P3, 2, 1, [](double t) { return 0.5 - t; }, zero), DomainError);
    for (const Exponent& p : {P2, Exponent::finite(2.5), P3, P4, PINF}) {
        for (int sign : {+1, -1}) {
            const auto f = make_power_solution(
                p, 3, sign, [](double t) { return 1.0 + 0.5 * t; }, [](double) { return 0.5; });
            CHECK(verify_sign(f).verdict == Verdict::Solution);
        }
    }
}

TEST_CASE("upper flattening barrier") {
    const auto s = make_thm161_upper(P3, 2, 1.0, 2.0, 1.0);
    CHECK(s.constant("T0_min") == doctest::Approx(6.678743468779631).epsilon(1e-12));
    CHECK(s.constant("T0") == doctest::Approx(1.05 * 6.678743468779631).epsilon(1e-12));
    const double T0 = s.constant("T0");
    for (double t : {0.0, 1.0, 10.0, 1e3}) CHECK(s.value(1.0, t) >= 1.0);
    for (int i = 0; i <= 20; ++i) CHECK(s.value(0.05 * i, T0) >= 2.0 * (1 - 1e-14));
    for (int i = 0; i < 10; ++i) {
        const double r = 0.1 * i;
        double prev = s.value(r, 1e3);
        CHECK(std::abs(prev - 1.0) < 1.0);
        for (double t : {1e4, 1e5, 1e6}) {
            const double now = s.value(r, t);
            CHECK(now <= prev);
            prev = now;
        }
        CHECK(prev == doctest::Approx(1.0).epsilon(1e-4));
    }
    CHECK_THROWS_AS(make_thm161_upper(P3, 2, 1.0, 2.0, 1.5), ConstraintViolation);
    CHECK_THROWS_AS(make_thm161_upper(PINF, 2, 1.0, 2.0, 0.6), ConstraintViolation);
    CHECK_NOTHROW(make_thm161_upper(P2, 2, 1.0, 2.0, 50.0));
    const auto inf = make_thm161_upper(PINF, 2, 1.0, 2.0, 0.5);
    CHECK(inf.family == Family::InfUpperBound);
    CHECK(inf.constant("T0_min") == doctest::Approx(1013.505552005057).epsilon(1e-12));
}

TEST_CASE("lower flattening barrier") {
    const auto s = make_thm161_lower(P3, 2, 1.0, 0.5, 1.0);
    CHECK(s.constant("T1_min") == doctest::Approx(-0.24749014197335764).epsilon(1e-12));
    CHECK(s.constant("T1") == 0.0);
    const double T1 = s.constant("T1");
    for (double t : {T1, T1 + 1.0, 1e3}) CHECK(s.value(1.0, t) <= 1.0);
    for (int i = 0; i <= 20; ++i) CHECK(s.value(0.05 * i, T1) <= 0.5 * (1 + 1e-14));
    const auto one = make_thm161_lower(P3, 2, 1.0, 1.0, 1.0);
    for (int i = 0; i <= 10; ++i) CHECK(one.value(0.1 * i, 2.0) <= 1.0);
    CHECK(one.value(1.0, 2.0) == 1.0);
    CHECK_THROWS_AS(make_thm161_lower(P3, 2, 1.0, 1.5, 1.0), DomainError);
    CHECK_THROWS_AS(make_thm161_lower(P3, 2, 1.0, 0.0, 1.0), DomainError);
    const auto inf = make_thm161_lower(PINF, 2, 1.0, 0.5, 0.5);
    CHECK(inf.constant("a_min") == doctest::Approx(1.6429733387383548).epsilon(1e-12));
    CHECK(inf.value(0.0, 0.0) <= 0.5);
}

TEST_CASE("flattening sandwich is consistent") {
    for (const Exponent& p : {P2, P3, P4, PINF}) {
        const double alpha = std::min(1.0, thm161_alpha_max(p));
        const auto up = make_thm161_upper(p, 2, 1.0, 2.0, alpha);
        const auto lo = make_thm161_lower(p, 2, 1.0, 0.5, alpha);
        const double t0 = std::max(up.validity.t_lo, lo.validity.t_lo);
        for (int i = 0; i <= 10; ++i) {
            const double r = 0.1 * i;
            double pu = up.value(r, t0), pl = lo.value(r, t0);
            for (double t = t0; t < t0 + 1e6; t = 2 * t + 1) {
                const double u = up.value(r, t), l = lo.value(r, t);
                CHECK(l <= 1.0);
                CHECK(u >= 1.0);
                CHECK(u <= pu);
                CHECK(l >= pl);
                pu = u;
                pl = l;
            }
            CHECK(std::abs(pu - 1.0) < 0.05);
            CHECK(std::abs(pl - 1.0) < 0.05);
        }
    }
}

TEST_CASE("time factor") {
    const auto s = make_time_factor(2.0, P3, 0.0, 3.0);
    CHECK(time_factor_F(s, 0.0) == doctest::Approx(1.0));
    CHECK(time_factor_F(s, 3.0) == doctest::Approx(0.5));
    double prev = 2.0;
    for (int i = 0; i <= 30; ++i) {
        const double F = time_factor_F(s, 0.1 * i);
        CHECK(F <= 1.0 + 1e-15);
        CHECK(F >= 0.5 - 1e-15);
        CHECK(F < prev);
        prev = F;
    }
    // lambda (T - S)/(p-1) = log 2 is the boundary case.
    CHECK_NOTHROW(make_time_factor(std::log(2.0), P2, 1.0, 2.0));
    CHECK_NOTHROW(make_time_factor(2.0 * std::log(2.0), P3, 0.0, 1.0));
    CHECK_THROWS_AS(make_time_factor(0.5, P2, 0.0, 1.0), ConstraintViolation);
    CHECK_THROWS_AS(verify_sign(s), DomainError);
}

TEST_CASE("time factor times a BVP profile matches the closed form") {
    // n = 3, p = 2: psi = M sinc(sqrt(lambda) r)/sinc(sqrt(lambda)) solves Delta psi + lambda psi = 0, psi(1) = M.
    const double lambda = 0.5 * kPi * kPi;
    const double k = std::sqrt(lambda);
    const double M = 2.0;
    const auto psi = tp::sinc(k, M * k / std::sin(k));
    for (double T : {1.0, std::log(2.0) / lambda}) {
        const auto tf = attach_profile(make_time_factor(lambda, P2, 0.0, T), psi, 3);
        const auto rep = verify_sign(tf);
        CHECK(rep.verdict != Verdict::Indeterminate);
        CHECK(verdict_satisfies(rep.verdict, Verdict::Supersolution));
        for (int i = 0; i <= 10; ++i) {
            for (int j = 0; j <= 10; ++j) {
                const double r = 0.1 * i, t = T * 0.1 * j;
                const double direct = tf.residual(r, t).residual;
                const double closed = time_factor_closed_form(tf, psi.value(r), t);
                CHECK(std::abs(direct - closed) <= 1e-9 * std::max(1.0, std::abs(closed)));
            }
        }
    }
}

TEST_CASE("boundary barriers") {
    CHECK(boundary_high_lambda_bound(P4, 2, 0.5, 1.0) == doctest::Approx(1.0 / 27.0));
    BoundaryCaseHigh hi{0.5, 1.0, 1.0, 0.02};
    const auto w = make_boundary_barrier(P4, 2, hi);
    CHECK(w.constant("alpha") == doctest::Approx(1.0 / 3.0));
    CHECK(w.value(0.0, 0.0) == 1.0);
    double worst = -1e300;
    for (int i = 1; i <= 1000; ++i) worst = std::max(worst, w.residual(i / 1000.0, 0.0).residual);
    CHECK(worst <= 0.0);
    CHECK(verify_sign(w).verdict == Verdict::Supersolution);
    hi.lambda = 0.04;
    try {
        make_boundary_barrier(P4, 2, hi);
        FAIL("lambda above bound accepted");
    } catch (const ConstraintViolation& e) {
        CHECK(e.bound == doctest::Approx(1.0 / 27.0));
    }
    CHECK_THROWS_AS(make_boundary_barrier(P2, 2, BoundaryCaseHigh{}), DomainError);

    BoundaryCaseLow lo{1.5, 0.5, 1.0, 1.0, 0.0};
    lo.lambda = 0.5 * boundary_low_lambda_bound(P2, 3, 1.5, 0.5, 1.0);
    const auto v = make_boundary_barrier(P2, 3, lo);
    CHECK(v.value(0.5, 0.0) == doctest::Approx(1.0));
    CHECK(verify_sign(v).verdict == Verdict::Supersolution);
    CHECK_THROWS_AS(make_boundary_barrier(P3, 2, lo), DomainError);
    lo.alpha = 0.9;
    CHECK_THROWS_AS(make_boundary_barrier(P2, 3, lo), ConstraintViolation);
}

TEST_CASE("verify_sign on the catalog examples") {
    const auto e = verify_sign(make_eigen_barrier(P3, 2, 1.0), Region{0, 1, 0, 5}, Verdict::Subsolution);
    CHECK(e.verdict == Verdict::Subsolution);
    CHECK(e.samples == 11000);
    const auto g = make_growth_barrier(P3, 2, 1.0, 1.0, 0.5 * growth_barrier_b_bound(P3, 1.0, 1.0));
    CHECK(verify_sign(g, Region{0, 10, 0, 1}, Verdict::Supersolution).verdict == Verdict::Supersolution);
    const auto k = verify_sign(make_kernel(P2, 2));
    CHECK(k.verdict == Verdict::Solution);
    CHECK(std::max(std::abs(k.min_residual), std::abs(k.max_residual)) < 1e-8);
    const auto par = make_paraboloid(P3, 2, 1.0);
    const auto pr = verify_sign(par);
    CHECK(pr.verdict == Verdict::Supersolution);
    for (double r : {0.05, 0.5, 1.0}) CHECK(par.residual(r, 0.0).residual < 0.0);
    CHECK(par.residual(0.0, 0.0).residual == 0.0);
    CHECK_THROWS_AS(verify_sign(make_thm161_upper(P3, 2, 1.0, 2.0, 1.0), Region{0, 1, 0, 1},
                                Verdict::Supersolution),
                    DomainError);
}

TEST_CASE("separated solutions") {
    const auto one = separated_solution(tp::constant(1.0), 0.0, 0.0, P3, 2);
    const auto r1 = verify_sign(one);
    CHECK(r1.verdict == Verdict::Solution);
    CHECK(r1.max_residual == 0.0);
    const auto psi = tp::sinc(kPi);
    const auto exact = separated_solution(psi, kPi * kPi, kPi * kPi, P2, 3);
    CHECK(verify_sign(exact).verdict == Verdict::Solution);
    const auto faster = separated_solution(psi, kPi * kPi, 1.5 * kPi * kPi, P2, 3);
    CHECK(verify_sign(faster).verdict == Verdict::Subsolution);
    auto neg = tp::constant(-1.0);
    CHECK_THROWS_AS(separated_solution(neg, 0.0, 0.0, P2, 2), DomainError);
}

TEST_CASE("log-form evaluation and determinism") {
    const auto a = make_thm161_upper(P3, 3, 1.3, 2.5, 0.7);
    const auto b = make_thm161_upper(P3, 3, 1.3, 2.5, 0.7);
    REQUIRE(a.derived.size() == b.derived.size());
    for (std::size_t i = 0; i < a.derived.size(); ++i) CHECK(a.derived[i].second == b.derived[i].second);
    const auto direct = a.direct();
    for (double r : {0.0, 0.5, 1.3}) {
        const auto e = a.eval(r, 10.0);
        CHECK(e.is_log_form);
        CHECK(std::exp(e.value) == doctest::Approx(direct.value(r, 10.0)).epsilon(1e-12));
    }
    CHECK_FALSE(make_paraboloid(P2, 2, 1.0).eval(0.5, 0.0).is_log_form);
}
