#include <cmath>
#include <vector>

#include "doctest.h"
#include "test_profiles.hpp"
#include "trudlab/errors.hpp"
#include "trudlab/operators.hpp"

using namespace trudlab;
namespace tp = testing_profiles;

TEST_CASE("exponent parsing and constants") {
    CHECK(Exponent::parse("inf").is_infinite());
    CHECK(Exponent::parse("3").value() == 3.0);
    CHECK_THROWS_AS(Exponent::finite(1.5), DomainError);
    CHECK_THROWS_AS(Exponent::parse("3x"), DomainError);
    CHECK_THROWS_AS(Exponent::infinity().value(), Unsupported);
    CHECK(Exponent::infinity().degree() == 3.0);
    CHECK(Exponent::finite(3).power_constant_a(2) == doctest::Approx(4.5));
    CHECK(Exponent::infinity().power_constant_a(2) == doctest::Approx(64.0 / 81.0));
}

TEST_CASE("p-Laplacian of r^beta is the constant A, including the axis") {
    const Exponent p3 = Exponent::finite(3);
    const auto f = tp::power(1.0, p3.beta());
    for (double r : {0.0, 0.1, 0.5, 1.0}) {
        CHECK(eval_p_laplacian_radial(f, p3, 2, r) == doctest::Approx(4.5).epsilon(1e-13));
    }
    for (double pv : {2.0, 2.5, 3.0, 4.0}) {
        const Exponent p = Exponent::finite(pv);
        for (int n : {2, 3}) {
            const auto g = tp::power(1.0, p.beta());
            const double A = n * std::pow(pv / (pv - 1.0), pv - 1.0);
            for (double r : {0.0, 0.01, 0.3, 0.77, 1.0}) {
                CHECK(eval_p_laplacian_radial(g, p, n, r) == doctest::Approx(A).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("Laplacian of r^2 is 2n and constants are annihilated") {
    for (int n : {2, 3, 5}) {
        for (double r : {0.0, 0.4, 1.0}) {
            CHECK(eval_p_laplacian_radial(tp::square(), Exponent::finite(2), n, r) ==
                  doctest::Approx(2.0 * n));
        }
    }
    for (double pv : {2.0, 3.0, 4.0}) {
        CHECK(eval_p_laplacian_radial(tp::constant(3.0), Exponent::finite(pv), 3, 0.5) == 0.0);
        CHECK(eval_p_laplacian_radial(tp::constant(3.0), Exponent::finite(pv), 3, 0.0) == 0.0);
    }
}

TEST_CASE("p-harmonic radial profiles") {
    const Exponent p4 = Exponent::finite(4);
    const auto f = tp::power(1.0, (4.0 - 2.0) / 3.0);
    CHECK(std::abs(eval_p_laplacian_radial(f, p4, 2, 0.5)) < 1e-12);
    for (double pv : {2.5, 3.0, 4.0}) {
        for (int n : {2, 3}) {
            if (pv == n) continue;
            const Exponent p = Exponent::finite(pv);
            const auto g = tp::power(1.0, (pv - n) / (pv - 1.0));
            for (int i = 0; i <= 90; ++i) {
                const double r = 0.1 + 0.01 * i;
                CHECK(std::abs(eval_p_laplacian_radial(g, p, n, r)) < 1e-9);
            }
        }
    }
    // p = n: log r.
    for (int n : {2, 3}) {
        RadialProfile lg;
        lg.value = [](double r) { return std::log(r); };
        lg.d1 = [](double r) { return 1.0 / r; };
        lg.d2 = [](double r) { return -1.0 / (r * r); };
        lg.lo = 0.1;
        for (int i = 0; i <= 90; ++i) {
            const double r = 0.1 + 0.01 * i;
            CHECK(std::abs(eval_p_laplacian_radial(lg, Exponent::finite(n), n, r)) < 1e-9);
        }
    }
}

TEST_CASE("infinity Laplacian") {
    const auto f = tp::power(1.0, 4.0 / 3.0);
    for (double r : {0.0, 0.2, 1.0}) {
        CHECK(eval_inf_laplacian_radial(f, r) == doctest::Approx(64.0 / 81.0).epsilon(1e-13));
    }
    CHECK(eval_inf_laplacian_radial(tp::power(1.0, 1.0), 0.5) == 0.0);
    // Symbolic oracle: (2r)^2 * 2 at r = 1.
    CHECK(eval_inf_laplacian_radial(tp::square(), 1.0) == doctest::Approx(8.0));
}

TEST_CASE("domain and exponent errors") {
    CHECK_THROWS_AS(eval_p_laplacian_radial(tp::square(), Exponent::finite(2), 2, -0.1), DomainError);
    CHECK_THROWS_AS(eval_p_laplacian_radial(tp::square(), Exponent::finite(2), 2, 1.5), DomainError);
    CHECK_THROWS_AS(eval_p_laplacian_radial(tp::square(), Exponent::infinity(), 2, 0.5), Unsupported);
    CHECK_THROWS_AS(eval_inf_laplacian_radial(tp::square(), 2.0), DomainError);
    // r^{1/2} has an unbounded p-Laplacian at the axis for p = 3.
    CHECK_THROWS_AS(eval_p_laplacian_radial(tp::power(1.0, 0.5), Exponent::finite(3), 2, 0.0), DomainError);
}

TEST_CASE("Gamma_p and G_p on elementary functions") {
    SpaceTimeFunction c;
    c.value = [](double, double) { return 2.5; };
    c.dr = c.drr = c.dt = [](double, double) { return 0.0; };
    for (const Exponent& p : {Exponent::finite(2), Exponent::finite(3), Exponent::infinity()}) {
        CHECK(gamma_p_residual(c, p, 2, {0.3, 1.0}) == 0.0);
        CHECK(g_p_residual(c, p, 2, {0.0, 1.0}) == 0.0);
    }
    SpaceTimeFunction lin;
    const double a = 1.7;
    lin.value = [a](double, double t) { return a * t; };
    lin.dr = lin.drr = [](double, double) { return 0.0; };
    lin.dt = [a](double, double) { return a; };
    CHECK(g_p_residual(lin, Exponent::finite(3), 2, {0.4, 0.2}) == doctest::Approx(-2.0 * a));
    CHECK(g_p_residual(lin, Exponent::infinity(), 2, {0.4, 0.2}) == doctest::Approx(-3.0 * a));
}

TEST_CASE("heat kernel solves Gamma_2 to analytic precision") {
    for (int n : {2, 3}) {
        const auto K = tp::heat_kernel(n);
        CHECK(std::abs(gamma_p_residual(K, Exponent::finite(2), n, {1.0, 1.0})) < 1e-14);
        double worst = 0.0;
        for (int i = 0; i < 100; ++i) {
            for (int j = 0; j < 100; ++j) {
                worst = std::max(worst, std::abs(gamma_p_residual(
                                            K, Exponent::finite(2), n, {0.03 * i, 0.1 + 0.02 * j})));
            }
        }
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("log-transform identity") {
    SpaceTimeFunction u;
    u.value = [](double r, double t) { return std::exp(r * r + t); };
    u.dr = [](double r, double t) { return 2.0 * r * std::exp(r * r + t); };
    u.drr = [](double r, double t) { return (2.0 + 4.0 * r * r) * std::exp(r * r + t); };
    u.dt = [](double r, double t) { return std::exp(r * r + t); };
    std::vector<SpaceTimePoint> pts;
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) pts.push_back({0.1 * i, 0.1 * j});
    }
    CHECK(log_transform_consistency(u, Exponent::finite(2), 2, pts) < 1e-10);
    CHECK(log_transform_consistency(u, Exponent::finite(3), 3, pts) < 1e-10);
    CHECK(log_transform_consistency(u, Exponent::infinity(), 2, pts) < 1e-10);

    SpaceTimeFunction one;
    one.value = [](double, double) { return 1.0; };
    one.dr = one.drr = one.dt = [](double, double) { return 0.0; };
    CHECK(log_transform_consistency(one, Exponent::finite(3), 2, pts) == 0.0);

    std::vector<SpaceTimePoint> kp;
    for (int i = 0; i < 10; ++i) kp.push_back({0.2 * i, 0.5 + 0.1 * i});
    CHECK(log_transform_consistency(tp::heat_kernel(2), Exponent::finite(2), 2, kp) < 1e-8);

    SpaceTimeFunction neg = one;
    neg.value = [](double, double) { return -1.0; };
    CHECK_THROWS_AS(log_transform_consistency(neg, Exponent::finite(2), 2, kp), DomainError);
}

namespace {

SpaceTimeField sample_field(const SpaceTimeFunction& u, double R, std::size_t intervals, double t0,
                            double dt, std::size_t levels, const Exponent& p, int n) {
    SpaceTimeField f;
    f.grid = {R, intervals};
    f.p = p;
    f.n = n;
    for (std::size_t j = 0; j < levels; ++j) {
        const double t = t0 + dt * j;
        f.times.push_back(t);
        std::vector<double> row;
        for (std::size_t i = 0; i <= intervals; ++i) row.push_back(u.value(f.grid.r(i), t));
        f.values.push_back(row);
    }
    return f;
}

}  // namespace

TEST_CASE("finite-difference residual audit") {
    SpaceTimeFunction one;
    one.value = [](double, double) { return 1.0; };
    one.dr = one.drr = one.dt = [](double, double) { return 0.0; };
    const auto flat = sample_field(one, 1.0, 10, 0.0, 0.1, 3, Exponent::finite(3), 2);
    CHECK(fd_residual_on_field(flat, Exponent::finite(3), 2).max_abs() == 0.0);

    // Heat kernel: error O(h^2 + dt) with dt proportional to h^2.
    const auto K = tp::heat_kernel(2);
    std::vector<double> errs;
    for (std::size_t N : {100, 200, 400}) {
        const double h = 2.0 / N;
        const double dt = 0.1 * h * h;
        const auto f = sample_field(K, 2.0, N, 1.0, dt, 2, Exponent::finite(2), 2);
        errs.push_back(fd_residual_on_field(f, Exponent::finite(2), 2).max_abs());
    }
    CHECK(errs[0] / errs[1] == doctest::Approx(4.0).epsilon(0.1));
    CHECK(errs[1] / errs[2] == doctest::Approx(4.0).epsilon(0.1));

    SpaceTimeField tiny;
    tiny.grid = {1.0, 1};
    tiny.times = {0.0, 1.0};
    tiny.values = {{1.0, 1.0}, {1.0, 1.0}};
    CHECK_THROWS_AS(fd_residual_on_field(tiny, Exponent::finite(2), 2), GridError);
}

TEST_CASE("the infinity branch never reaches finite-p code") {
    const auto f = tp::power(1.0, 4.0 / 3.0);
    reset_finite_path_calls();
    eval_inf_laplacian_radial(f, 0.0);
    eval_inf_laplacian_radial(f, 0.5);
    SpaceTimeFunction u;
    u.value = [](double r, double t) { return std::exp(r * r + t); };
    u.dr = [](double r, double t) { return 2.0 * r * std::exp(r * r + t); };
    u.drr = [](double r, double t) { return (2.0 + 4.0 * r * r) * std::exp(r * r + t); };
    u.dt = [](double r, double t) { return std::exp(r * r + t); };
    gamma_p_residual(u, Exponent::infinity(), 2, {0.3, 0.1});
    g_p_residual(u, Exponent::infinity(), 2, {0.0, 0.1});
    CHECK(finite_path_calls() == 0);
    gamma_p_residual(u, Exponent::finite(3), 2, {0.3, 0.1});
    CHECK(finite_path_calls() > 0);
}

TEST_CASE("verdict classification") {
    CHECK(classify(0.0, 1.0, 1e-9, 1.0) == Verdict::Subsolution);
    CHECK(classify(-1.0, 0.0, 1e-9, 1.0) == Verdict::Supersolution);
    CHECK(classify(-1e-10, 1e-10, 1e-9, 1.0) == Verdict::Solution);
    CHECK(classify(-1.0, 1.0, 1e-9, 1.0) == Verdict::Indeterminate);
    CHECK(verdict_satisfies(Verdict::Solution, Verdict::Subsolution));
    CHECK_FALSE(verdict_satisfies(Verdict::Subsolution, Verdict::Supersolution));
}
