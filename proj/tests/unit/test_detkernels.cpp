#include <cmath>
#include <numbers>

#include "doctest.h"
#include "stochlab/detkernels.hpp"
#include "stochlab/errors.hpp"
#include "stochlab/quadrature.hpp"
#include "stochlab/rng.hpp"
#include "stochlab/special.hpp"

using namespace stochlab;
using std::numbers::pi;

namespace {

template <class F>
double integrate_line(F&& f, double lo, double hi, int panels = 8) {
    static const auto unit = gauss_legendre(64);
    return integrate_panels(f, lo, hi, panels, unit);
}

}  // namespace

TEST_SUITE("detkernels") {

TEST_CASE("one particle: kernel is the heat kernel") {
    const PointConfiguration xi{{0.0}};
    CHECK(kernel_K1(xi, 0.7, 0.4, 0.7, -0.3) == doctest::Approx(heat_kernel(0.7, 0.4, 0.0)).epsilon(1e-13));
    const double mass = integrate_line([&](double x) { return kernel_K1(xi, 0.7, x, 0.7, x); }, -10, 10);
    CHECK(std::fabs(mass - 1.0) < 1e-10);
}

TEST_CASE("mass identity for simple configurations") {
    const std::vector<PointConfiguration> cases{{{0.0}}, {{-1.0, 1.0}}, {{-1.2, 0.1, 0.9}}};
    for (const auto& xi : cases)
        for (double t : {0.2, 1.0}) {
            const double mass = integrate_line([&](double x) { return kernel_K1(xi, t, x, t, x); }, -9, 9, 16);
            CHECK(std::fabs(mass - double(xi.size())) < 1e-6);
        }
    CHECK_THROWS_AS(kernel_K1(PointConfiguration{{0.0, 0.0}}, 1, 0, 1, 0), DomainError);
}

TEST_CASE("time-ordered kernel is asymmetric") {
    const PointConfiguration xi{{-1.0, 1.0}};
    const double a = kernel_K1(xi, 1.0, 0.2, 0.5, -0.4);
    const double b = kernel_K1(xi, 0.5, -0.4, 1.0, 0.2);
    CHECK(std::fabs(a - b) > 1e-3);
}

TEST_CASE("contour form equals the residue form on simple configurations") {
    const PointConfiguration xi{{-1.0, 0.3, 1.0}};
    for (double x : {-1.0, 0.0, 1.0})
        for (double y : {-1.0, 0.0, 1.0})
            CHECK(std::fabs(kernel_K2(xi, 0.5, x, 0.5, y) - kernel_K1(xi, 0.5, x, 0.5, y)) < 1e-8);
    CHECK(std::fabs(kernel_K2(xi, 1.0, 0.4, 0.5, -0.3) - kernel_K1(xi, 1.0, 0.4, 0.5, -0.3)) < 1e-8);
}

TEST_CASE("contour radius doubling leaves the kernel unchanged") {
    const PointConfiguration xi{{-0.5, 0.5}};
    for (double x : {-0.6, 0.2})
        for (double y : {-0.3, 0.8}) {
            const double a = kernel_K2(xi, 1.0, x, 1.0, y);
            const double b = kernel_K2(xi, 1.0, x, 1.0, y, {256, 2.0});
            CHECK(std::fabs(a - b) < 1e-10);
        }
}

TEST_CASE("two particles at the origin: GUE density with mass 2") {
    const PointConfiguration xi{{0.0, 0.0}};
    const auto k = make_kernel_K2(xi);
    const double t = 0.8;
    const double mass = integrate_line([&](double x) { return k(t, x, t, x); }, -9, 9, 16);
    CHECK(std::fabs(mass - 2.0) < 1e-6);
    // GUE(2) one-point density at variance t: (p_t(x)) (1 + x^2/t) ... via Hermite functions
    for (double x : {0.0, 0.7, 1.9}) {
        const double g = heat_kernel(t, x, 0.0) * (1.0 + x * x / t);
        CHECK(k(t, x, t, x) == doctest::Approx(g).epsilon(1e-9));
    }
}

TEST_CASE("sine kernel values") {
    CHECK(sine_kernel(0.3, 0.3) == 1.0);
    CHECK(std::fabs(sine_kernel(0.0, 1.0)) < 1e-15);
    for (double x : {-0.4, 0.0, 1.3})
        for (double y : {-1.1, 0.25, 2.0})
            CHECK(std::fabs(extended_sine_kernel(0.7, x, 0.7, y) - sine_kernel(x, y)) < 1e-12);
}

TEST_CASE("extended sine kernel: even in the displacement, time-ordered") {
    for (double s : {0.5, 1.0})
        for (double t : {0.25, 1.5}) {
            CHECK(extended_sine_kernel(s, 0.3, t, -0.4) == doctest::Approx(extended_sine_kernel(s, -0.4, t, 0.3)));
        }
    // the upper branch near t = s tends to the sine kernel from both sides
    CHECK(extended_sine_kernel(1.0, 0.1, 1.0 + 1e-7, 0.6) == doctest::Approx(sine_kernel(0.1, 0.6)).epsilon(1e-6));
    CHECK(extended_sine_kernel(1.0 + 1e-7, 0.1, 1.0, 0.6) == doctest::Approx(sine_kernel(0.1, 0.6)).epsilon(1e-6));
    // lower branch equals minus the integral over [1, inf)
    const double s = 1.3, t = 0.9, d = 0.45;
    const double tail = integrate_line(
        [&](double u) { return std::exp(0.5 * pi * pi * u * u * (t - s)) * std::cos(pi * u * d); }, 1.0, 12.0, 32);
    CHECK(extended_sine_kernel(s, 0.0, t, d) == doctest::Approx(-tail).epsilon(1e-10));
}

TEST_CASE("lattice kernel: both forms agree") {
    const auto a = lattice_kernel(1.0, 0.3, 1.5, -0.2, -1, LatticeForm::series);
    const auto b = lattice_kernel(1.0, 0.3, 1.5, -0.2, -1, LatticeForm::theta);
    CHECK(std::fabs(a.value - b.value) < 1e-10);
    for (double s : {0.3, 0.8})
        for (double t : {0.2, 1.1}) {
            const auto c = lattice_correction(s, -0.6, t, 0.35, -1, LatticeForm::series);
            const auto d = lattice_correction(s, -0.6, t, 0.35, -1, LatticeForm::theta);
            CHECK(std::fabs(c.value - d.value) < 1e-10);
            CHECK(c.tail_bound < 1e-14);
        }
    CHECK_THROWS_AS(lattice_kernel(0.01, 0.0, 0.01, 0.0, 1), NumericError);
}

TEST_CASE("lattice kernel: one particle per unit length") {
    const double mass = integrate_line([](double x) { return lattice_kernel(1.0, x, 1.0, x).value; }, -5, 5, 20);
    CHECK(std::fabs(mass - 10.0) < 0.2);
}

TEST_CASE("lattice kernel approaches the extended sine kernel under a time shift") {
    double prev = 1e300;
    for (double u : {1.0, 2.0, 4.0, 8.0}) {
        double sup = 0.0;
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j) {
                const double x = -1.0 + 0.5 * i, y = -1.0 + 0.5 * j;
                sup = std::max(sup, std::fabs(lattice_kernel(u + 0.5, x, u + 1.0, y).value -
                                              extended_sine_kernel(0.5, x, 1.0, y)));
            }
        CHECK(sup < prev);
        prev = sup;
    }
}

TEST_CASE("correlation functions") {
    const auto sk = make_sine_kernel();
    CHECK(correlation_function(sk, {{0, 0.4}}) == 1.0);
    CHECK(correlation_function(sk, {{0, 0.4}, {0, 0.4}}) == doctest::Approx(0.0));
    CHECK(correlation_function(sk, {{0, 0.0}, {0, 0.5}}) == doctest::Approx(1.0 - 4.0 / (pi * pi)).epsilon(1e-14));
    const auto k1 = make_kernel_K1(PointConfiguration{{-1.0, 0.5, 1.0}});
    const auto lk = make_lattice_kernel();
    for (const auto* k : {&sk, &k1, &lk}) {
        CHECK(std::fabs(correlation_function(*k, {{1.0, 0.3}, {1.0, 0.3}})) < 1e-12);
        for (double d : {0.1, 0.6, 1.7}) CHECK(correlation_function(*k, {{1.0, 0.3}, {1.0, 0.3 + d}}) >= 0.0);
    }
}

TEST_CASE("Fredholm determinant: trivial and one-particle cases") {
    const auto k = make_kernel_K1(PointConfiguration{{0.0}});
    auto grid = default_grid({1.0}, 0.0);
    CHECK(fredholm_generating(k, grid, {{[](double) { return 0.0; }, -1, 1}}) == 1.0);

    const double theta = 0.7, a = 0.3, b = 1.2;
    grid.breakpoints = {a, b};
    grid.order = 32;
    const double psi =
        fredholm_generating(k, grid, {{[&](double) { return std::exp(theta) - 1.0; }, a, b}});
    const double prob = normal_cdf(b) - normal_cdf(a);
    CHECK(psi == doctest::Approx(1.0 + (std::exp(theta) - 1.0) * prob).epsilon(1e-12));

    auto bad = default_grid({1.0}, 0.0);
    CHECK_THROWS_AS(fredholm_generating(k, bad, {{[](double) { return 1.0; }, -20, 1}}), ArgumentError);
}

TEST_CASE("Fredholm determinant: first-order expansion") {
    const auto k = make_kernel_K1(PointConfiguration{{-1.0, 1.0}});
    auto grid = default_grid({0.5, 1.0}, 1.0);
    grid.order = 96;
    auto bump = [](double c) {
        return [c](double x) {
            const double u = x - c;
            return std::fabs(u) < 1.5 ? std::pow(1.0 - u * u / 2.25, 3) : 0.0;
        };
    };
    const auto g0 = bump(-0.5), g1 = bump(0.8);
    const double first = integrate_line([&](double x) { return k(0.5, x, 0.5, x) * g0(x); }, -2.0, 1.0) +
                         integrate_line([&](double x) { return k(1.0, x, 1.0, x) * g1(x); }, -0.7, 2.3);
    auto residual = [&](double eps) {
        const double psi = fredholm_generating(
            k, grid, {{[&](double x) { return eps * g0(x); }, -2.0, 1.0}, {[&](double x) { return eps * g1(x); }, -0.7, 2.3}});
        return std::fabs(psi - 1.0 - eps * first);
    };
    const double r1 = residual(0.02), r2 = residual(0.01);
    CHECK(r1 < 0.02 * 0.02 * 10);
    CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("condition functionals") {
    for (double L : {1.0, 5.0, 40.0}) CHECK(std::fabs(condition_functionals_lattice(L, 1.5, 0.0).M) < 1e-15);
    double prev = 0.0;
    const double cap = std::pow(2.0 * zeta(1.5), 1.0 / 1.5);
    for (double L : {1.0, 2.0, 8.0, 64.0, 512.0}) {
        const double m = condition_functionals_lattice(L, 1.5, 0.0).M_alpha;
        CHECK(m > prev);
        CHECK(m < cap);
        prev = m;
    }
    CHECK(condition_functionals(PointConfiguration{{1.0}}, 1.0, 1.5, 0.0).M == 1.0);
    CHECK(condition_functionals(PointConfiguration{{1.0}}, 7.0, 1.5, 0.0).M == 1.0);
    // shifted squares for a = 2: points k^2 - 4, k != +-2
    const auto r = condition_functionals_lattice(5.0, 1.5, 2.0);
    CHECK(r.M1_shifted == doctest::Approx(1.0 / 4.0 + 2.0 / 3.0 + 2.0 / 5.0));
    CHECK_THROWS_AS(condition_functionals_lattice(5.0, 2.5, 0.0), ArgumentError);
}

}
