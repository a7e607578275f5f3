#include <cmath>
#include <numbers>

#include "doctest.h"
#include "stochlab/bessel.hpp"
#include "stochlab/errors.hpp"
#include "stochlab/quadrature.hpp"
#include "stochlab/special.hpp"
#include "stochlab/stats.hpp"

using namespace stochlab;
using std::numbers::pi;

TEST_SUITE("bessel") {

TEST_CASE("D=3 and D=1 closed forms") {
    const BesselSpec d3(3, 0.7), d1(1, 0.7);
    CHECK(bessel_density(d3, 1, 1.3) ==
          doctest::Approx((1.3 / 0.7) * (heat_kernel(1, 0.7, 1.3) - heat_kernel(1, -0.7, 1.3))).epsilon(1e-12));
    CHECK(bessel_density(d1, 1, 1.3) ==
          doctest::Approx(heat_kernel(1, 0.7, 1.3) + heat_kernel(1, -0.7, 1.3)).epsilon(1e-12));
    CHECK_THROWS_AS(bessel_density(d3, 0, 1), DomainError);
}

TEST_CASE("start at the origin uses its own branch") {
    // D=3 from 0: Maxwell-type density sqrt(2/pi) y^2 t^{-3/2} e^{-y^2/2t}
    const BesselSpec s(3, 0);
    CHECK(bessel_density(s, 2, 1.1) ==
          doctest::Approx(std::sqrt(2 / pi) * 1.21 * std::pow(2.0, -1.5) * std::exp(-1.21 / 4)).epsilon(1e-14));
    // continuity of the x > 0 branch towards x = 0
    CHECK(bessel_density(BesselSpec(2.5, 1e-7), 1, 0.8) == doctest::Approx(bessel_density(BesselSpec(2.5, 0), 1, 0.8)).epsilon(1e-8));
}

TEST_CASE("density normalizes for fractional D") {
    for (double D : {0.6, 1.4, 2.0, 2.5, 3.0}) {
        const BesselSpec s(D, 0.5);
        CHECK(std::fabs(bessel_cdf(s, 1, 0.5 + 12) - 1) < 1e-10);
    }
    // small t pushes the Bessel argument into the large-z branch
    const BesselSpec s(2.5, 3.0);
    CHECK(std::fabs(bessel_cdf(s, 0.01, 4.5) - 1) < 1e-10);
    CHECK(bessel_density(s, 0.01, 3.0) > 0);
}

TEST_CASE("density is nonnegative and solves the backward equation") {
    for (double D : {1.5, 2.0, 3.0}) {
        const double y = 1.1, t = 0.8;
        auto u = [&](double x) { return bessel_density(BesselSpec(D, x), t, y); };
        auto residual = [&](double x, double h) {
            const double ut = (bessel_density(BesselSpec(D, x), t + h, y) - bessel_density(BesselSpec(D, x), t - h, y)) / (2 * h);
            const double uxx = (u(x + h) - 2 * u(x) + u(x - h)) / (h * h);
            const double ux = (u(x + h) - u(x - h)) / (2 * h);
            return ut - 0.5 * uxx - 0.5 * (D - 1) / x * ux;
        };
        const double r1 = std::fabs(residual(0.9, 1e-2)), r2 = std::fabs(residual(0.9, 5e-3));
        CHECK(r2 < r1);
        CHECK(r1 / r2 > 3.0);  // second order: ratio near 4
        CHECK(u(0.9) >= 0);
    }
}

TEST_CASE("Chapman-Kolmogorov for D=2.5") {
    const double D = 2.5, s = 0.4, t = 0.7, x = 0.6, z = 1.2;
    const BesselSpec from_x(D, x);
    const QuadratureRule unit = gauss_legendre(64);
    constexpr int m = 4;
    auto f = [&](double v) {
        const double y = 10 * std::pow(v, m);
        return bessel_density(from_x, s, y) * bessel_density(BesselSpec(D, y), t, z) * 10 * m * std::pow(v, m - 1);
    };
    const double ck = integrate_panels(f, 0.0, 1.0, 16, unit);
    CHECK(std::fabs(ck - bessel_density(from_x, s + t, z)) < 1e-10);
}

TEST_CASE("sorted CDF matches pointwise CDF") {
    const BesselSpec s(3, 1.0);
    std::vector<double> ys{0.2, 0.5, 0.50001, 1.0, 2.7};
    auto c = bessel_cdf_sorted(s, 1, ys);
    for (std::size_t i = 0; i < ys.size(); ++i) CHECK(c[i] == doctest::Approx(bessel_cdf(s, 1, ys[i])).epsilon(1e-12));
}

TEST_CASE("D=3 Euler marginal matches the exact CDF") {
    const BesselSpec s(3, 1.0);
    auto finals = map_indexed<double>(100000, default_workers(), [&](std::size_t i) {
        RngStream r(101, i);
        BesselSimOptions o;
        o.record_stride = 1000000;
        return simulate_bessel(s, 1e-3, 1.0, r, o).values.back();
    });
    std::sort(finals.begin(), finals.end());
    CHECK(ks_from_sorted_cdf(bessel_cdf_sorted(s, 1.0, finals)) < 0.01);
}

TEST_CASE("D=1 from the origin is the absolute value of the driving BM") {
    RngStream a(5, 0), b(5, 0);
    auto p = simulate_bessel(BesselSpec(1, 0), 1e-2, 1.0, a);
    double w = 0;
    for (std::size_t k = 1; k < p.values.size(); ++k) {
        w += 0.1 * b.normal();
        CHECK(p.values[k] == doctest::Approx(std::fabs(w)).epsilon(1e-14));
    }
    CHECK_THROWS_AS(simulate_bessel(BesselSpec(1, 0), 1.0, 1.0, a), ArgumentError);
}

TEST_CASE("transient dimensions stay away from the origin more often as D grows") {
    auto frac = [](double D) {
        auto hits = map_indexed<int>(20000, default_workers(), [&](std::size_t i) {
            RngStream r(77, i);
            BesselSimOptions o;
            o.eps_hit = 0.05;
            o.record_stride = 1000000;
            return simulate_bessel(BesselSpec(D, 1.0), 1e-2, 10.0, r, o).hit_time ? 1 : 0;
        });
        double s = 0;
        for (int h : hits) s += h;
        return s / hits.size();
    };
    const double f25 = frac(2.5), f3 = frac(3.0);
    CHECK(f25 < 0.2);
    CHECK(f3 < f25);
}

TEST_CASE("hitting times") {
    // transient: rare hits
    int hits = 0;
    for (std::size_t i = 0; i < 10000; ++i) {
        RngStream r(9, i);
        if (hitting_time(BesselSpec(3, 1.0), 1e-3, 5.0, 1e-3, r)) ++hits;
    }
    CHECK(hits < 200);
    // D=1: reflection principle
    std::vector<double> ind;
    for (std::size_t i = 0; i < 10000; ++i) {
        RngStream r(10, i);
        ind.push_back(hitting_time(BesselSpec(1, 0.5), 1e-4, 1.0, 1e-3, r) ? 1.0 : 0.0);
    }
    const Estimate e = estimate(ind);
    CHECK(std::fabs(e.mean - 2 * (1 - normal_cdf(0.5))) < 3 * e.stderr_);
    // a lower threshold is crossed no earlier on the same driving path
    for (std::size_t i = 0; i < 50; ++i) {
        RngStream r1(12, i), r2(12, i);
        auto a = hitting_time(BesselSpec(1.5, 0.3), 1e-3, 20.0, 2e-3, r1);
        auto b = hitting_time(BesselSpec(1.5, 0.3), 1e-3, 20.0, 1e-3, r2);
        if (a && b) CHECK(*b >= *a);
        if (!a) CHECK(!b);
    }
}

TEST_CASE("Cardy formula edges") {
    CHECK(cardy_probability(5.0 / 3, 0.5, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(cardy_probability(1.7, 1.0 - 1e-9, 1.0) > 0.999);
    double prev = 2;
    for (double y = 0.6; y <= 2.0001; y += 0.1) {
        const double p = cardy_probability(1.7, 0.5, y);
        CHECK(p <= prev + 1e-15);
        CHECK(p > 0);
        CHECK(p < 1);
        prev = p;
    }
    CHECK_THROWS_AS(cardy_probability(1.4, 0.5, 1.0), DomainError);
    CHECK_THROWS_AS(cardy_probability(1.7, 1.0, 1.0), ArgumentError);
}

TEST_CASE("flow coupling keeps the order and the subcritical control rarely ties") {
    FlowOptions o;
    o.track_y = true;
    std::vector<double> sim;
    for (std::size_t i = 0; i < 400; ++i) {
        RngStream r(3, i);
        auto rec = simulate_flow({1.2, 0.5, 1.0}, 1e-4, r, o);
        CHECK(rec.ordered);
        REQUIRE(!rec.inconclusive);
        CHECK(*rec.t_x[0] <= *rec.t_x[2]);
        if (rec.t_y) CHECK(*rec.t_y >= *rec.t_x[2]);
        sim.push_back(rec.simultaneous[2]);
    }
    CHECK(estimate(sim).mean < 0.01);
    CHECK_THROWS_AS(simulate_flow({1.7, 1.0, 0.5}, 1e-4, *std::make_unique<RngStream>(1, 1)), ArgumentError);
}

TEST_CASE("Lamperti time change") {
    RngStream r(4, 0);
    auto p = lamperti_path(0.5, 0.0, 1e-3, 10.0, r);
    CHECK(p.clock[0] == 0.0);
    for (std::size_t k = 1; k < p.clock.size(); ++k) CHECK(p.clock[k] > p.clock[k - 1]);
    auto res = lamperti_check(0.5, 0.0, 1e-3, 20.0, 100000, 8, default_workers());
    CHECK(res.inconclusive < 100);
    CHECK(res.ks < 0.015);
}

}
