#include <cmath>

#include "doctest.h"
#include "stochlab/charpoly.hpp"
#include "stochlab/errors.hpp"
#include "stochlab/quadrature.hpp"
#include "stochlab/special.hpp"
#include "stochlab/stats.hpp"

using namespace stochlab;
using cplx = std::complex<double>;

TEST_SUITE("charpoly") {

TEST_CASE("GUE: one by one is a normal variable") {
    std::vector<double> v;
    for (std::size_t i = 0; i < 50000; ++i) {
        RngStream rng(1, i);
        const double l = sample_gue({1, 0.6}, rng)[0];
        v.push_back(l * l);
    }
    const auto e = estimate(v);
    CHECK(std::fabs(e.mean - 0.6) < 3 * e.stderr_);
    CHECK_THROWS_AS(GueSpec(2, 0.0), DomainError);
}

TEST_CASE("GUE N=2: squared gap and one-point law against the eigenvalue density") {
    // joint density prop. to (y-x)^2 exp(-(x^2+y^2)/2) on x<y, by 2-d quadrature
    const auto r = gauss_legendre(96, -9, 9);
    double z = 0, m = 0;
    for (std::size_t i = 0; i < r.size(); ++i)
        for (std::size_t j = 0; j < r.size(); ++j) {
            const double x = r.node(i), y = r.node(j);
            const double w = r.weights[i] * r.weights[j] * (y - x) * (y - x) * std::exp(-(x * x + y * y) / 2);
            z += w;
            m += w * (y - x) * (y - x);
        }
    const double gap2 = m / z;
    CHECK(gap2 == doctest::Approx(6.0).epsilon(1e-10));

    const std::size_t n = 100000;
    std::vector<double> g, pick;
    for (std::size_t i = 0; i < n; ++i) {
        RngStream rng(2, i);
        const auto l = sample_gue({2, 1.0}, rng);
        g.push_back((l[1] - l[0]) * (l[1] - l[0]));
        pick.push_back(rng.uniform() < 0.5 ? l[0] : l[1]);
    }
    const auto e = estimate(g);
    CHECK(std::fabs(e.mean - gap2) < 3 * e.stderr_);

    // one-point law: integrate the joint density over the other coordinate
    auto marginal_cdf = [&](double c) {
        const auto in = gauss_legendre(96, -9, c);
        double s = 0;
        for (std::size_t i = 0; i < in.size(); ++i)
            for (std::size_t j = 0; j < r.size(); ++j) {
                const double x = in.node(i), y = r.node(j);
                s += in.weights[i] * r.weights[j] * (y - x) * (y - x) * std::exp(-(x * x + y * y) / 2);
            }
        return s / z;
    };
    for (double c : {-1.0, 0.0, 0.8})
        CHECK(marginal_cdf(c) ==
              doctest::Approx(normal_cdf(c) - 0.5 * c * std::exp(-c * c / 2) / std::sqrt(2 * M_PI)).epsilon(1e-10));
    const double ks = ks_one_sample(pick, [](double c) {
        return normal_cdf(c) - 0.5 * c * std::exp(-c * c / 2) / std::sqrt(2 * M_PI);
    });
    CHECK(ks < 1.63 / std::sqrt(double(n)));
}

TEST_CASE("GUE eigenvalue sum has mean zero") {
    std::vector<double> s;
    for (std::size_t i = 0; i < 20000; ++i) {
        RngStream rng(3, i);
        const auto l = sample_gue({3, 0.8}, rng);
        s.push_back(l[0] + l[1] + l[2]);
    }
    const auto e = estimate(s);
    CHECK(std::fabs(e.mean) < 3 * e.stderr_);
}

TEST_CASE("characteristic-polynomial moments: small cases") {
    const GueSpec one(1, 0.7);
    const auto m1 = mgue_mc({cplx(0.4, 0)}, one, 100000, 4);
    CHECK(std::fabs(m1.mean.real() - 0.4) < 3 * m1.stderr_re);
    const cplx a(0.3, 0), b(-1.2, 0);
    const auto m2 = mgue_mc({a, b}, one, 100000, 5);
    const cplx exact = a * b + 0.7;
    CHECK(std::fabs(m2.mean.real() - exact.real()) < 3 * m2.stderr_re);
    CHECK(std::abs(mgue_det({a, b}, one) - exact) < 1e-14);
    CHECK(std::abs(mgue_det_block({a, b}, one) - exact) < 1e-14);
    CHECK_THROWS_AS(mgue_det({a, a}, one), DomainError);
}

TEST_CASE("block form equals the full determinant form") {
    RngStream rng(6, 0);
    for (int N = 1; N <= 3; ++N)
        for (int n = 1; n <= 2; ++n)
            for (int rep = 0; rep < 5; ++rep) {
                std::vector<cplx> al(static_cast<std::size_t>(2 * n));
                for (auto& v : al) v = cplx(rng.normal(), 0.5 * rng.normal());
                const GueSpec s(N, 0.4 + rng.uniform());
                const cplx full = mgue_det(al, s), block = mgue_det_block(al, s);
                CHECK(std::abs(full - block) <= 1e-10 * std::max(1.0, std::abs(full)));
            }
}

TEST_CASE("determinant form is symmetric in alpha") {
    const GueSpec s(2, 0.9);
    const std::vector<cplx> al{0.3, -0.8, 1.4, cplx(0.2, 0.5)};
    const std::vector<cplx> perm{1.4, 0.3, cplx(0.2, 0.5), -0.8};
    CHECK(std::abs(mgue_det(al, s) - mgue_det(perm, s)) < 1e-12);
}

TEST_CASE("determinant form vs Monte Carlo for N = 1, 2, 3") {
    const std::vector<cplx> al{0.3, -1.1};
    for (int N = 1; N <= 3; ++N) {
        const GueSpec s(N, 0.7);
        const auto mc = mgue_mc(al, s, 1000000, 7 + N, default_workers());
        const cplx d = mgue_det(al, s);
        CHECK(std::fabs(mc.mean.real() - d.real()) < 3 * mc.stderr_re);
        CHECK(std::fabs(d.imag()) < 1e-12);
    }
}

TEST_CASE("Ishikawa determinant identity") {
    RngStream rng(9, 0);
    double worst = 0;
    for (int rep = 0; rep < 100; ++rep) worst = std::max(worst, ishikawa_check(2 + rep % 2, rng));
    CHECK(worst < 1e-10);
    const std::vector<cplx> x{0.1, 0.7}, y{1.5, -2.0}, ones{1.0, 1.0};
    CHECK(std::abs(ishikawa_sides(x, y, ones, ones).lhs) < 1e-15);
    // a = 0, b = 1 gives the Cauchy matrix 1/(y_j - x_i)
    const std::vector<cplx> zeros{0.0, 0.0};
    const auto s = ishikawa_sides(x, y, zeros, ones);
    const cplx cauchy = vandermonde(x) * vandermonde(y) * (-1.0) /
                        ((y[0] - x[0]) * (y[1] - x[0]) * (y[0] - x[1]) * (y[1] - x[1]));
    CHECK(std::abs(s.lhs - cauchy) < 1e-14);
    CHECK(std::abs(s.rhs - cauchy) < 1e-14);
    CHECK_THROWS_AS(ishikawa_sides({0.5, 0.1}, {0.5, 2.0}, ones, ones), DomainError);
}

TEST_CASE("time shift: GUE start equals the origin start shifted in time") {
    const auto one = timeshift_equivalence_check(1, 0.5, 0.5, 0.0, 1e-3, 100000, 11, 0.01, default_workers());
    CHECK(one.pass);
    const auto two = timeshift_equivalence_check(2, 0.5, 0.5, 0.0, 1e-3, 100000, 12, 0.01, default_workers());
    CHECK(two.pass);
    const auto pair = timeshift_equivalence_check(2, 0.5, 0.3, 0.6, 1e-3, 20000, 13, 0.01, default_workers());
    CHECK(pair.labels.size() == 6);
    CHECK(pair.pass);
    CHECK_THROWS_AS(timeshift_equivalence_check(4, 0.5, 0.5, 0.0, 1e-3, 10, 1), ArgumentError);
}

}
