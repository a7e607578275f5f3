#include "stochlab/special.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "stochlab/errors.hpp"
#include "stochlab/quadrature.hpp"

namespace stochlab {

using std::numbers::pi;

double heat_kernel(double t, double a, double b) {
    if (!(t > 0)) throw DomainError("heat_kernel: t must be positive (t = 0 is a point mass)");
    const double d = a - b;
    return std::exp(-d * d / (2.0 * t)) / std::sqrt(2.0 * pi * t);
}

namespace {

constexpr double kSeriesSwitch = 30.0;

double bessel_series(double nu, double z) {
    if (z == 0.0) {
        if (nu == 0.0) return 1.0;
        if (nu > 0.0) return 0.0;
        throw DomainError("bessel_i: I_nu(0) diverges for nu < 0");
    }
    const double half = 0.5 * z;
    double term = std::exp(nu * std::log(half) - std::lgamma(nu + 1.0));
    double sum = term;
    const double q = half * half;
    for (int n = 1; n < 500; ++n) {
        term *= q / (n * (n + nu));
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum;
}

// e^{-z} I_nu(z) ~ (2 pi z)^{-1/2} sum_k (-1)^k a_k(nu) / z^k
double bessel_asymptotic_scaled(double nu, double z) {
    const double mu = 4.0 * nu * nu;
    double term = 1.0, sum = 1.0, prev = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double f = (2.0 * k - 1.0);
        term *= -(mu - f * f) / (k * 8.0 * z);
        if (std::fabs(term) > std::fabs(prev)) break;  // past the smallest term
        sum += term;
        if (std::fabs(term) < 1e-17 * std::fabs(sum)) break;
        prev = term;
    }
    return sum / std::sqrt(2.0 * pi * z);
}

}  // namespace

double bessel_i_scaled(double nu, double z) {
    if (!(nu > -1.0)) throw DomainError("bessel_i: nu must exceed -1");
    if (!(z >= 0.0)) throw DomainError("bessel_i: z must be nonnegative");
    if (z <= kSeriesSwitch) return std::exp(-z) * bessel_series(nu, z);
    return bessel_asymptotic_scaled(nu, z);
}

double bessel_i(double nu, double z) {
    if (!(nu > -1.0)) throw DomainError("bessel_i: nu must exceed -1");
    if (!(z >= 0.0)) throw DomainError("bessel_i: z must be nonnegative");
    if (z <= kSeriesSwitch) return bessel_series(nu, z);
    if (z > 700.0) throw OverflowError("bessel_i: exp(z) overflows; use bessel_i_scaled");
    return std::exp(z) * bessel_asymptotic_scaled(nu, z);
}

double gauss_2f1(double a, double b, double c, double z, int max_terms) {
    if (c <= 0.0 && c == std::floor(c)) throw DomainError("gauss_2f1: c is a nonpositive integer");
    if (!(z >= 0.0 && z < 1.0)) throw DomainError("gauss_2f1: z must lie in [0,1)");
    double term = 1.0, sum = 1.0;
    for (int n = 0; n < max_terms; ++n) {
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
        sum += term;
        if (std::fabs(term) <= 1e-17 * std::fabs(sum)) {
            // bound the geometric-like tail by the current ratio
            const double ratio = std::fabs((a + n + 1) * (b + n + 1) / ((c + n + 1) * (n + 2.0)) * z);
            if (ratio < 1.0 && std::fabs(term) * ratio / (1.0 - ratio) <= 1e-16 * std::fabs(sum))
                return sum;
        }
        if (term == 0.0) return sum;
    }
    throw NumericError("gauss_2f1: series did not converge within the term budget", sum);
}

namespace {

// H_i(x) = sum_k (-1)^k c_k (2x)^{i-2k}, c_k = i! / (k! (i-2k)!) built by exact ratios
template <class T>
T hermite_sum(int i, T x) {
    if (i < 0) throw DomainError("hermite: negative degree");
    const T two_x = 2.0 * x;
    T sum = 0.0;
    double c = 1.0;
    for (int k = 0; 2 * k <= i; ++k) {
        if (k > 0) c = c * (i - 2 * k + 2) * (i - 2 * k + 1) / k;
        const T p = (i - 2 * k == 0) ? T(1.0) : std::pow(two_x, i - 2 * k);
        sum += ((k % 2) ? -c : c) * p;
    }
    return sum;
}

}  // namespace

double hermite(int i, double x) { return hermite_sum(i, x); }

std::complex<double> hermite(int i, std::complex<double> x) { return hermite_sum(i, x); }

std::complex<double> theta3_truncated(std::complex<double> v, std::complex<double> tau, int n_max) {
    if (!(tau.imag() > 0)) throw DomainError("theta3: Im tau must be positive");
    const std::complex<double> I(0.0, 1.0);
    std::complex<double> sum = 1.0;
    for (int n = 1; n <= n_max; ++n) {
        const std::complex<double> q = I * pi * tau * static_cast<double>(n) * static_cast<double>(n);
        const std::complex<double> e = 2.0 * pi * I * v * static_cast<double>(n);
        sum += std::exp(q + e) + std::exp(q - e);
    }
    return sum;
}

double theta3_tail_bound(std::complex<double> tau, int n_max) {
    const double a = pi * tau.imag();
    const double n1 = n_max + 1.0;
    return 2.0 * std::exp(-a * n1 * n1) / (1.0 - std::exp(-a * (2.0 * n1 + 1.0)));
}

ThetaValue theta3_eval(std::complex<double> v, std::complex<double> tau) {
    if (!(tau.imag() > 0)) throw DomainError("theta3: Im tau must be positive");
    if (tau.imag() < 1e-3) throw DomainError("theta3: Im tau below 1e-3, truncation budget exceeded");
    // |term_n| = exp(-pi Im(tau) n^2 -+ 2 pi Im(v) n): peak near |Im v|/Im tau
    const double a = pi * tau.imag();
    const double b = 2.0 * pi * std::fabs(v.imag());
    const double peak = b / (2.0 * a);
    const double log_peak = (b * b) / (4.0 * a);
    // log of the dropped tail relative to the peak below log(1e-14)
    const double need = std::log(1e14) + std::max(0.0, log_peak);
    const int n_max = static_cast<int>(std::ceil(peak + std::sqrt(need / a))) + 1;
    ThetaValue out;
    out.value = theta3_truncated(v, tau, n_max);
    out.n_max = n_max;
    const double n1 = n_max + 1.0;
    const double lead = std::exp(-a * n1 * n1 + b * n1);
    const double ratio = std::exp(-a * (2.0 * n1 + 1.0) + b);
    out.tail_bound = 2.0 * lead / (1.0 - ratio);
    return out;
}

std::complex<double> theta3(std::complex<double> v, std::complex<double> tau) {
    return theta3_eval(v, tau).value;
}

double zeta(double s, long terms) {
    if (!(s > 1.0)) throw DomainError("zeta: Dirichlet series needs s > 1");
    if (terms < 10) throw ArgumentError("zeta: too few terms");
    double sum = 0.0;
    for (long n = terms; n >= 1; --n) sum += std::pow(static_cast<double>(n), -s);
    // Euler-Maclaurin tail for n > terms
    const double N = static_cast<double>(terms);
    double tail = std::pow(N, 1.0 - s) / (s - 1.0) - 0.5 * std::pow(N, -s) + s * std::pow(N, -s - 1.0) / 12.0 -
                  s * (s + 1.0) * (s + 2.0) * std::pow(N, -s - 3.0) / 720.0;
    return sum + tail;
}

double xi_gamma_zeta(double s) {
    if (!(s > 1.0)) throw DomainError("xi_gamma_zeta: needs s > 1");
    return 0.5 * s * (s - 1.0) * std::pow(pi, -0.5 * s) * std::tgamma(0.5 * s) * zeta(s);
}

double xi_theta_integral(double s) {
    if (!(s > 0.0)) throw DomainError("xi_moment_function: needs s > 0");
    // theta3(0,iu) - 1 = 2 sum_n e^{-pi n^2 u}; integrand decays like u^{s/2} e^{-pi u}
    const double u_max = 1.0 + (45.0 + std::max(0.0, 0.5 * s) * std::log(20.0 + s)) / pi;
    static const QuadratureRule unit = gauss_legendre(32);
    auto f = [s](double u) {
        double th = 0.0;
        for (int n = 1; n < 100; ++n) {
            const double e = std::exp(-pi * n * n * u);
            th += e;
            if (e < 1e-18 * th) break;
        }
        th *= 2.0;
        return (std::pow(u, 0.5 * s - 1.0) + std::pow(u, 0.5 * (1.0 - s) - 1.0)) * th;
    };
    const int panels = 2 * static_cast<int>(std::ceil(u_max));
    const double fine = integrate_panels(f, 1.0, u_max, panels, unit);
    const double coarse = integrate_panels(f, 1.0, u_max, panels / 2, unit);
    const double value = 0.5 + 0.25 * s * (s - 1.0) * fine;
    if (std::fabs(fine - coarse) > 1e-12 * std::max(1.0, std::fabs(fine)))
        throw NumericError("xi_moment_function: quadrature did not settle", value);
    return value;
}

}  // namespace stochlab
