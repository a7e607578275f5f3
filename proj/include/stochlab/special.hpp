#pragma once

#include <complex>

namespace stochlab {

// Gaussian transition density p_t(b|a); t must be positive.
double heat_kernel(double t, double a, double b);

// Modified Bessel function of the first kind, nu > -1, z >= 0.
double bessel_i(double nu, double z);
// exp(-z) I_nu(z); never overflows.
double bessel_i_scaled(double nu, double z);

// Gauss hypergeometric series on 0 <= z < 1.
double gauss_2f1(double a, double b, double c, double z, int max_terms = 1000000);

// Physicists' Hermite polynomial from the explicit finite sum.
double hermite(int i, double x);
std::complex<double> hermite(int i, std::complex<double> x);

struct ThetaValue {
    std::complex<double> value;
    int n_max;         // |n| <= n_max kept
    double tail_bound; // bound on the dropped terms
};

// sum_n exp(2 pi i v n + pi i tau n^2), truncated adaptively at 1e-14.
ThetaValue theta3_eval(std::complex<double> v, std::complex<double> tau);
std::complex<double> theta3(std::complex<double> v, std::complex<double> tau);
std::complex<double> theta3_truncated(std::complex<double> v, std::complex<double> tau, int n_max);
// 2 e^{-pi Im(tau) (n+1)^2} / (1 - e^{-pi Im(tau) (2n+3)}) for v real
double theta3_tail_bound(std::complex<double> tau, int n_max);

// Dirichlet series with Euler-Maclaurin tail, s > 1.
double zeta(double s, long terms = 1000000);

// xi(s) = 1/2 s(s-1) pi^{-s/2} Gamma(s/2) zeta(s), s > 1
double xi_gamma_zeta(double s);
// 1/2 + 1/4 s(s-1) int_1^inf (u^{s/2-1} + u^{(1-s)/2-1}) (theta3(0,iu)-1) du, s > 0
double xi_theta_integral(double s);
inline double xi_moment_function(double s) { return xi_theta_integral(s); }

}  // namespace stochlab
