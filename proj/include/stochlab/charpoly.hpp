#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "stochlab/dyson.hpp"
#include "stochlab/rng.hpp"

namespace stochlab {

struct GueSpec {
    int N;
    double sigma2;

    GueSpec(int n, double s2);
};

// Sorted eigenvalues; diagonal variance sigma2, off-diagonal real and imaginary parts sigma2/2 each.
WeylPoint sample_gue(const GueSpec& spec, RngStream& rng);

struct ComplexEstimate {
    std::complex<double> mean;
    double stderr_re;
    double stderr_im;
    std::size_t samples;
};

// E prod_n prod_i (alpha_n - lambda_i)
ComplexEstimate mgue_mc(const std::vector<std::complex<double>>& alpha, const GueSpec& spec, std::size_t samples,
                        std::uint64_t seed, int workers = 1);

// 2n x 2n Hermite determinant over the Vandermonde of alpha
std::complex<double> mgue_det(const std::vector<std::complex<double>>& alpha, const GueSpec& spec);
// n x n block form with the 2x2 Hermite minors
std::complex<double> mgue_det_block(const std::vector<std::complex<double>>& alpha, const GueSpec& spec);
// log gamma_{N,2n}
double log_gamma_prefactor(int N, int n);

struct IshikawaSides {
    std::complex<double> lhs;
    std::complex<double> rhs;
};
IshikawaSides ishikawa_sides(const std::vector<std::complex<double>>& x, const std::vector<std::complex<double>>& y,
                             const std::vector<std::complex<double>>& a, const std::vector<std::complex<double>>& b);
// |lhs - rhs| on random complex inputs
double ishikawa_check(int n, RngStream& rng);

struct TimeshiftReport {
    std::vector<std::string> labels;
    std::vector<double> ks;
    std::vector<double> critical;  // Bonferroni over all statistics
    std::size_t aborted;
    bool pass;
};

// Dyson SDE from GUE(sigma2) eigenvalues observed at t1 (and t2 > t1 when given)
// against the process from all particles at the origin observed at t + sigma2.
TimeshiftReport timeshift_equivalence_check(int N, double sigma2, double t1, double t2, double dt,
                                            std::size_t samples, std::uint64_t seed, double alpha = 0.01,
                                            int workers = 1);

}  // namespace stochlab
