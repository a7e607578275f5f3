#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stochlab/linalg.hpp"
#include "stochlab/rng.hpp"

namespace stochlab {

// Ordered particle positions x_1 < ... < x_N. Not validated on construction;
// operations that need strict order check it themselves.
using WeylPoint = std::vector<double>;

bool in_weyl_chamber(const WeylPoint& x);

// Finite multiset of points on the line.
struct PointConfiguration {
    std::vector<double> points;

    std::size_t size() const { return points.size(); }
    bool is_simple() const;
    // distinct points ascending, with multiplicities
    std::vector<std::pair<double, int>> support() const;
    // throws DomainError if a point repeats
    WeylPoint to_weyl() const;
};

// prod_{i<j} (x_j - x_i)
double vandermonde(const WeylPoint& x);
std::complex<double> vandermonde(const std::vector<std::complex<double>>& z);

// det[p_t(y_i | x_j)]
double km_determinant(double t, const WeylPoint& x, const WeylPoint& y);

// transition density of the noncolliding system
double noncolliding_density(double t, const WeylPoint& x, const WeylPoint& y);

struct ParticlePath {
    std::vector<double> times;
    std::vector<std::vector<double>> values;  // one N-vector per recorded time
    std::vector<double> diagonal_sum;         // matrix construction only: sum of diagonal drivers
    std::optional<double> collision_at;       // beta < 1: first step that loses the ordering
    bool aborted = false;                     // beta >= 1: ordering lost at the finest step
    std::string diagnostic;
};

struct DysonOptions {
    int record_stride = 1;  // last point always kept
    int max_halvings = 10;
};

ParticlePath simulate_dyson(double beta, const WeylPoint& x, double dt, double horizon, RngStream& rng,
                            const DysonOptions& opt = {});

struct HermitianBmState {
    WeylPoint x;  // diagonal start
};

// Eigenvalues of diag(x) + Hermitian-matrix BM, sorted ascending at every recorded step.
ParticlePath simulate_hermitian_bm(const HermitianBmState& state, double dt, double horizon, RngStream& rng,
                                   int record_stride = 1);

// prod_{v != u} (1 - (z-u)/(v-u)) over the support of xi
std::complex<double> phi_weight(const PointConfiguration& xi, double u, std::complex<double> z);

// Same product over the integer lattice, as the limit of symmetric windows
// [u-L, u+L] with L doubling and Richardson extrapolation in 1/L.
std::complex<double> phi_weight_lattice(double u, std::complex<double> z, double rel_tol = 1e-10);

struct HcizRecord {
    double mc_estimate;
    double rhs;
    double stderr_;
    std::size_t samples;
};

// Haar unitary by QR of a complex Gaussian matrix with phase correction.
ComplexMatrix sample_haar_unitary(int n, RngStream& rng);

HcizRecord hciz_check(const WeylPoint& x, const WeylPoint& y, double sigma2, std::size_t samples,
                      std::uint64_t seed, int workers = 1);

// Marginal-wise two-sample comparison of the two constructions at time t.
struct AspectComparison {
    std::vector<double> ks;        // per coordinate
    std::vector<double> critical;  // Bonferroni-corrected at alpha
    double gap_ks;                 // N=2 only: gap/sqrt(2) vs BES(3) from gap(0)/sqrt(2); NaN otherwise
    std::size_t aborted;  // excluded from ks; pass needs at most 1e-3 of the samples
    bool pass;
};

AspectComparison compare_aspects(const WeylPoint& x, double t, double dt, std::size_t samples, std::uint64_t seed,
                                 double alpha = 0.01, int workers = 1);

}  // namespace stochlab
