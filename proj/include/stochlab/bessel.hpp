#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "stochlab/rng.hpp"

namespace stochlab {

struct BesselSpec {
    double D;       // dimension, > 0
    double x = 0.0; // start, >= 0

    BesselSpec(double dimension, double start);
    double nu() const { return 0.5 * (D - 2.0); }
};

struct ProcessPath {
    std::vector<double> times;
    std::vector<double> values;
    std::optional<double> absorbed_at;
    std::optional<double> hit_time;  // first grid time with X <= eps_hit
};

double bessel_density(const BesselSpec& spec, double t, double y);
// P(X_t <= y), by quadrature of the density
double bessel_cdf(const BesselSpec& spec, double t, double y);
// CDF at every point of an ascending sample, integrating gap by gap.
std::vector<double> bessel_cdf_sorted(const BesselSpec& spec, double t, const std::vector<double>& ys);

struct BesselSimOptions {
    double eps_hit = 1e-3;
    int record_stride = 1;  // keep every k-th grid point (the last point is always kept)
    bool absorb = false;    // freeze the path at the first hit
    int max_halvings = 10;  // drift guard for D >= 2
};

ProcessPath simulate_bessel(const BesselSpec& spec, double dt, double horizon, RngStream& rng,
                            const BesselSimOptions& opt = {});

std::optional<double> hitting_time(const BesselSpec& spec, double dt, double horizon, double eps_hit,
                                   RngStream& rng);

double cardy_probability(double D, double x, double y);

struct FlowCoupling {
    double D;
    double x, y;  // 0 < x < y
};

struct FlowOptions {
    std::vector<double> eps_levels{1e-2, 3e-3, 1e-3};  // decreasing
    double c_eq = 10.0;
    bool track_y = false;          // continue the y-path alone after the x-hit
    long max_steps = 4'000'000;    // per path
};

struct FlowRecord {
    std::vector<std::optional<double>> t_x;  // per level
    std::vector<int> simultaneous;           // per level, 1 if X^y <= c_eq eps when X^x first <= eps
    std::optional<double> t_y;               // at the finest level, when tracked
    bool inconclusive = false;
    bool ordered = true;                     // X^x <= X^y at every step before the finest hit
    long steps = 0;
};

// Both paths share the Gaussian increments. The step is dt (X^x / x)^2, a constant
// step in the clock int dt / X^2 on which log X^x diffuses with unit rate.
FlowRecord simulate_flow(const FlowCoupling& c, double dt, RngStream& rng, const FlowOptions& opt = {});

struct CardyReport {
    double exact;
    std::vector<double> eps;
    std::vector<double> freq;
    std::vector<double> stderr_;
    double margin;  // max over levels of |p(eps_l) - p(finest)|
    std::size_t inconclusive;
    bool ordered;
    bool pass;
};

CardyReport cardy_monte_carlo(const FlowCoupling& c, double dt, std::size_t paths, std::uint64_t seed,
                              const FlowOptions& opt = {}, int workers = 1);

struct LampertiResult {
    double ks;                 // Kolmogorov distance to the density at clock time 1
    std::size_t used;          // paths whose clock reached 1
    std::size_t inconclusive;  // paths that did not
};

// Geometric BM exp(B + nu t) from e^{y0}, resampled at the inverse of int exp(2(B+nu s)) ds.
LampertiResult lamperti_check(double nu, double y0, double dt, double horizon, std::size_t paths,
                              std::uint64_t seed, int workers = 1);

// Single path of the time change: returns the clock A_t on the grid and the value at clock 1.
struct LampertiPath {
    std::vector<double> clock;
    std::optional<double> value_at_one;
};
LampertiPath lamperti_path(double nu, double y0, double dt, double horizon, RngStream& rng);

}  // namespace stochlab
