#pragma once

#include <cstdint>
#include <vector>

#include "stochlab/rng.hpp"

namespace stochlab {

struct SeriesValue {
    double value;
    int n_max;
    double tail_bound;
};

// P(max of the duration-1 three-dimensional Bessel bridge <= h).
// n_max < 0 picks the truncation from the tail bound.
SeriesValue max_cdf_h1(double h, int n_max = -1);
// d/dh of the above
double max_density_h1(double h);
// top path of N noncolliding bridges
SeriesValue max_cdf_hN(int N, double h, int n_max = -1);

// E[H^s] through the xi function
double moment_h1(double s);
// E[H^s] = int s h^{s-1} (1 - F(h)) dh with F from the series
double moment_h1_stieltjes(double s);

struct BridgePath {
    std::vector<double> times;
    std::vector<double> values;
};

// Euclidean norm of three independent Brownian bridges, exact at the grid times.
BridgePath simulate_bessel_bridge(double dt, RngStream& rng);
double bridge_max(double dt, RngStream& rng);

// Discrete grid maxima undershoot the continuous one by about this many sqrt(dt).
inline constexpr double kGridMaxShift = 0.5826;

struct BridgeCdfRow {
    double h;
    double exact;
    double mc;
    double stderr_;
    double bias;  // kGridMaxShift sqrt(dt) f(h)
    bool pass;    // |mc - exact| <= 3 stderr + bias
};

std::vector<double> bridge_max_samples(double dt, std::size_t samples, std::uint64_t seed, int workers = 1);
std::vector<BridgeCdfRow> bridge_cdf_table(const std::vector<double>& hs, const std::vector<double>& maxima, double dt);

}  // namespace stochlab
