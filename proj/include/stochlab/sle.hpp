#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stochlab/rng.hpp"

namespace stochlab {

using cplx = std::complex<double>;

// Samples B(t_k) on a uniform grid. kappa = 4/(D-1).
struct DrivingFunction {
    double D;
    double dt;
    std::vector<double> B;  // B[0] = 0, size steps+1

    double kappa() const { return 4.0 / (D - 1.0); }
    double horizon() const { return dt * static_cast<double>(B.size() - 1); }
    std::size_t steps() const { return B.size() - 1; }
    // half-plane capacity a(t) = (D-1)t/2
    double capacity(double t) const { return 0.5 * (D - 1.0) * t; }
};

DrivingFunction sample_driving(double D, double dt, double horizon, RngStream& rng);
DrivingFunction zero_driving(double D, double dt, double horizon);
// Brownian-bridge midpoints: same path on a grid with half the step.
DrivingFunction refine_driving(const DrivingFunction& drive, RngStream& rng);

using LoewnerChain = DrivingFunction;

enum class PointStatus { alive, swallowed };

struct SwallowReport {
    cplx z;
    std::optional<double> T_z;
    PointStatus status = PointStatus::alive;
    cplx g;              // g_t(z) at the requested time, or at the swallowing step
    double min_gap = 0;  // smallest |g + B| met along the way
};

inline constexpr double kDefaultSwallowEps = 1e-4;

// Per step: exact vertical-slit map in the coordinate sqrt(kappa) g with the driving
// held at the right endpoint. The point is swallowed when |g + B| <= eps anywhere
// on the step, the driving jump included.
SwallowReport evolve_point(const LoewnerChain& chain, cplx z, double t, double eps_swallow = kDefaultSwallowEps);
// Same, starting from the value g at grid index k0 and running to index k1.
SwallowReport evolve_between(const LoewnerChain& chain, cplx g0, std::size_t k0, std::size_t k1,
                             double eps_swallow = kDefaultSwallowEps);

// gamma(t_k) for k = 0..steps, by composing inverse slit maps back from the tip.
std::vector<cplx> trace(const LoewnerChain& chain);

struct SelfApproach {
    std::size_t j, k;
    double distance;
};
// Closest pair j < k with |gamma_j - gamma_k| < r such that the curve went at
// least excursion_factor * r away from gamma_k in between (so that neighbours
// along the curve do not count). Resolution-limited diagnostic only.
std::optional<SelfApproach> find_self_approach(const std::vector<cplx>& gamma, double r = 1e-2,
                                               double excursion_factor = 10.0);

enum class Phase { simple, self_intersecting, space_filling };
Phase phase(double D);
std::string phase_name(Phase p);
double hausdorff_dimension(double D);

struct SwallowStat {
    cplx z;
    double frequency;
    std::size_t swallowed;
    std::size_t chains;
};

SwallowStat swallow_frequency(double D, double dt, double horizon, cplx z, std::size_t chains,
                              std::uint64_t seed, double eps_swallow = kDefaultSwallowEps, int workers = 1);

struct SwallowTable {
    double D, dt, horizon, eps;
    std::vector<SwallowStat> at_dt;
    std::vector<SwallowStat> at_half_dt;  // same driving paths refined by bridge midpoints
};

SwallowTable swallow_statistics(double D, double dt, double horizon, const std::vector<cplx>& points,
                                std::size_t chains, std::uint64_t seed, double eps_swallow = kDefaultSwallowEps,
                                int workers = 1);

}  // namespace stochlab
