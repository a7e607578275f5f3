#include "stochlab/sle.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "stochlab/errors.hpp"
#include "stochlab/stats.hpp"

namespace stochlab {

namespace {

void check_dimension(double D) {
    if (!(D > 1.0)) throw DomainError("sle: dimension must exceed 1");
}

// root of (d^2 + c) lying in the closed upper half-plane; on the real axis the
// root keeps the sign of Re d
cplx upper_root(cplx d, double c) {
    cplx s = std::sqrt(d * d + c);
    if (s.imag() < 0.0 || (s.imag() == 0.0 && s.real() * d.real() < 0.0)) s = -s;
    return s;
}

// distance from 0 to the segment {d^2 + 4 tau : 0 <= tau <= dt}
double segment_gap_sq(cplx d2, double four_dt) {
    const double tau = std::clamp(-d2.real(), 0.0, four_dt);
    return std::abs(d2 + tau);
}

}  // namespace

DrivingFunction sample_driving(double D, double dt, double horizon, RngStream& rng) {
    check_dimension(D);
    if (!(dt > 0.0) || dt > horizon) throw ArgumentError("sample_driving: need 0 < dt <= horizon");
    const std::size_t K = static_cast<std::size_t>(std::llround(horizon / dt));
    DrivingFunction f{D, dt, std::vector<double>(K + 1, 0.0)};
    const double sq = std::sqrt(dt);
    for (std::size_t k = 1; k <= K; ++k) f.B[k] = f.B[k - 1] + sq * rng.normal();
    return f;
}

DrivingFunction zero_driving(double D, double dt, double horizon) {
    check_dimension(D);
    if (!(dt > 0.0) || dt > horizon) throw ArgumentError("zero_driving: need 0 < dt <= horizon");
    const std::size_t K = static_cast<std::size_t>(std::llround(horizon / dt));
    return DrivingFunction{D, dt, std::vector<double>(K + 1, 0.0)};
}

DrivingFunction refine_driving(const DrivingFunction& drive, RngStream& rng) {
    DrivingFunction f{drive.D, 0.5 * drive.dt, std::vector<double>(2 * drive.steps() + 1, 0.0)};
    const double sd = std::sqrt(0.25 * drive.dt);
    for (std::size_t k = 0; k < drive.steps(); ++k) {
        f.B[2 * k] = drive.B[k];
        f.B[2 * k + 1] = 0.5 * (drive.B[k] + drive.B[k + 1]) + sd * rng.normal();
    }
    f.B.back() = drive.B.back();
    return f;
}

SwallowReport evolve_between(const LoewnerChain& chain, cplx g0, std::size_t k0, std::size_t k1,
                             double eps_swallow) {
    if (k1 > chain.steps() || k0 > k1) throw ArgumentError("evolve_between: indices outside the chain");
    const double rk = std::sqrt(chain.kappa());
    const double four_dt = 4.0 * chain.dt;
    const double eps = eps_swallow * rk;  // in rescaled units
    SwallowReport rep;
    rep.z = g0;
    cplx w = rk * g0;
    double min_gap = std::abs(w + rk * chain.B[k0]);
    for (std::size_t k = k0 + 1; k <= k1; ++k) {
        const double u_prev = -rk * chain.B[k - 1];
        const double u = -rk * chain.B[k];
        // the driving sweeps [u_prev, u] before the step
        const double lo = std::min(u_prev, u), hi = std::max(u_prev, u);
        const double jump_gap = std::abs(w - cplx(std::clamp(w.real(), lo, hi), 0.0));
        const cplx d = w - u;
        const double step_gap = std::sqrt(segment_gap_sq(d * d, four_dt));
        const double gap = std::min(jump_gap, step_gap);
        min_gap = std::min(min_gap, gap);
        if (gap <= eps) {
            rep.status = PointStatus::swallowed;
            rep.T_z = chain.dt * static_cast<double>(k);
            rep.g = w / rk;
            rep.min_gap = min_gap / rk;
            return rep;
        }
        const cplx s = upper_root(d, four_dt);
        w += four_dt / (s + d);
    }
    rep.g = w / rk;
    rep.min_gap = min_gap / rk;
    return rep;
}

SwallowReport evolve_point(const LoewnerChain& chain, cplx z, double t, double eps_swallow) {
    if (z == cplx(0.0, 0.0)) throw DomainError("evolve_point: z = 0 is the curve's starting point");
    if (z.imag() < 0.0) throw DomainError("evolve_point: z must lie in the closed upper half-plane");
    if (t < 0.0 || t > chain.horizon() * (1 + 1e-12)) throw ArgumentError("evolve_point: t outside the chain");
    const std::size_t k1 = static_cast<std::size_t>(std::llround(t / chain.dt));
    SwallowReport rep = evolve_between(chain, z, 0, std::min(k1, chain.steps()), eps_swallow);
    rep.z = z;
    return rep;
}

std::vector<cplx> trace(const LoewnerChain& chain) {
    const double rk = std::sqrt(chain.kappa());
    const double c = -4.0 * chain.dt;
    const std::size_t K = chain.steps();
    std::vector<cplx> gamma(K + 1);
    gamma[0] = 0.0;
    for (std::size_t k = 1; k <= K; ++k) {
        cplx w = -rk * chain.B[k];
        for (std::size_t j = k; j >= 1; --j) {
            const double u = -rk * chain.B[j];
            w = u + upper_root(w - u, c);
        }
        if (!std::isfinite(w.real()) || !std::isfinite(w.imag()) || w.imag() < 0.0)
            throw NumericError("trace: inverse map left the half-plane; refine the step", w.imag());
        gamma[k] = w / rk;
    }
    return gamma;
}

std::optional<SelfApproach> find_self_approach(const std::vector<cplx>& gamma, double r, double excursion_factor) {
    if (!(r > 0.0)) throw ArgumentError("find_self_approach: r must be positive");
    if (!(excursion_factor > 1.0)) throw ArgumentError("find_self_approach: excursion factor must exceed 1");
    const double reach = excursion_factor * r;
    auto key = [r](cplx p) {
        const long long i = static_cast<long long>(std::floor(p.real() / r));
        const long long j = static_cast<long long>(std::floor(p.imag() / r));
        return (i << 32) ^ (j & 0xffffffffLL);
    };
    std::unordered_map<long long, std::vector<std::size_t>> cells;
    std::optional<SelfApproach> best;
    for (std::size_t k = 0; k < gamma.size(); ++k) {
        // last index before k at distance >= reach from gamma_k
        std::size_t m = k;
        bool left = false;
        while (m > 0) {
            --m;
            if (std::abs(gamma[m] - gamma[k]) >= reach) {
                left = true;
                break;
            }
        }
        if (left) {
            const double cx = std::floor(gamma[k].real() / r), cy = std::floor(gamma[k].imag() / r);
            for (int a = -1; a <= 1; ++a)
                for (int b = -1; b <= 1; ++b) {
                    const cplx probe((cx + a + 0.5) * r, (cy + b + 0.5) * r);
                    auto it = cells.find(key(probe));
                    if (it == cells.end()) continue;
                    for (std::size_t j : it->second) {
                        if (j >= m) continue;
                        const double d = std::abs(gamma[j] - gamma[k]);
                        if (d < r && (!best || d < best->distance)) best = SelfApproach{j, k, d};
                    }
                }
        }
        cells[key(gamma[k])].push_back(k);
    }
    return best;
}

Phase phase(double D) {
    check_dimension(D);
    if (D >= 2.0) return Phase::simple;
    if (D > 1.5) return Phase::self_intersecting;
    return Phase::space_filling;
}

std::string phase_name(Phase p) {
    switch (p) {
        case Phase::simple: return "simple";
        case Phase::self_intersecting: return "self_intersecting";
        case Phase::space_filling: return "space_filling";
    }
    return "unknown";
}

double hausdorff_dimension(double D) {
    check_dimension(D);
    if (D >= 1.5) return 1.0 + 1.0 / (2.0 * (D - 1.0));
    return 2.0;
}

namespace {

SwallowStat tally(cplx z, const std::vector<int>& hits) {
    std::size_t n = 0;
    for (int h : hits) n += static_cast<std::size_t>(h);
    return SwallowStat{z, static_cast<double>(n) / static_cast<double>(hits.size()), n, hits.size()};
}

}  // namespace

SwallowStat swallow_frequency(double D, double dt, double horizon, cplx z, std::size_t chains, std::uint64_t seed,
                              double eps_swallow, int workers) {
    if (chains == 0) throw ArgumentError("swallow_frequency: need at least one chain");
    auto hits = map_indexed<int>(chains, workers, [&](std::size_t i) {
        RngStream rng(seed, i);
        const auto chain = sample_driving(D, dt, horizon, rng);
        return evolve_point(chain, z, horizon, eps_swallow).status == PointStatus::swallowed ? 1 : 0;
    });
    return tally(z, hits);
}

SwallowTable swallow_statistics(double D, double dt, double horizon, const std::vector<cplx>& points,
                                std::size_t chains, std::uint64_t seed, double eps_swallow, int workers) {
    if (chains == 0) throw ArgumentError("swallow_statistics: need at least one chain");
    SwallowTable table{D, dt, horizon, eps_swallow, {}, {}};
    const std::size_t P = points.size();
    // per chain: P flags on the grid dt, then P flags on dt/2
    auto flags = map_indexed<std::vector<int>>(chains, workers, [&](std::size_t i) {
        RngStream rng(seed, i);
        const auto chain = sample_driving(D, dt, horizon, rng);
        RngStream mid(seed, i + (std::uint64_t{1} << 40));
        const auto fine = refine_driving(chain, mid);
        std::vector<int> out(2 * P);
        for (std::size_t p = 0; p < P; ++p) {
            out[p] = evolve_point(chain, points[p], horizon, eps_swallow).status == PointStatus::swallowed;
            out[P + p] = evolve_point(fine, points[p], horizon, eps_swallow).status == PointStatus::swallowed;
        }
        return out;
    });
    for (std::size_t p = 0; p < P; ++p) {
        std::vector<int> a(chains), b(chains);
        for (std::size_t i = 0; i < chains; ++i) {
            a[i] = flags[i][p];
            b[i] = flags[i][P + p];
        }
        table.at_dt.push_back(tally(points[p], a));
        table.at_half_dt.push_back(tally(points[p], b));
    }
    return table;
}

}  // namespace stochlab
