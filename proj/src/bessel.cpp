#include "stochlab/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "stochlab/errors.hpp"
#include "stochlab/quadrature.hpp"
#include "stochlab/special.hpp"
#include "stochlab/stats.hpp"

namespace stochlab {

using std::numbers::pi;

BesselSpec::BesselSpec(double dimension, double start) : D(dimension), x(start) {
    if (!(D > 0.0)) throw DomainError("BesselSpec: dimension must be positive");
    if (!(x >= 0.0)) throw DomainError("BesselSpec: start must be nonnegative");
}

double bessel_density(const BesselSpec& spec, double t, double y) {
    if (!(t > 0.0)) throw DomainError("bessel_density: t must be positive");
    if (!(y >= 0.0)) throw DomainError("bessel_density: y must be nonnegative");
    const double nu = spec.nu();
    const double x = spec.x;
    if (x == 0.0) {
        if (y == 0.0) {
            if (spec.D > 1.0) return 0.0;
            if (spec.D < 1.0) return std::numeric_limits<double>::infinity();
        }
        const double lg = (2.0 * nu + 1.0) * (y == 0.0 ? 0.0 : std::log(y)) - nu * std::log(2.0) -
                          (nu + 1.0) * std::log(t) - std::lgamma(nu + 1.0);
        return std::exp(lg - y * y / (2.0 * t));
    }
    if (y == 0.0) {
        // (y/x)^nu y I_nu(xy/t)/t ~ y^{2nu+1} (2t)^{-nu} / (t Gamma(nu+1))
        if (spec.D > 1.0) return 0.0;
        if (spec.D < 1.0) return std::numeric_limits<double>::infinity();
        return std::sqrt(2.0 / (pi * t)) * std::exp(-x * x / (2.0 * t));
    }
    // (1/t) y^{nu+1} x^{-nu} e^{-(x-y)^2/2t} [e^{-z} I_nu(z)], z = xy/t
    const double z = x * y / t;
    const double d = x - y;
    const double lg = (nu + 1.0) * std::log(y) - nu * std::log(x) - std::log(t) - d * d / (2.0 * t);
    return std::exp(lg) * bessel_i_scaled(nu, z);
}

double bessel_cdf(const BesselSpec& spec, double t, double y) {
    if (!(y > 0.0)) return 0.0;
    // y' = y v^m flattens the y^{D-1} behaviour at the origin
    constexpr int m = 6;
    static const QuadratureRule unit = gauss_legendre(32);
    auto f = [&](double v) {
        if (v <= 0.0) return 0.0;
        const double vm1 = std::pow(v, m - 1);
        return bessel_density(spec, t, y * vm1 * v) * y * m * vm1;
    };
    return integrate_panels(f, 0.0, 1.0, 24, unit);
}

std::vector<double> bessel_cdf_sorted(const BesselSpec& spec, double t, const std::vector<double>& ys) {
    static const QuadratureRule gap = gauss_legendre(8);
    std::vector<double> out(ys.size());
    double acc = 0.0, prev = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
        const double y = ys[i];
        if (i > 0 && y < prev) throw ArgumentError("bessel_cdf_sorted: sample must be ascending");
        if (i == 0) {
            acc = bessel_cdf(spec, t, y);
        } else if (y > prev) {
            acc += integrate_panels([&](double v) { return bessel_density(spec, t, v); }, prev, y, 1, gap);
        }
        out[i] = acc;
        prev = y;
    }
    return out;
}

namespace {

// One Euler step of length h with Brownian increment db; halves the step via
// Brownian-bridge splitting while a step would overshoot zero. Without halving
// the unreflected value is returned so callers can see a crossing.
double euler_step(double X, double h, double db, double drift_c, int depth, RngStream& rng) {
    const double next = X + drift_c * h / X + db;
    if (next > 0.0 || depth <= 0) return next;
    const double db1 = 0.5 * db + std::sqrt(0.25 * h) * rng.normal();
    double mid = std::fabs(euler_step(X, 0.5 * h, db1, drift_c, depth - 1, rng));
    if (mid == 0.0) mid = std::numeric_limits<double>::min();
    return std::fabs(euler_step(mid, 0.5 * h, db - db1, drift_c, depth - 1, rng));
}

}  // namespace

ProcessPath simulate_bessel(const BesselSpec& spec, double dt, double horizon, RngStream& rng,
                            const BesselSimOptions& opt) {
    if (!(dt > 0.0) || dt >= horizon) throw ArgumentError("simulate_bessel: need 0 < dt < horizon");
    if (spec.x == 0.0 && spec.D < 2.0 && spec.D != 1.0)
        throw ArgumentError("simulate_bessel: start at 0 needs D >= 2 (or D = 1)");
    if (opt.record_stride < 1) throw ArgumentError("simulate_bessel: record_stride must be positive");
    const long steps = static_cast<long>(std::llround(horizon / dt));
    const double sq = std::sqrt(dt);
    const double drift_c = 0.5 * (spec.D - 1.0);
    const bool exact_reflected_bm = spec.D == 1.0;  // X = |x + B| on the nose
    const int depth = spec.D >= 2.0 ? opt.max_halvings : 0;

    ProcessPath path;
    path.times.push_back(0.0);
    path.values.push_back(spec.x);
    double X = spec.x, W = spec.x;
    bool frozen = false;
    if (X <= opt.eps_hit && spec.D < 2.0) path.hit_time = 0.0;
    for (long k = 1; k <= steps; ++k) {
        const double db = sq * rng.normal();
        double raw = X;  // before reflection; a sign change means the origin was crossed
        if (!frozen) {
            if (exact_reflected_bm) {
                const double prev = W;
                W += db;
                raw = (prev > 0) == (W > 0) ? std::fabs(W) : -std::fabs(W);
            } else if (X == 0.0) {
                // D >= 2 from the origin: the first step is a pure reflected increment
                raw = std::fabs(db);
            } else {
                raw = euler_step(X, dt, db, drift_c, depth, rng);
            }
            X = std::fabs(raw);
        }
        const double t = k * dt;
        if (!path.hit_time && raw <= opt.eps_hit) {
            path.hit_time = t;
            if (opt.absorb) {
                path.absorbed_at = t;
                frozen = true;
            }
        }
        if (k % opt.record_stride == 0 || k == steps) {
            path.times.push_back(t);
            path.values.push_back(X);
        }
    }
    return path;
}

std::optional<double> hitting_time(const BesselSpec& spec, double dt, double horizon, double eps_hit,
                                   RngStream& rng) {
    if (!(dt > 0.0) || dt >= horizon) throw ArgumentError("hitting_time: need 0 < dt < horizon");
    if (spec.x <= eps_hit) return 0.0;
    const long steps = static_cast<long>(std::llround(horizon / dt));
    const double sq = std::sqrt(dt);
    const double drift_c = 0.5 * (spec.D - 1.0);
    const int depth = spec.D >= 2.0 ? 10 : 0;
    double X = spec.x, W = spec.x;
    for (long k = 1; k <= steps; ++k) {
        const double db = sq * rng.normal();
        double raw;
        if (spec.D == 1.0) {
            const double prev = W;
            W += db;
            raw = (prev > 0) == (W > 0) ? std::fabs(W) : -std::fabs(W);
        } else {
            raw = euler_step(X, dt, db, drift_c, depth, rng);
        }
        if (raw <= eps_hit) return k * dt;
        X = raw;
    }
    return std::nullopt;
}

double cardy_probability(double D, double x, double y) {
    if (!(D > 1.5 && D < 2.0)) throw DomainError("cardy_probability: D must lie in (3/2, 2)");
    if (!(x > 0.0)) throw ArgumentError("cardy_probability: x must be positive");
    if (!(x < y)) throw ArgumentError("cardy_probability: need x < y");
    const double u = (y - x) / y;
    const double pre = std::exp(std::lgamma(D - 1.0) - std::lgamma(2.0 * (D - 1.0)) - std::lgamma(2.0 - D));
    return 1.0 - pre * std::pow(u, 2.0 * D - 3.0) * gauss_2f1(2.0 * D - 3.0, D - 1.0, 2.0 * (D - 1.0), u);
}

FlowRecord simulate_flow(const FlowCoupling& c, double dt, RngStream& rng, const FlowOptions& opt) {
    if (!(c.x > 0.0 && c.x < c.y)) throw ArgumentError("simulate_flow: need 0 < x < y");
    if (!(c.D < 2.0 && c.D > 0.0)) throw DomainError("simulate_flow: needs 0 < D < 2");
    if (!(dt > 0.0)) throw ArgumentError("simulate_flow: dt must be positive");
    if (opt.eps_levels.empty()) throw ArgumentError("simulate_flow: no eps levels");
    for (std::size_t i = 1; i < opt.eps_levels.size(); ++i)
        if (!(opt.eps_levels[i] < opt.eps_levels[i - 1]))
            throw ArgumentError("simulate_flow: eps levels must decrease");

    const std::size_t L = opt.eps_levels.size();
    FlowRecord rec;
    rec.t_x.assign(L, std::nullopt);
    rec.simultaneous.assign(L, 0);
    const double a = 0.5 * (c.D - 1.0);
    const double scale = dt / (c.x * c.x);
    const double root_scale = std::sqrt(scale);
    double X = c.x, Y = c.y, t = 0.0;
    std::size_t level = 0;
    long k = 0;
    for (; k < opt.max_steps && level < L; ++k) {
        const double h = scale * X * X;
        const double db = root_scale * X * rng.normal();
        const double raw = X + a * h / X + db;
        X = std::fabs(raw);
        Y = std::fabs(Y + a * h / Y + db);
        t += h;
        // equality is the two paths merging to rounding, not a crossing
        if (Y < X && raw > 0.0) rec.ordered = false;
        while (level < L && raw <= opt.eps_levels[level]) {
            rec.t_x[level] = t;
            rec.simultaneous[level] = Y <= opt.c_eq * opt.eps_levels[level] ? 1 : 0;
            ++level;
        }
    }
    rec.steps = k;
    if (level < L) {
        rec.inconclusive = true;
        return rec;
    }
    if (opt.track_y) {
        const double eps = opt.eps_levels.back();
        const double yscale = dt / (c.y * c.y);
        for (; k < opt.max_steps; ++k) {
            if (Y <= eps) {
                rec.t_y = t;
                break;
            }
            const double h = yscale * Y * Y;
            const double raw = Y + a * h / Y + std::sqrt(h) * rng.normal();
            t += h;
            if (raw <= eps) {
                rec.t_y = t;
                break;
            }
            Y = raw;
        }
        rec.steps = k;
    }
    return rec;
}

CardyReport cardy_monte_carlo(const FlowCoupling& c, double dt, std::size_t paths, std::uint64_t seed,
                              const FlowOptions& opt, int workers) {
    if (paths < 2) throw ArgumentError("cardy_monte_carlo: need at least two paths");
    auto recs = map_indexed<FlowRecord>(paths, workers, [&](std::size_t i) {
        RngStream rng(seed, i);
        return simulate_flow(c, dt, rng, opt);
    });
    CardyReport rep;
    rep.exact = (c.D > 1.5 && c.D < 2.0) ? cardy_probability(c.D, c.x, c.y) : 0.0;
    rep.eps = opt.eps_levels;
    rep.inconclusive = 0;
    rep.ordered = true;
    const std::size_t L = opt.eps_levels.size();
    std::vector<std::vector<double>> ind(L);
    for (const auto& r : recs) {
        if (!r.ordered) rep.ordered = false;
        if (r.inconclusive) {
            ++rep.inconclusive;
            continue;
        }
        for (std::size_t l = 0; l < L; ++l) ind[l].push_back(r.simultaneous[l]);
    }
    for (std::size_t l = 0; l < L; ++l) {
        const Estimate e = estimate(ind[l]);
        rep.freq.push_back(e.mean);
        rep.stderr_.push_back(e.stderr_);
    }
    // refinement span: convergence in eps is slow, so the last difference alone understates it
    rep.margin = 0.0;
    for (std::size_t l = 0; l + 1 < L; ++l) rep.margin = std::max(rep.margin, std::fabs(rep.freq[l] - rep.freq[L - 1]));
    rep.pass = rep.ordered && rep.inconclusive == 0 &&
               std::fabs(rep.freq.back() - rep.exact) <= 3.0 * rep.stderr_.back() + rep.margin;
    return rep;
}

LampertiPath lamperti_path(double nu, double y0, double dt, double horizon, RngStream& rng) {
    if (!(dt > 0.0) || dt >= horizon) throw ArgumentError("lamperti_path: need 0 < dt < horizon");
    const long steps = static_cast<long>(std::llround(horizon / dt));
    const double sq = std::sqrt(dt);
    LampertiPath out;
    out.clock.reserve(steps + 1);
    out.clock.push_back(0.0);
    double z = y0, A = 0.0;
    double e_prev = std::exp(2.0 * z);
    for (long k = 1; k <= steps; ++k) {
        const double z_next = z + nu * dt + sq * rng.normal();
        const double e_next = std::exp(2.0 * z_next);
        const double A_next = A + 0.5 * dt * (e_prev + e_next);
        out.clock.push_back(A_next);
        if (!out.value_at_one && A_next >= 1.0) {
            // linear in the clock between the two grid points
            const double w = (1.0 - A) / (A_next - A);
            out.value_at_one = std::exp((1.0 - w) * z + w * z_next);
            break;
        }
        z = z_next;
        A = A_next;
        e_prev = e_next;
    }
    return out;
}

LampertiResult lamperti_check(double nu, double y0, double dt, double horizon, std::size_t paths,
                              std::uint64_t seed, int workers) {
    if (!(nu > -1.0)) throw DomainError("lamperti_check: needs D = 2(nu+1) > 0");
    auto vals = map_indexed<double>(paths, workers, [&](std::size_t i) {
        RngStream rng(seed, i);
        auto p = lamperti_path(nu, y0, dt, horizon, rng);
        return p.value_at_one ? *p.value_at_one : -1.0;
    });
    LampertiResult res{0.0, 0, 0};
    std::vector<double> ok;
    for (double v : vals) {
        if (v < 0.0)
            ++res.inconclusive;
        else
            ok.push_back(v);
    }
    res.used = ok.size();
    if (ok.empty()) return res;
    const BesselSpec spec(2.0 * (nu + 1.0), std::exp(y0));
    std::sort(ok.begin(), ok.end());
    res.ks = ks_from_sorted_cdf(bessel_cdf_sorted(spec, 1.0, ok));
    return res;
}

}  // namespace stochlab
