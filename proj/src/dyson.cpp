#include "stochlab/dyson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "stochlab/bessel.hpp"
#include "stochlab/errors.hpp"
#include "stochlab/special.hpp"
#include "stochlab/stats.hpp"

namespace stochlab {

using std::numbers::pi;
using cplx = std::complex<double>;

bool in_weyl_chamber(const WeylPoint& x) {
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i - 1] < x[i])) return false;
    return true;
}

bool PointConfiguration::is_simple() const {
    auto s = points;
    std::sort(s.begin(), s.end());
    return std::adjacent_find(s.begin(), s.end()) == s.end();
}

std::vector<std::pair<double, int>> PointConfiguration::support() const {
    auto s = points;
    std::sort(s.begin(), s.end());
    std::vector<std::pair<double, int>> out;
    for (double p : s) {
        if (!out.empty() && out.back().first == p)
            ++out.back().second;
        else
            out.emplace_back(p, 1);
    }
    return out;
}

WeylPoint PointConfiguration::to_weyl() const {
    if (!is_simple()) throw DomainError("PointConfiguration: repeated point has no Weyl-chamber form");
    auto s = points;
    std::sort(s.begin(), s.end());
    return s;
}

double vandermonde(const WeylPoint& x) {
    double p = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j) p *= x[j] - x[i];
    return p;
}

cplx vandermonde(const std::vector<cplx>& z) {
    cplx p = 1.0;
    for (std::size_t i = 0; i < z.size(); ++i)
        for (std::size_t j = i + 1; j < z.size(); ++j) p *= z[j] - z[i];
    return p;
}

double km_determinant(double t, const WeylPoint& x, const WeylPoint& y) {
    if (!(t > 0.0)) throw DomainError("km_determinant: t must be positive");
    if (x.size() != y.size()) throw ArgumentError("km_determinant: size mismatch");
    const auto n = static_cast<Eigen::Index>(x.size());
    RealMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = heat_kernel(t, x[j], y[i]);
    return determinant(m);
}

double noncolliding_density(double t, const WeylPoint& x, const WeylPoint& y) {
    if (x.size() != y.size()) throw ArgumentError("noncolliding_density: size mismatch");
    const double hx = vandermonde(x);
    if (hx == 0.0) throw DomainError("noncolliding_density: start on the chamber wall");
    return vandermonde(y) / hx * km_determinant(t, x, y);
}

namespace {

bool ordered(const std::vector<double>& x) {
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i - 1] < x[i])) return false;
    return true;
}

struct DysonStepper {
    double half_beta;
    int max_depth;
    RngStream& rng;
    std::vector<double> drift;

    // Advances X by h with Brownian increments dw; on ordering loss the step is
    // split at a bridge midpoint. Returns false (X, t at the last good state) when
    // the finest step still fails.
    bool step(std::vector<double>& X, double& t, double h, const std::vector<double>& dw, int depth) {
        const std::size_t n = X.size();
        drift.assign(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double f = half_beta / (X[i] - X[j]);
                drift[i] += f;
                drift[j] -= f;
            }
        std::vector<double> prop(n);
        for (std::size_t i = 0; i < n; ++i) prop[i] = X[i] + h * drift[i] + dw[i];
        if (ordered(prop)) {
            X.swap(prop);
            t += h;
            return true;
        }
        if (depth >= max_depth) return false;
        const double s = std::sqrt(0.25 * h);
        std::vector<double> w1(n), w2(n);
        for (std::size_t i = 0; i < n; ++i) {
            w1[i] = 0.5 * dw[i] + s * rng.normal();
            w2[i] = dw[i] - w1[i];
        }
        return step(X, t, 0.5 * h, w1, depth + 1) && step(X, t, 0.5 * h, w2, depth + 1);
    }
};

}  // namespace

ParticlePath simulate_dyson(double beta, const WeylPoint& x, double dt, double horizon, RngStream& rng,
                            const DysonOptions& opt) {
    if (!(beta > 0.0)) throw DomainError("simulate_dyson: beta must be positive");
    if (!(dt > 0.0) || !(horizon > 0.0)) throw ArgumentError("simulate_dyson: dt and horizon must be positive");
    if (x.empty()) throw ArgumentError("simulate_dyson: no particles");
    if (!in_weyl_chamber(x)) throw DomainError("simulate_dyson: start must be strictly ordered");
    const std::size_t n = x.size();
    const long steps = std::lround(horizon / dt);
    const int stride = std::max(1, opt.record_stride);
    const double sq = std::sqrt(dt);

    ParticlePath path;
    std::vector<double> X = x;
    double t = 0.0;
    path.times.push_back(0.0);
    path.values.push_back(X);

    // below beta = 1 collisions are genuine, so ordering loss is reported at once
    DysonStepper stepper{0.5 * beta, beta < 1.0 ? 0 : opt.max_halvings, rng, {}};
    std::vector<double> dw(n);
    for (long k = 1; k <= steps; ++k) {
        for (std::size_t i = 0; i < n; ++i) dw[i] = sq * rng.normal();
        if (!stepper.step(X, t, dt, dw, 0)) {
            path.times.push_back(t);
            path.values.push_back(X);
            if (beta < 1.0) {
                path.collision_at = t;
                path.diagnostic = "collision";
            } else {
                path.aborted = true;
                path.diagnostic = "ordering lost at the minimal step";
            }
            return path;
        }
        t = k * dt;
        if (k % stride == 0 || k == steps) {
            path.times.push_back(t);
            path.values.push_back(X);
        }
    }
    return path;
}

ParticlePath simulate_hermitian_bm(const HermitianBmState& state, double dt, double horizon, RngStream& rng,
                                   int record_stride) {
    const auto n = static_cast<Eigen::Index>(state.x.size());
    if (n < 1) throw ArgumentError("simulate_hermitian_bm: N must be at least 1");
    if (!(dt > 0.0) || !(horizon > 0.0)) throw ArgumentError("simulate_hermitian_bm: dt and horizon must be positive");
    const long steps = std::lround(horizon / dt);
    const int stride = std::max(1, record_stride);
    const double sq = std::sqrt(dt);
    const double sq_half = std::sqrt(0.5 * dt);

    ComplexMatrix h = ComplexMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) h(i, i) = state.x[static_cast<std::size_t>(i)];

    ParticlePath path;
    auto record = [&](double t) {
        const RealVector ev = hermitian_eigenvalues(h);
        for (Eigen::Index i = 0; i < n; ++i)
            if (!std::isfinite(ev(i))) throw NumericError("simulate_hermitian_bm: eigensolve failed", ev(i));
        path.times.push_back(t);
        path.values.emplace_back(ev.data(), ev.data() + n);
        path.diagonal_sum.push_back(h.diagonal().real().sum());
    };
    record(0.0);
    for (long k = 1; k <= steps; ++k) {
        for (Eigen::Index i = 0; i < n; ++i) {
            h(i, i) += sq * rng.normal();
            for (Eigen::Index j = i + 1; j < n; ++j) {
                const double re = sq_half * rng.normal();
                const double im = sq_half * rng.normal();
                h(i, j) += cplx(re, im);
                h(j, i) = std::conj(h(i, j));
            }
        }
        if (k % stride == 0 || k == steps) record(k * dt);
    }
    return path;
}

cplx phi_weight(const PointConfiguration& xi, double u, cplx z) {
    const auto supp = xi.support();
    bool found = false;
    cplx p = 1.0;
    for (const auto& [v, mult] : supp) {
        if (v == u) {
            found = true;
            continue;
        }
        for (int m = 0; m < mult; ++m) p *= 1.0 - (z - u) / (v - u);
    }
    if (!found) throw DomainError("phi_weight: u is not a point of the configuration");
    return p;
}

cplx phi_weight_lattice(double u, cplx z, double rel_tol) {
    if (u != std::round(u)) throw DomainError("phi_weight_lattice: u is not a lattice point");
    const cplx w = z - u;
    const cplx w2 = w * w;
    long L = 16 * (static_cast<long>(std::abs(w)) + 1);
    cplx p = 1.0;
    for (long k = 1; k <= L; ++k) p *= 1.0 - w2 / (double(k) * double(k));

    // Romberg table in 1/L with L doubling
    std::vector<cplx> prev{p};
    for (int level = 1; level <= 14; ++level) {
        for (long k = L + 1; k <= 2 * L; ++k) p *= 1.0 - w2 / (double(k) * double(k));
        L *= 2;
        std::vector<cplx> row{p};
        double f = 1.0;
        for (int j = 1; j <= level; ++j) {
            f *= 2.0;
            row.push_back((f * row[j - 1] - prev[j - 1]) / (f - 1.0));
        }
        const double change = std::abs(row.back() - prev.back());
        if (change <= rel_tol * std::abs(row.back()) || change <= 1e-300) return row.back();
        prev.swap(row);
    }
    throw NumericError("phi_weight_lattice: window extrapolation did not settle", std::abs(prev.back()));
}

ComplexMatrix sample_haar_unitary(int n, RngStream& rng) {
    ComplexMatrix g(n, n);
    const double s = std::sqrt(0.5);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) g(i, j) = cplx(s * rng.normal(), s * rng.normal());
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        const double a = std::abs(r(j, j));
        if (a > 0.0) q.col(j) *= r(j, j) / a;
    }
    return q;
}

HcizRecord hciz_check(const WeylPoint& x, const WeylPoint& y, double sigma2, std::size_t samples, std::uint64_t seed,
                      int workers) {
    if (x.size() != y.size() || x.empty()) throw ArgumentError("hciz_check: size mismatch");
    if (!(sigma2 > 0.0)) throw DomainError("hciz_check: sigma^2 must be positive");
    const int n = static_cast<int>(x.size());
    RealVector lx(n), ly(n);
    for (int i = 0; i < n; ++i) {
        lx(i) = x[static_cast<std::size_t>(i)];
        ly(i) = y[static_cast<std::size_t>(i)];
    }
    const auto vals = map_indexed<double>(samples, workers, [&](std::size_t i) {
        RngStream rng(seed, i);
        const ComplexMatrix u = sample_haar_unitary(n, rng);
        ComplexMatrix d = -(u.adjoint() * ly.asDiagonal() * u);
        d.diagonal() += lx.cast<cplx>();
        return std::exp(-d.squaredNorm() / (2.0 * sigma2));
    });
    const Estimate e = estimate(vals);

    double cn = std::pow(2.0 * pi, 0.5 * n);
    for (int i = 1; i <= n; ++i) cn *= std::tgamma(double(i));
    const double rhs = cn * std::pow(sigma2, 0.5 * n * n) / (vandermonde(x) * vandermonde(y)) *
                       km_determinant(sigma2, x, y);
    return {e.mean, rhs, e.stderr_, samples};
}

AspectComparison compare_aspects(const WeylPoint& x, double t, double dt, std::size_t samples, std::uint64_t seed,
                                 double alpha, int workers) {
    if (!in_weyl_chamber(x)) throw DomainError("compare_aspects: start must be strictly ordered");
    const std::size_t n = x.size();
    constexpr std::uint64_t kMatrixStreams = std::uint64_t{1} << 40;

    DysonOptions opt;
    opt.record_stride = std::numeric_limits<int>::max();
    const auto sde = map_indexed<ParticlePath>(samples, workers, [&](std::size_t i) {
        RngStream rng(seed, i);
        return simulate_dyson(2.0, x, dt, t, rng, opt);
    });
    // matrix BM increments are Gaussian, so one step of length t is exact in law
    const auto mat = map_indexed<std::vector<double>>(samples, workers, [&](std::size_t i) {
        RngStream rng(seed, kMatrixStreams + i);
        return simulate_hermitian_bm({x}, t, t, rng).values.back();
    });

    AspectComparison out;
    out.aborted = 0;
    std::vector<std::vector<double>> a(n), b(n);
    std::vector<double> gaps;
    for (const auto& p : sde) {
        if (p.aborted) {
            ++out.aborted;
            continue;
        }
        const auto& v = p.values.back();
        for (std::size_t k = 0; k < n; ++k) a[k].push_back(v[k]);
        if (n == 2) gaps.push_back((v[1] - v[0]) / std::sqrt(2.0));
    }
    for (const auto& v : mat)
        for (std::size_t k = 0; k < n; ++k) b[k].push_back(v[k]);

    // aborted paths are dropped from the statistics and must stay rare
    out.pass = double(out.aborted) <= 1e-3 * double(samples);
    for (std::size_t k = 0; k < n; ++k) {
        out.ks.push_back(ks_two_sample(a[k], b[k]));
        out.critical.push_back(ks_two_sample_critical(alpha / double(n), a[k].size(), b[k].size()));
        out.pass = out.pass && out.ks.back() < out.critical.back();
    }
    out.gap_ks = std::numeric_limits<double>::quiet_NaN();
    if (n == 2) {
        std::sort(gaps.begin(), gaps.end());
        const BesselSpec spec(3.0, (x[1] - x[0]) / std::sqrt(2.0));
        out.gap_ks = ks_from_sorted_cdf(bessel_cdf_sorted(spec, t, gaps));
        out.pass = out.pass && out.gap_ks < 0.015;
    }
    return out;
}

}  // namespace stochlab
