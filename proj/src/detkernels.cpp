#include "stochlab/detkernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "stochlab/errors.hpp"
#include "stochlab/linalg.hpp"
#include "stochlab/quadrature.hpp"
#include "stochlab/special.hpp"

namespace stochlab {

using std::numbers::pi;
using cplx = std::complex<double>;

namespace {

const QuadratureRule& hermite_rule() {
    static const QuadratureRule r = gauss_hermite(kDefaultHermiteOrder);
    return r;
}

const QuadratureRule& legendre16() {
    static const QuadratureRule r = gauss_legendre(16);
    return r;
}

double time_order_term(double s, double x, double t, double y) {
    return s > t ? heat_kernel(s - t, x, y) : 0.0;
}

cplx heat_kernel_c(double t, cplx a, double b) {
    const cplx d = a - b;
    return std::exp(-d * d / (2.0 * t)) / std::sqrt(2.0 * pi * t);
}

// Composite 16-point rule on [0,1] with panels shrinking geometrically
// toward u = 1, where the lattice integrands concentrate.
template <class F>
cplx integrate_to_one(F&& f) {
    const auto& r = legendre16();
    cplx total = 0.0;
    double lo = 0.0;
    for (int p = 0; p <= 30; ++p) {
        const double hi = p == 30 ? 1.0 : 1.0 - std::ldexp(1.0, -(p + 1));
        const double h = hi - lo;
        cplx part = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) part += r.weights[i] * f(lo + 0.5 * h * (r.node(i) + 1.0));
        total += 0.5 * h * part;
        lo = hi;
    }
    return total;
}

}  // namespace

double kernel_K1(const PointConfiguration& xi, double s, double x, double t, double y) {
    if (!(s > 0.0) || !(t > 0.0)) throw DomainError("kernel_K1: times must be positive");
    if (!xi.is_simple()) throw DomainError("kernel_K1: repeated points need the contour form");
    const auto& gh = hermite_rule();
    const double scale = std::sqrt(2.0 * t);
    const auto& pts = xi.points;
    double total = 0.0;
    for (std::size_t a = 0; a < pts.size(); ++a) {
        const double v = pts[a];
        double avg = 0.0;
        for (std::size_t k = 0; k < gh.size(); ++k) {
            const cplx z(y, scale * gh.node(k));
            cplx phi = 1.0;
            for (std::size_t b = 0; b < pts.size(); ++b)
                if (b != a) phi *= 1.0 - (z - v) / (pts[b] - v);
            avg += gh.weights[k] * phi.real();
        }
        total += heat_kernel(s, x, v) * avg / std::sqrt(pi);
    }
    return total - time_order_term(s, x, t, y);
}

namespace {

struct ContourKernel {
    double center;
    std::vector<double> coef;  // P(c + w) = prod (x' - c - w) = sum coef[k] w^k
    ContourRule rule;

    ContourKernel(const PointConfiguration& xi, const ContourSpec& spec) {
        if (xi.points.empty()) throw ArgumentError("kernel_K2: empty configuration");
        const auto [lo, hi] = std::minmax_element(xi.points.begin(), xi.points.end());
        center = 0.5 * (*lo + *hi);
        const double half = 0.5 * (*hi - *lo);
        const double radius = (1.5 * half + 1.0) * spec.radius_scale;
        rule = trapezoid_circle(spec.points, center, radius);
        coef = {1.0};
        for (double p : xi.points) {
            const double d = p - center;
            std::vector<double> next(coef.size() + 1, 0.0);
            for (std::size_t k = 0; k < coef.size(); ++k) {
                next[k] += d * coef[k];
                next[k + 1] -= coef[k];
            }
            coef.swap(next);
        }
    }

    cplx P(cplx w) const {
        cplx r = 0.0;
        for (std::size_t k = coef.size(); k-- > 0;) r = r * w + coef[k];
        return r;
    }

    // (P(zeta) - P(z)) / (zeta - z) without the removable singularity
    cplx quotient(cplx z, cplx zeta) const {
        cplx total = 0.0;
        for (std::size_t k = 1; k < coef.size(); ++k) {
            cplx sum = 0.0, zp = 1.0;
            // sum_{j=0}^{k-1} zeta^j z^{k-1-j}, Horner in zeta / z
            for (std::size_t j = 0; j < k; ++j) {
                sum = sum * zeta + zp;
                zp *= z;
            }
            // sum now equals sum_j zeta^{k-1-j} z^j
            total += coef[k] * sum;
        }
        return total;
    }

    double eval(double s, double x, double t, double y) const {
        const auto& gh = hermite_rule();
        const double scale = std::sqrt(2.0 * t);
        cplx total = 0.0;
        for (std::size_t m = 0; m < rule.nodes.size(); ++m) {
            const cplx z = rule.nodes[m];
            const cplx w = z - center;
            const cplx pz = P(w);
            cplx inner = 0.0;
            for (std::size_t k = 0; k < gh.size(); ++k) {
                const cplx zeta = cplx(y, scale * gh.node(k)) - center;
                inner += gh.weights[k] * quotient(w, zeta);
            }
            total += rule.weights[m] * heat_kernel_c(s, z, x) * inner / (pz * std::sqrt(pi));
        }
        return total.real();
    }
};

}  // namespace

double kernel_K2(const PointConfiguration& xi, double s, double x, double t, double y, const ContourSpec& c) {
    if (!(s > 0.0) || !(t > 0.0)) throw DomainError("kernel_K2: times must be positive");
    const ContourKernel k(xi, c);
    return k.eval(s, x, t, y) - time_order_term(s, x, t, y);
}

double sine_kernel(double x, double y) {
    const double d = pi * (y - x);
    if (std::fabs(d) < 1e-8) return 1.0 - d * d / 6.0;
    return std::sin(d) / d;
}

double extended_sine_kernel(double s, double x, double t, double y) {
    if (s == t) return sine_kernel(x, y);
    const double d = y - x;
    const double c = 0.5 * pi * pi * (t - s);
    const double head = integrate_to_one([&](double u) { return cplx(std::exp(c * u * u) * std::cos(pi * u * d)); }).real();
    // for t < s the tail integral over [1, inf) is the full Gaussian integral minus [0,1]
    return s < t ? head : head - heat_kernel(s - t, x, y);
}

namespace {

double lattice_tail(double s, double t, int n_max) {
    const double amp = std::max(1.0, std::exp(0.5 * pi * pi * (t - s)));
    const double n0 = n_max + 1.0;
    const double ratio = std::exp(-4.0 * pi * pi * s * n0);
    if (ratio >= 1.0) return std::numeric_limits<double>::infinity();
    return 2.0 * amp * std::exp(-2.0 * pi * pi * s * n0 * (n0 - 1.0)) / (1.0 - ratio);
}

int lattice_truncation(double s, double t) {
    for (int n = 1; n <= 100000; ++n)
        if (lattice_tail(s, t, n) < 1e-15) return n;
    throw NumericError("lattice_kernel: truncation bound never drops below tolerance", lattice_tail(s, t, 100000));
}

}  // namespace

LatticeKernelValue lattice_correction(double s, double x, double t, double y, int n_max, LatticeForm form) {
    if (!(s > 0.0) || !(t > 0.0)) throw DomainError("lattice_kernel: times must be positive");
    if (n_max < 0) n_max = lattice_truncation(s, t);
    if (n_max < 1) throw ArgumentError("lattice_kernel: n_max must be at least 1");
    const double bound = lattice_tail(s, t, n_max);
    if (!(bound <= 1e-8)) throw NumericError("lattice_kernel: truncation not converged", bound);
    const double d = y - x;
    const double a = 2.0 * pi * pi * s;
    double value = 0.0;
    if (form == LatticeForm::series) {
        const double c = 0.5 * pi * pi * (t - s);
        for (int n = 1; n <= n_max; ++n) {
            // the n and -n terms are complex conjugates
            const cplx integral = integrate_to_one([&](double u) {
                const cplx e1 = std::exp(cplx(c * u * u + a * n * (u - n), pi * u * d));
                const cplx e2 = std::exp(cplx(c * u * u - a * n * (u + n), -pi * u * d));
                return 0.5 * (e1 + e2);
            });
            value += 2.0 * (std::polar(1.0, 2.0 * pi * x * n) * integral).real();
        }
    } else {
        // (1/2pi) int_{|k|<=pi} e^{k^2(t-s)/2 + ik(y-x)} (theta3(x - iks, 2 pi i s) - 1) dk,
        // the theta sum taken over the same |n| <= n_max with exponents combined
        auto integrand = [&](double k) {
            cplx th = 0.0;
            for (int n = 1; n <= n_max; ++n) {
                th += std::exp(cplx(2.0 * pi * k * s * n - a * n * n, 2.0 * pi * x * n));
                th += std::exp(cplx(-2.0 * pi * k * s * n - a * n * n, -2.0 * pi * x * n));
            }
            return std::exp(cplx(0.5 * k * k * (t - s), k * d)) * th;
        };
        // symmetric grading toward both ends of [-pi, pi]
        const cplx right = integrate_to_one([&](double u) { return integrand(pi * u); });
        const cplx left = integrate_to_one([&](double u) { return integrand(-pi * u); });
        value = ((right + left) * pi / (2.0 * pi)).real();
    }
    return {value, n_max, bound};
}

LatticeKernelValue lattice_kernel(double s, double x, double t, double y, int n_max, LatticeForm form) {
    auto r = lattice_correction(s, x, t, y, n_max, form);
    r.value += extended_sine_kernel(s, x, t, y);
    return r;
}

CorrelationKernel make_kernel_K1(const PointConfiguration& xi) {
    if (!xi.is_simple()) throw DomainError("kernel_K1: repeated points need the contour form");
    return {[xi](double s, double x, double t, double y) { return kernel_K1(xi, s, x, t, y); }, false,
            KernelKind::K1};
}

CorrelationKernel make_kernel_K2(const PointConfiguration& xi, const ContourSpec& c) {
    auto k = std::make_shared<ContourKernel>(xi, c);
    return {[k](double s, double x, double t, double y) {
                if (!(s > 0.0) || !(t > 0.0)) throw DomainError("kernel_K2: times must be positive");
                return k->eval(s, x, t, y) - time_order_term(s, x, t, y);
            },
            false, KernelKind::K2};
}

CorrelationKernel make_sine_kernel() {
    return {[](double, double x, double, double y) { return sine_kernel(x, y); }, true, KernelKind::sine};
}

CorrelationKernel make_extended_sine_kernel() {
    return {extended_sine_kernel, false, KernelKind::extended_sine};
}

CorrelationKernel make_lattice_kernel() {
    return {[](double s, double x, double t, double y) { return lattice_kernel(s, x, t, y).value; }, false,
            KernelKind::lattice};
}

double correlation_function(const CorrelationKernel& k, const std::vector<SpaceTimePoint>& pts) {
    const auto n = static_cast<Eigen::Index>(pts.size());
    if (n == 0) return 1.0;
    RealMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = k(pts[i].t, pts[i].x, pts[j].t, pts[j].x);
    return determinant(m);
}

SpaceTimeGrid default_grid(const std::vector<double>& times, double support_radius) {
    if (times.empty()) throw ArgumentError("default_grid: no times");
    const double tmax = *std::max_element(times.begin(), times.end());
    SpaceTimeGrid g;
    g.times = times;
    g.L = std::max(5.0 * std::sqrt(tmax), support_radius + 5.0 * std::sqrt(tmax));
    return g;
}

double fredholm_generating(const CorrelationKernel& k, const SpaceTimeGrid& grid, const std::vector<TestFunction>& chi) {
    if (chi.size() != grid.times.size()) throw ArgumentError("fredholm_generating: one test function per time");
    if (!(grid.L > 0.0)) throw ArgumentError("fredholm_generating: window must be positive");
    for (const auto& c : chi)
        if (c.lo < -grid.L || c.hi > grid.L) throw ArgumentError("fredholm_generating: test function exceeds the window");

    std::vector<double> edges{-grid.L};
    for (double b : grid.breakpoints)
        if (b > -grid.L && b < grid.L) edges.push_back(b);
    edges.push_back(grid.L);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    std::vector<double> nodes, weights;
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const auto r = gauss_legendre(grid.order, edges[p], edges[p + 1]);
        for (std::size_t i = 0; i < r.size(); ++i) {
            nodes.push_back(r.node(i));
            weights.push_back(r.weights[i]);
        }
    }
    const std::size_t q = nodes.size();
    const std::size_t m = grid.times.size();
    const auto dim = static_cast<Eigen::Index>(q * m);
    RealMatrix a = RealMatrix::Identity(dim, dim);
    for (std::size_t tb = 0; tb < m; ++tb) {
        std::vector<double> cw(q);
        for (std::size_t l = 0; l < q; ++l) {
            const double y = nodes[l];
            cw[l] = (y >= chi[tb].lo && y <= chi[tb].hi) ? chi[tb].chi(y) * weights[l] : 0.0;
        }
        for (std::size_t ta = 0; ta < m; ++ta)
            for (std::size_t l = 0; l < q; ++l) {
                if (cw[l] == 0.0) continue;
                for (std::size_t kk = 0; kk < q; ++kk)
                    a(static_cast<Eigen::Index>(ta * q + kk), static_cast<Eigen::Index>(tb * q + l)) +=
                        k(grid.times[ta], nodes[kk], grid.times[tb], nodes[l]) * cw[l];
            }
    }
    return determinant(a);
}

ConditionFunctionals condition_functionals(const PointConfiguration& xi, double L, double alpha, double a) {
    if (!(L > 0.0)) throw ArgumentError("condition_functionals: L must be positive");
    if (!(alpha > 1.0 && alpha < 2.0)) throw ArgumentError("condition_functionals: alpha must lie in (1,2)");
    ConditionFunctionals r{0.0, 0.0, 0.0};
    double pa = 0.0;
    for (double x : xi.points) {
        if (x != 0.0 && std::fabs(x) <= L) {
            r.M += 1.0 / x;
            pa += std::pow(std::fabs(x), -alpha);
        }
        const double v = x * x - a * a;
        if (v != 0.0 && std::fabs(v) <= L) r.M1_shifted += 1.0 / std::fabs(v);
    }
    r.M_alpha = std::pow(pa, 1.0 / alpha);
    return r;
}

ConditionFunctionals condition_functionals_lattice(double L, double alpha, double a) {
    const double reach = std::max(L, std::sqrt(L + a * a));
    const long R = static_cast<long>(std::floor(reach));
    PointConfiguration window;
    window.points.reserve(static_cast<std::size_t>(2 * R + 1));
    for (long k = -R; k <= R; ++k) window.points.push_back(static_cast<double>(k));
    return condition_functionals(window, L, alpha, a);
}

}  // namespace stochlab
