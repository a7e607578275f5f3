#include "stochlab/extremes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stochlab/errors.hpp"
#include "stochlab/linalg.hpp"
#include "stochlab/quadrature.hpp"
#include "stochlab/special.hpp"
#include "stochlab/stats.hpp"

namespace stochlab {

using std::numbers::pi;

namespace {

constexpr double kTailTol = 1e-16;
constexpr int kMaxTerms = 100000;

// |H_k(x)| <= A_k(|x|), the Hermite polynomial with all coefficients made positive
double hermite_abs(int k, double x) {
    double sum = 0.0;
    double c = std::ldexp(1.0, k);  // leading coefficient 2^k
    for (int m = 0; 2 * m <= k; ++m) {
        sum += c * std::pow(x, k - 2 * m);
        // next coefficient: k!/(m!(k-2m)!) (2)^{k-2m}
        c = c * (k - 2 * m) * (k - 2 * m - 1) / (4.0 * (m + 1));
    }
    return sum;
}

// Bound on sum_{|n| >= m} A_k(sqrt2 n h) e^{-2 n^2 h^2} by the ratio test.
double tail_bound(int k, double h, int m) {
    const double q = std::pow((m + 1.0) / m, k) * std::exp(-2.0 * h * h * (2.0 * m + 1.0));
    if (q >= 1.0) return std::numeric_limits<double>::infinity();
    const double g = hermite_abs(k, std::sqrt(2.0) * m * h) * std::exp(-2.0 * m * m * h * h);
    return 2.0 * g / (1.0 - q);
}

int pick_truncation(int k, double h, double scale) {
    for (int n = 1; n < kMaxTerms; ++n)
        if (tail_bound(k, h, n + 1) <= kTailTol * scale) return n;
    throw NumericError("max_cdf: h below the series threshold", tail_bound(k, h, kMaxTerms));
}

double hermite_sum(int k, double h, int n_max) {
    // symmetric in n for even k
    double s = hermite(k, 0.0);
    for (int n = n_max; n >= 1; --n) s += 2.0 * hermite(k, std::sqrt(2.0) * n * h) * std::exp(-2.0 * n * n * h * h);
    return s;
}

double clamp_probability(double v, const char* who) {
    if (v < -1e-12 || v > 1.0 + 1e-12) throw NumericError(std::string(who) + ": value outside [0,1]", v);
    return std::clamp(v, 0.0, 1.0);
}

}  // namespace

SeriesValue max_cdf_h1(double h, int n_max) {
    if (!(h > 0.0)) throw DomainError("max_cdf_h1: h must be positive");
    if (n_max < 0) n_max = pick_truncation(2, h, 1.0);
    const double bound = tail_bound(2, h, n_max + 1);
    if (!(bound <= 1e-12)) throw NumericError("max_cdf_h1: truncation bound too large", bound);
    const double v = -0.5 * hermite_sum(2, h, n_max);
    return {clamp_probability(v, "max_cdf_h1"), n_max, bound};
}

double max_density_h1(double h) {
    if (!(h > 0.0)) throw DomainError("max_density_h1: h must be positive");
    const int n_max = pick_truncation(4, h, 1.0);
    double s = 0.0;
    for (int n = n_max; n >= 1; --n) {
        const double a = n * n * h * h;
        s += 2.0 * (-12.0 * n * n * h + 16.0 * n * n * a * h) * std::exp(-2.0 * a);
    }
    return s;
}

SeriesValue max_cdf_hN(int N, double h, int n_max) {
    if (N < 1) throw DomainError("max_cdf_hN: N must be at least 1");
    if (!(h > 0.0)) throw DomainError("max_cdf_hN: h must be positive");
    const int top = 4 * N - 2;
    if (n_max < 0) {
        // entries reach the size of sum_n A_top(sqrt2 n h) e^{-2n^2h^2}
        n_max = pick_truncation(top, h, 1.0);
        double scale = 0.0;
        for (int n = 0; n <= n_max; ++n)
            scale += hermite_abs(top, std::sqrt(2.0) * n * h) * std::exp(-2.0 * n * n * h * h);
        n_max = pick_truncation(top, h, std::max(1.0, scale));
    }
    double bound = 0.0;
    RealMatrix m(N, N);
    for (int i = 1; i <= N; ++i)
        for (int j = 1; j <= N; ++j) {
            const int k = 2 * (i + j - 1);
            m(i - 1, j - 1) = hermite_sum(k, h, n_max);
            bound = std::max(bound, tail_bound(k, h, n_max + 1));
        }
    double log_pref = -double(N) * N * std::log(2.0);
    for (int i = 1; i <= N; ++i) log_pref -= std::lgamma(2.0 * i);
    const double sign = (N % 2 == 0) ? 1.0 : -1.0;
    const double v = sign * std::exp(log_pref) * determinant(m);
    // entry tail bound carried to the value through the prefactor only
    return {clamp_probability(v, "max_cdf_hN"), n_max, bound * std::exp(log_pref)};
}

double moment_h1(double s) {
    if (!(s > 0.0)) throw DomainError("moment_h1: s must be positive");
    return 2.0 * std::pow(0.5 * pi, 0.5 * s) * xi_moment_function(s);
}

double moment_h1_stieltjes(double s) {
    if (!(s > 0.0)) throw DomainError("moment_h1_stieltjes: s must be positive");
    // F(h) < 1e-40 below h = 0.2, so 1 - F is 1 to double precision there
    const double lo = 0.2, hi = 9.0;
    const double head = std::pow(lo, s);
    static const auto unit = gauss_legendre(32);
    const double body = integrate_panels(
        [&](double h) { return s * std::pow(h, s - 1.0) * (1.0 - max_cdf_h1(h).value); }, lo, hi, 64, unit);
    return head + body;
}

BridgePath simulate_bessel_bridge(double dt, RngStream& rng) {
    if (!(dt > 0.0) || dt > 1.0) throw ArgumentError("simulate_bessel_bridge: dt must lie in (0,1]");
    const long n = std::lround(1.0 / dt);
    if (std::fabs(n * dt - 1.0) > 1e-9) throw ArgumentError("simulate_bessel_bridge: dt must divide 1");
    const double sq = std::sqrt(1.0 / n);
    BridgePath p;
    p.times.resize(static_cast<std::size_t>(n + 1));
    p.values.assign(static_cast<std::size_t>(n + 1), 0.0);
    std::vector<double> sumsq(static_cast<std::size_t>(n + 1), 0.0);
    std::vector<double> w(static_cast<std::size_t>(n + 1));
    for (int c = 0; c < 3; ++c) {
        w[0] = 0.0;
        for (long k = 1; k <= n; ++k) w[k] = w[k - 1] + sq * rng.normal();
        const double end = w[n];
        for (long k = 1; k < n; ++k) {
            const double b = w[k] - (double(k) / n) * end;
            sumsq[k] += b * b;
        }
    }
    for (long k = 0; k <= n; ++k) {
        p.times[k] = double(k) / n;
        p.values[k] = std::sqrt(sumsq[k]);
    }
    p.values[0] = 0.0;
    p.values[n] = 0.0;
    return p;
}

double bridge_max(double dt, RngStream& rng) {
    const auto p = simulate_bessel_bridge(dt, rng);
    return *std::max_element(p.values.begin(), p.values.end());
}

std::vector<double> bridge_max_samples(double dt, std::size_t samples, std::uint64_t seed, int workers) {
    return map_indexed<double>(samples, workers, [&](std::size_t i) {
        RngStream rng(seed, i);
        return bridge_max(dt, rng);
    });
}

std::vector<BridgeCdfRow> bridge_cdf_table(const std::vector<double>& hs, const std::vector<double>& maxima, double dt) {
    std::vector<BridgeCdfRow> rows;
    const double n = static_cast<double>(maxima.size());
    for (double h : hs) {
        const double k = static_cast<double>(std::count_if(maxima.begin(), maxima.end(), [h](double m) { return m <= h; }));
        const double p = k / n;
        BridgeCdfRow r;
        r.h = h;
        r.exact = max_cdf_h1(h).value;
        r.mc = p;
        r.stderr_ = std::sqrt(p * (1.0 - p) / n);
        r.bias = kGridMaxShift * std::sqrt(dt) * max_density_h1(h);
        r.pass = std::fabs(r.mc - r.exact) <= 3.0 * r.stderr_ + r.bias;
        rows.push_back(r);
    }
    return rows;
}

}  // namespace stochlab
