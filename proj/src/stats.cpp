#include "stochlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "stochlab/errors.hpp"

namespace stochlab {

Estimate estimate(const std::vector<double>& xs) {
    Estimate e;
    e.n = xs.size();
    if (xs.empty()) return e;
    double mean = 0.0, m2 = 0.0;
    std::size_t k = 0;
    for (double x : xs) {
        ++k;
        const double d = x - mean;
        mean += d / static_cast<double>(k);
        m2 += d * (x - mean);
    }
    e.mean = mean;
    if (k > 1) e.stderr_ = std::sqrt(m2 / static_cast<double>(k - 1) / static_cast<double>(k));
    return e;
}

double ks_one_sample(std::vector<double> xs, const std::function<double(double)>& cdf) {
    if (xs.empty()) throw ArgumentError("ks_one_sample: empty sample");
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    return d;
}

double ks_from_sorted_cdf(const std::vector<double>& f) {
    if (f.empty()) throw ArgumentError("ks_from_sorted_cdf: empty sample");
    const double n = static_cast<double>(f.size());
    double d = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) d = std::max({d, (i + 1) / n - f[i], f[i] - i / n});
    return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw ArgumentError("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= v) ++i;
        while (j < b.size() && b[j] <= v) ++j;
        d = std::max(d, std::fabs(i / na - j / nb));
    }
    return d;
}

double kolmogorov_q(double lambda) {
    if (lambda < 0.2) return 1.0;
    double sum = 0.0;
    for (int k = 1; k < 200; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += (k % 2 ? 1.0 : -1.0) * term;
        if (term < 1e-18) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_two_sample_pvalue(double d, std::size_t n, std::size_t m) {
    const double ne = static_cast<double>(n) * m / static_cast<double>(n + m);
    const double s = std::sqrt(ne);
    return kolmogorov_q((s + 0.12 + 0.11 / s) * d);
}

double ks_two_sample_critical(double alpha, std::size_t n, std::size_t m) {
    const double c = std::sqrt(-0.5 * std::log(0.5 * alpha));
    return c * std::sqrt(static_cast<double>(n + m) / (static_cast<double>(n) * m));
}

namespace {

std::vector<double> pooled_cuts(std::vector<double> v, int grid) {
    std::sort(v.begin(), v.end());
    std::vector<double> cuts(grid);
    for (int g = 0; g < grid; ++g) {
        std::size_t idx = static_cast<std::size_t>((g + 0.5) / grid * static_cast<double>(v.size()));
        cuts[g] = v[std::min(idx, v.size() - 1)];
    }
    return cuts;
}

// cumulative counts of points with x <= cx[i] and y <= cy[j]
std::vector<double> lower_left(const std::vector<double>& xs, const std::vector<double>& ys,
                               const std::vector<double>& cx, const std::vector<double>& cy) {
    const int g = static_cast<int>(cx.size());
    std::vector<double> cells((g + 1) * (g + 1), 0.0);
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const int i = static_cast<int>(std::lower_bound(cx.begin(), cx.end(), xs[k]) - cx.begin());
        const int j = static_cast<int>(std::lower_bound(cy.begin(), cy.end(), ys[k]) - cy.begin());
        cells[i * (g + 1) + j] += 1.0;
    }
    std::vector<double> cum((g + 1) * (g + 1), 0.0);
    for (int i = 0; i <= g; ++i)
        for (int j = 0; j <= g; ++j) {
            double v = cells[i * (g + 1) + j];
            if (i > 0) v += cum[(i - 1) * (g + 1) + j];
            if (j > 0) v += cum[i * (g + 1) + j - 1];
            if (i > 0 && j > 0) v -= cum[(i - 1) * (g + 1) + j - 1];
            cum[i * (g + 1) + j] = v;
        }
    const double n = static_cast<double>(xs.size());
    for (double& v : cum) v /= n;
    return cum;
}

}  // namespace

double ks_two_sample_2d(const std::vector<double>& ax, const std::vector<double>& ay,
                        const std::vector<double>& bx, const std::vector<double>& by, int grid) {
    if (ax.size() != ay.size() || bx.size() != by.size() || ax.empty() || bx.empty())
        throw ArgumentError("ks_two_sample_2d: mismatched or empty samples");
    std::vector<double> px(ax), py(ay);
    px.insert(px.end(), bx.begin(), bx.end());
    py.insert(py.end(), by.begin(), by.end());
    const auto cx = pooled_cuts(px, grid), cy = pooled_cuts(py, grid);
    const auto ca = lower_left(ax, ay, cx, cy), cb = lower_left(bx, by, cx, cy);
    const int g = grid;
    auto at = [g](const std::vector<double>& c, int i, int j) { return c[i * (g + 1) + j]; };
    double d = 0.0;
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j) {
            // the four quadrants around the corner (cx[i], cy[j])
            const double la = at(ca, i, j), lb = at(cb, i, j);
            const double xa = at(ca, i, g), xb = at(cb, i, g);
            const double ya = at(ca, g, j), yb = at(cb, g, j);
            const double q[4] = {la - lb, (xa - la) - (xb - lb), (ya - la) - (yb - lb),
                                 (1 - xa - ya + la) - (1 - xb - yb + lb)};
            for (double v : q) d = std::max(d, std::fabs(v));
        }
    return d;
}

int default_workers() {
    if (const char* env = std::getenv("STOCHLAB_WORKERS")) {
        const int w = std::atoi(env);
        if (w >= 1) return w;
    }
    return 1;
}

}  // namespace stochlab
