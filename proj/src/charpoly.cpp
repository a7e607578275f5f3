#include "stochlab/charpoly.hpp"

#include <algorithm>
#include <cmath>

#include "stochlab/errors.hpp"
#include "stochlab/linalg.hpp"
#include "stochlab/special.hpp"
#include "stochlab/stats.hpp"

namespace stochlab {

using cplx = std::complex<double>;

GueSpec::GueSpec(int n, double s2) : N(n), sigma2(s2) {
    if (N < 1) throw DomainError("GueSpec: N must be at least 1");
    if (!(sigma2 > 0.0)) throw DomainError("GueSpec: sigma^2 must be positive");
}

WeylPoint sample_gue(const GueSpec& spec, RngStream& rng) {
    const int n = spec.N;
    const double sd = std::sqrt(spec.sigma2);
    const double sh = std::sqrt(0.5 * spec.sigma2);
    ComplexMatrix h(n, n);
    for (int i = 0; i < n; ++i) {
        h(i, i) = sd * rng.normal();
        for (int j = i + 1; j < n; ++j) {
            const double re = sh * rng.normal();
            const double im = sh * rng.normal();
            h(i, j) = cplx(re, im);
            h(j, i) = cplx(re, -im);
        }
    }
    const RealVector ev = hermitian_eigenvalues(h);
    for (int i = 0; i < n; ++i)
        if (!std::isfinite(ev(i))) throw NumericError("sample_gue: eigensolve failed", ev(i));
    return WeylPoint(ev.data(), ev.data() + n);
}

ComplexEstimate mgue_mc(const std::vector<cplx>& alpha, const GueSpec& spec, std::size_t samples, std::uint64_t seed,
                        int workers) {
    if (samples < 1) throw ArgumentError("mgue_mc: need at least one sample");
    const auto vals = map_indexed<cplx>(samples, workers, [&](std::size_t i) {
        RngStream rng(seed, i);
        const auto lam = sample_gue(spec, rng);
        cplx p = 1.0;
        for (const cplx& a : alpha)
            for (double l : lam) p *= a - l;
        return p;
    });
    std::vector<double> re(samples), im(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        re[i] = vals[i].real();
        im[i] = vals[i].imag();
    }
    const auto er = estimate(re), ei = estimate(im);
    return {cplx(er.mean, ei.mean), er.stderr_, ei.stderr_, samples};
}

namespace {

// (sigma2/2)^{i/2} H_i(alpha / sqrt(2 sigma2)), the monic Hermite polynomial of variance sigma2
cplx hermite_hat(int i, cplx alpha, double sigma2) {
    return std::pow(0.5 * sigma2, 0.5 * i) * hermite(i, alpha / std::sqrt(2.0 * sigma2));
}

void require_distinct(const std::vector<cplx>& alpha, const char* who) {
    for (std::size_t i = 0; i < alpha.size(); ++i)
        for (std::size_t j = i + 1; j < alpha.size(); ++j)
            if (alpha[i] == alpha[j]) throw DomainError(std::string(who) + ": alpha entries must be distinct");
}

}  // namespace

std::complex<double> mgue_det(const std::vector<cplx>& alpha, const GueSpec& spec) {
    if (alpha.empty() || alpha.size() % 2 != 0) throw ArgumentError("mgue_det: alpha must have even length");
    require_distinct(alpha, "mgue_det");
    const auto m = static_cast<Eigen::Index>(alpha.size());
    ComplexMatrix a(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            a(i, j) = hermite_hat(spec.N + static_cast<int>(i), alpha[static_cast<std::size_t>(j)], spec.sigma2);
    return determinant(a) / vandermonde(alpha);
}

double log_gamma_prefactor(int N, int n) {
    double g = -0.5 * n * (2.0 * N + 2.0 * n - 1.0) * std::log(2.0);
    for (int i = 2; i <= n; ++i) g += std::lgamma(N + n - i + 1.0) - std::lgamma(N + n);
    return g;
}

std::complex<double> mgue_det_block(const std::vector<cplx>& alpha, const GueSpec& spec) {
    if (alpha.empty() || alpha.size() % 2 != 0) throw ArgumentError("mgue_det_block: alpha must have even length");
    require_distinct(alpha, "mgue_det_block");
    const int n = static_cast<int>(alpha.size() / 2);
    const int N = spec.N;
    const double sc = std::sqrt(2.0 * spec.sigma2);
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const cplx a = alpha[static_cast<std::size_t>(i)];
            const cplx b = alpha[static_cast<std::size_t>(n + j)];
            const cplx minor = hermite(N + n, a / sc) * hermite(N + n - 1, b / sc) -
                               hermite(N + n, b / sc) * hermite(N + n - 1, a / sc);
            m(i, j) = minor / (a - b);
        }
    const std::vector<cplx> first(alpha.begin(), alpha.begin() + n), second(alpha.begin() + n, alpha.end());
    const double pref = std::exp(log_gamma_prefactor(N, n) + 0.5 * n * (2.0 * N + n) * std::log(spec.sigma2));
    return pref * determinant(m) / (vandermonde(first) * vandermonde(second));
}

IshikawaSides ishikawa_sides(const std::vector<cplx>& x, const std::vector<cplx>& y, const std::vector<cplx>& a,
                             const std::vector<cplx>& b) {
    const std::size_t n = x.size();
    if (y.size() != n || a.size() != n || b.size() != n || n < 1) throw ArgumentError("ishikawa: size mismatch");
    const auto N = static_cast<Eigen::Index>(n);
    ComplexMatrix left(N, N);
    cplx denom = 1.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const cplx d = y[j] - x[i];
            if (d == 0.0) throw DomainError("ishikawa: y_j - x_i vanishes");
            left(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (b[j] - a[i]) / d;
            denom *= d;
        }
    ComplexMatrix big(2 * N, 2 * N);
    for (std::size_t i = 0; i < n; ++i) {
        cplx px = 1.0, py = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
            const auto r = static_cast<Eigen::Index>(i), c = static_cast<Eigen::Index>(k);
            big(r, c) = px;
            big(r, N + c) = a[i] * px;
            big(N + r, c) = py;
            big(N + r, N + c) = b[i] * py;
            px *= x[i];
            py *= y[i];
        }
    }
    const double sign = ((n * (n - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
    return {determinant(left), sign / denom * determinant(big)};
}

double ishikawa_check(int n, RngStream& rng) {
    auto draw = [&] {
        std::vector<cplx> v(static_cast<std::size_t>(n));
        for (auto& z : v) z = cplx(rng.normal(), rng.normal());
        return v;
    };
    const auto x = draw(), y = draw(), a = draw(), b = draw();
    const auto s = ishikawa_sides(x, y, a, b);
    return std::abs(s.lhs - s.rhs);
}

TimeshiftReport timeshift_equivalence_check(int N, double sigma2, double t1, double t2, double dt,
                                            std::size_t samples, std::uint64_t seed, double alpha, int workers) {
    if (N < 1 || N > 3) throw ArgumentError("timeshift_equivalence_check: N must be 1, 2 or 3");
    if (!(sigma2 > 0.0)) throw DomainError("timeshift_equivalence_check: sigma^2 must be positive");
    if (!(t1 > 0.0)) throw ArgumentError("timeshift_equivalence_check: t1 must be positive");
    const bool two_times = t2 > t1;
    const auto n = static_cast<std::size_t>(N);
    constexpr std::uint64_t kOriginStreams = std::uint64_t{1} << 40;

    // side A: Dyson SDE from a GUE(sigma2) start
    const long k1 = std::lround(t1 / dt);
    DysonOptions opt;
    opt.record_stride = static_cast<int>(k1);
    const double horizon = two_times ? t2 : t1;
    const auto side_a = map_indexed<std::vector<double>>(samples, workers, [&](std::size_t i) {
        RngStream rng(seed, i);
        const auto x0 = sample_gue({N, sigma2}, rng);
        const auto p = simulate_dyson(2.0, x0, dt, horizon, rng, opt);
        if (p.aborted) return std::vector<double>{};
        std::vector<double> out = p.values[1];
        if (two_times) out.insert(out.end(), p.values.back().begin(), p.values.back().end());
        return out;
    });
    // side B: from the origin, GUE(t1 + sigma2), then a matrix BM increment to t2
    const auto side_b = map_indexed<std::vector<double>>(samples, workers, [&](std::size_t i) {
        RngStream rng(seed, kOriginStreams + i);
        const auto x1 = sample_gue({N, t1 + sigma2}, rng);
        std::vector<double> out = x1;
        if (two_times) {
            const auto q = simulate_hermitian_bm({x1}, t2 - t1, t2 - t1, rng);
            out.insert(out.end(), q.values.back().begin(), q.values.back().end());
        }
        return out;
    });

    TimeshiftReport rep;
    rep.aborted = 0;
    const std::size_t width = two_times ? 2 * n : n;
    std::vector<std::vector<double>> a(width + (two_times ? n : 0)), b(a.size());
    for (const auto& v : side_a) {
        if (v.empty()) {
            ++rep.aborted;
            continue;
        }
        for (std::size_t k = 0; k < width; ++k) a[k].push_back(v[k]);
        if (two_times)
            for (std::size_t k = 0; k < n; ++k) a[width + k].push_back(v[n + k] - v[k]);
    }
    for (const auto& v : side_b) {
        for (std::size_t k = 0; k < width; ++k) b[k].push_back(v[k]);
        if (two_times)
            for (std::size_t k = 0; k < n; ++k) b[width + k].push_back(v[n + k] - v[k]);
    }
    for (std::size_t k = 0; k < n; ++k) rep.labels.push_back("t1 lambda" + std::to_string(k + 1));
    if (two_times) {
        for (std::size_t k = 0; k < n; ++k) rep.labels.push_back("t2 lambda" + std::to_string(k + 1));
        for (std::size_t k = 0; k < n; ++k) rep.labels.push_back("increment lambda" + std::to_string(k + 1));
    }
    rep.pass = double(rep.aborted) <= 1e-3 * double(samples);
    const double level = alpha / double(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        rep.ks.push_back(ks_two_sample(a[k], b[k]));
        rep.critical.push_back(ks_two_sample_critical(level, a[k].size(), b[k].size()));
        rep.pass = rep.pass && rep.ks.back() < rep.critical.back();
    }
    return rep;
}

}  // namespace stochlab
