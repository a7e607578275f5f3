#include "commands.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <variant>

#include "CLI11.hpp"
#include "stochlab/bessel.hpp"
#include "stochlab/charpoly.hpp"
#include "stochlab/detkernels.hpp"
#include "stochlab/dyson.hpp"
#include "stochlab/errors.hpp"
#include "stochlab/extremes.hpp"
#include "stochlab/io.hpp"
#include "stochlab/lerw.hpp"
#include "stochlab/quadrature.hpp"
#include "stochlab/sle.hpp"
#include "stochlab/special.hpp"
#include "stochlab/stats.hpp"

namespace stochlab::cli {
namespace {

using cplx = std::complex<double>;
using std::numbers::pi;

// ---------------------------------------------------------------------------
// typed parameter map bound to CLI11 options

using Value = std::variant<bool, long long, double, std::string, std::vector<double>>;

class Params {
public:
    explicit Params(CLI::App* app) : app_(app) {}

    void real(const std::string& name, double def, const std::string& help) { bind(name, def, help); }
    void integer(const std::string& name, long long def, const std::string& help) { bind(name, def, help); }
    void text(const std::string& name, std::string def, const std::string& help) { bind(name, std::move(def), help); }
    void reals(const std::string& name, std::vector<double> def, const std::string& help) {
        bind(name, std::move(def), help)->delimiter(',');
    }
    void flag(const std::string& name, const std::string& help) {
        app_->add_flag("--" + name, std::get<bool>(slot(name, false)), help);
    }

    double d(const std::string& name) const { return std::get<double>(get(name)); }
    long long i(const std::string& name) const { return std::get<long long>(get(name)); }
    const std::string& s(const std::string& name) const { return std::get<std::string>(get(name)); }
    const std::vector<double>& v(const std::string& name) const { return std::get<std::vector<double>>(get(name)); }
    bool b(const std::string& name) const { return std::get<bool>(get(name)); }

    std::size_t count(const std::string& name) const { return app_->count("--" + name); }

    std::size_t positive(const std::string& name) const {
        const long long n = i(name);
        if (n <= 0) throw ArgumentError("--" + name + " must be positive");
        return static_cast<std::size_t>(n);
    }

    Json to_json() const {
        Json j = Json::object();
        for (const auto& [name, value] : entries_) std::visit([&](const auto& x) { j[name] = x; }, *value);
        return j;
    }

private:
    template <class T>
    CLI::Option* bind(const std::string& name, T def, const std::string& help) {
        return app_->add_option("--" + name, std::get<T>(slot(name, std::move(def))), help)->capture_default_str();
    }
    Value& slot(const std::string& name, Value v) {
        entries_.emplace_back(name, std::make_unique<Value>(std::move(v)));
        return *entries_.back().second;
    }
    const Value& get(const std::string& name) const {
        for (const auto& [n, value] : entries_)
            if (n == name) return *value;
        throw std::logic_error("unknown parameter " + name);
    }

    CLI::App* app_;
    std::vector<std::pair<std::string, std::unique_ptr<Value>>> entries_;
};

// ---------------------------------------------------------------------------
// run record

struct Check {
    std::string name;
    double value;
    double bound;
    bool pass;
};

struct Record {
    Json results = Json::object();
    std::vector<Check> checks;
    std::optional<PlotData> plot;
    std::optional<CsvTable> table;

    void check(std::string name, double value, double bound, bool pass) {
        checks.push_back({std::move(name), value, bound, pass});
    }
    void check_le(std::string name, double value, double bound) { check(std::move(name), value, bound, value <= bound); }
    void check_lt(std::string name, double value, double bound) { check(std::move(name), value, bound, value < bound); }
};

struct Context {
    const Params& p;
    std::uint64_t seed;
    int workers;
};

struct Command {
    std::string name;
    std::string help;
    std::function<void(Params&)> declare;
    std::function<Record(const Context&)> run;
};

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = n == 1 ? a : a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1);
    return out;
}

std::vector<cplx> complex_pairs(const std::vector<double>& v, const std::string& name) {
    if (v.empty() || v.size() % 2 != 0) throw ArgumentError("--" + name + " takes re,im pairs");
    std::vector<cplx> out;
    for (std::size_t k = 0; k < v.size(); k += 2) out.emplace_back(v[k], v[k + 1]);
    return out;
}

Json complex_json(cplx z) { return Json::array({z.real(), z.imag()}); }

double relative_gap(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

// ---------------------------------------------------------------------------
// bessel-density

void declare_bessel(Params& p) {
    p.real("D", 3.0, "dimension");
    p.real("t", 1.0, "time");
    p.real("x-min", 0.2, "smallest start and endpoint of the grid");
    p.real("x-max", 3.0, "largest start and endpoint of the grid");
    p.integer("grid", 10, "grid points per axis");
    p.real("tol-closed", 1e-12, "relative tolerance against the D=1 and D=3 closed forms");
    p.real("tol-mass", 1e-10, "tolerance on the total mass");
    p.integer("paths", 0, "Euler paths for a Kolmogorov test of the marginal (0 skips)");
    p.real("dt", 1e-3, "Euler step");
    p.real("alpha", 0.01, "level of the Kolmogorov test");
}

Record run_bessel(const Context& c) {
    const auto& p = c.p;
    const double D = p.d("D"), t = p.d("t");
    const auto xs = linspace(p.d("x-min"), p.d("x-max"), p.positive("grid"));
    Record rec;
    rec.table = CsvTable{{"x", "y", "density"}, {}};
    const bool closed = D == 1.0 || D == 3.0;
    double closed_err = 0.0, mass_err = 0.0;
    for (double x : xs) {
        const BesselSpec spec(D, x);
        for (double y : xs) {
            const double v = bessel_density(spec, t, y);
            rec.table->add_row({x, y, v});
            if (closed) {
                const double ref = D == 3.0 ? (y / x) * (heat_kernel(t, x, y) - heat_kernel(t, -x, y))
                                            : heat_kernel(t, x, y) + heat_kernel(t, -x, y);
                closed_err = std::max(closed_err, relative_gap(v, ref));
            }
        }
        mass_err = std::max(mass_err, std::fabs(bessel_cdf(spec, t, x + 14.0 * std::sqrt(t)) - 1.0));
    }
    rec.results["mass_error"] = mass_err;
    rec.check_le("mass", mass_err, p.d("tol-mass"));
    if (closed) {
        rec.results["closed_form_error"] = closed_err;
        rec.check_le("closed_form", closed_err, p.d("tol-closed"));
    }

    if (p.i("paths") > 0) {
        const std::size_t n = p.positive("paths");
        const double x0 = xs[xs.size() / 2];
        const BesselSpec spec(D, x0);
        BesselSimOptions opt;
        opt.record_stride = 1 << 30;
        auto ends = map_indexed<double>(n, c.workers, [&](std::size_t k) {
            RngStream rng(c.seed, k);
            return simulate_bessel(spec, p.d("dt"), t, rng, opt).values.back();
        });
        const double ks = ks_one_sample(ends, [&](double y) { return bessel_cdf(spec, t, y); });
        const double crit = std::sqrt(-0.5 * std::log(0.5 * p.d("alpha"))) / std::sqrt(static_cast<double>(n));
        rec.results["mc"] = {{"x", x0}, {"paths", n}, {"ks", ks}, {"critical", crit}};
        rec.check_le("euler_marginal_ks", ks, crit);
    }

    const double x0 = xs[xs.size() / 2];
    PlotData plot{"y", "density", {}, {}, {}};
    for (double y : linspace(0.01, p.d("x-max") + 4.0 * std::sqrt(t), 200)) {
        plot.x.push_back(y);
        plot.y.push_back(bessel_density(BesselSpec(D, x0), t, y));
        plot.yerr.push_back(0.0);
    }
    rec.plot = plot;
    return rec;
}

// ---------------------------------------------------------------------------
// cardy

void declare_cardy(Params& p) {
    p.real("D", 5.0 / 3.0, "dimension, below 2");
    p.real("x", 0.5, "lower start");
    p.real("y", 1.0, "upper start");
    p.integer("paths", 200000, "coupled path pairs");
    p.real("dt", 1e-4, "step at the lower start value");
    p.reals("eps", {1e-2, 3e-3, 1e-3}, "hitting thresholds, decreasing");
    p.real("c-eq", 10.0, "simultaneity factor");
    p.real("control-bound", 0.01, "largest tie frequency allowed when D <= 3/2");
}

Record run_cardy(const Context& c) {
    const auto& p = c.p;
    const FlowCoupling fc{p.d("D"), p.d("x"), p.d("y")};
    FlowOptions opt;
    opt.eps_levels = p.v("eps");
    opt.c_eq = p.d("c-eq");
    if (opt.eps_levels.empty() || !std::is_sorted(opt.eps_levels.rbegin(), opt.eps_levels.rend()))
        throw ArgumentError("--eps must be a decreasing list");
    const auto rep = cardy_monte_carlo(fc, p.d("dt"), p.positive("paths"), c.seed, opt, c.workers);
    const bool intermediate = fc.D > 1.5 && fc.D < 2.0;

    Record rec;
    auto& r = rec.results;
    if (intermediate) r["exact"] = rep.exact;
    r["mc"] = rep.freq.back();
    r["stderr"] = rep.stderr_.back();
    r["margin"] = rep.margin;
    r["margin_rule"] = "max over levels of |p(eps) - p(finest eps)|";
    r["levels"] = Json::array();
    rec.table = CsvTable{{"eps", "frequency", "stderr"}, {}};
    for (std::size_t l = 0; l < rep.eps.size(); ++l) {
        r["levels"].push_back({{"eps", rep.eps[l]}, {"frequency", rep.freq[l]}, {"stderr", rep.stderr_[l]}});
        rec.table->add_row({rep.eps[l], rep.freq[l], rep.stderr_[l]});
    }
    r["inconclusive"] = rep.inconclusive;
    rec.check("order_preserved", rep.ordered ? 1.0 : 0.0, 1.0, rep.ordered);
    rec.check_le("inconclusive_paths", static_cast<double>(rep.inconclusive), 0.0);
    if (intermediate) {
        rec.check_le("cardy_bracket", std::fabs(rep.freq.back() - rep.exact), 3.0 * rep.stderr_.back() + rep.margin);
        PlotData plot{"(y-x)/y", "P(T^x = T^y)", {}, {}, {}};
        for (double u : linspace(0.02, 0.98, 49)) {
            plot.x.push_back(u);
            plot.y.push_back(cardy_probability(fc.D, 1.0 - u, 1.0));
            plot.yerr.push_back(0.0);
        }
        rec.plot = plot;
    } else if (fc.D <= 1.5) {
        rec.check_lt("control_tie_frequency", rep.freq.back(), p.d("control-bound"));
    }
    r["pass"] = std::all_of(rec.checks.begin(), rec.checks.end(), [](const Check& k) { return k.pass; });
    return rec;
}

// ---------------------------------------------------------------------------
// sle-trace, sle-swallow

void declare_sle_trace(Params& p) {
    p.real("D", 3.0, "dimension, above 1");
    p.real("dt", 1e-4, "driving step");
    p.real("horizon", 1.0, "final time");
    p.flag("zero-driving", "use B = 0 instead of a Brownian driving function");
    p.real("resolution", 1e-2, "self-approach distance");
    p.real("excursion", 10.0, "excursion factor for the self-approach diagnostic");
    p.real("tol-hydro", 1e-3, "hydrodynamic residual bound at |z| = 1e3");
    p.real("tol-zero", 1e-10, "tolerance for the B = 0 slit");
}

Record run_sle_trace(const Context& c) {
    const auto& p = c.p;
    const double D = p.d("D"), dt = p.d("dt");
    RngStream rng(c.seed, 0);
    const auto chain = p.b("zero-driving") ? zero_driving(D, dt, p.d("horizon")) : sample_driving(D, dt, p.d("horizon"), rng);
    const auto gamma = trace(chain);

    Record rec;
    auto& r = rec.results;
    r["kappa"] = chain.kappa();
    r["phase"] = phase_name(phase(D));
    r["hausdorff_dimension"] = hausdorff_dimension(D);
    r["points"] = gamma.size();

    rec.table = CsvTable{{"t", "re", "im"}, {}};
    double min_im = 0.0, max_re = 0.0, slit_err = 0.0;
    for (std::size_t k = 0; k < gamma.size(); ++k) {
        const double tk = dt * static_cast<double>(k);
        rec.table->add_row({tk, gamma[k].real(), gamma[k].imag()});
        min_im = std::min(min_im, gamma[k].imag());
        max_re = std::max(max_re, std::fabs(gamma[k].real()));
        if (k > 0) slit_err = std::max(slit_err, relative_gap(gamma[k].imag(), std::sqrt((D - 1.0) * tk)));
    }
    rec.check("upper_half_plane", min_im, 0.0, min_im >= 0.0);

    const cplx z = std::polar(1e3, 1.1);
    const auto far = evolve_point(chain, z, chain.horizon());
    const double residual = std::abs(far.g - z - chain.capacity(chain.horizon()) / z);
    r["hydrodynamic_residual"] = residual;
    rec.check_le("hydrodynamic_normalization", residual, p.d("tol-hydro"));

    if (p.b("zero-driving")) {
        r["max_abs_re"] = max_re;
        r["slit_height_error"] = slit_err;
        rec.check_le("zero_driving_vertical", max_re, p.d("tol-zero"));
        rec.check_le("zero_driving_height", slit_err, p.d("tol-zero"));
    } else {
        const auto hit = find_self_approach(gamma, p.d("resolution"), p.d("excursion"));
        Json s = {{"resolution", p.d("resolution")}, {"found", hit.has_value()}};
        if (hit) {
            s["j"] = hit->j;
            s["k"] = hit->k;
            s["distance"] = hit->distance;
        }
        r["self_approach"] = s;
    }

    PlotData plot{"D", "Hausdorff dimension", {}, {}, {}};
    for (double d : linspace(1.05, 6.0, 100)) {
        plot.x.push_back(d);
        plot.y.push_back(hausdorff_dimension(d));
        plot.yerr.push_back(0.0);
    }
    rec.plot = plot;
    return rec;
}

void declare_sle_swallow(Params& p) {
    p.real("D", 3.0, "dimension, above 1");
    p.real("dt", 1e-4, "driving step");
    p.real("horizon", 1.0, "final time");
    p.integer("chains", 100, "independent driving functions");
    p.reals("point", {0.5, 0.5}, "re,im pairs of the tracked points");
    p.real("eps", kDefaultSwallowEps, "swallow threshold on |g + B|");
    p.flag("refine", "repeat on the same driving paths refined to dt/2");
    p.real("simple-bound", 0.01, "largest swallow frequency allowed in the simple phase");
}

Record run_sle_swallow(const Context& c) {
    const auto& p = c.p;
    const double D = p.d("D");
    const auto pts = complex_pairs(p.v("point"), "point");
    const auto chains = p.positive("chains");
    const Phase ph = phase(D);

    std::vector<SwallowStat> at_dt, at_half;
    if (p.b("refine")) {
        auto table = swallow_statistics(D, p.d("dt"), p.d("horizon"), pts, chains, c.seed, p.d("eps"), c.workers);
        at_dt = table.at_dt;
        at_half = table.at_half_dt;
    } else {
        for (const auto& z : pts)
            at_dt.push_back(swallow_frequency(D, p.d("dt"), p.d("horizon"), z, chains, c.seed, p.d("eps"), c.workers));
    }

    Record rec;
    rec.results["phase"] = phase_name(ph);
    rec.results["points"] = Json::array();
    rec.table = CsvTable{{"re", "im", "frequency", "swallowed", "chains"}, {}};
    if (!at_half.empty()) rec.table->columns.push_back("frequency_half_dt");
    PlotData plot{"point index", "swallow frequency", {}, {}, {}};
    for (std::size_t k = 0; k < at_dt.size(); ++k) {
        const auto& s = at_dt[k];
        Json row = {{"z", complex_json(s.z)}, {"frequency", s.frequency}, {"swallowed", s.swallowed}, {"chains", s.chains}};
        std::vector<double> cells{s.z.real(), s.z.imag(), s.frequency, double(s.swallowed), double(s.chains)};
        if (!at_half.empty()) {
            row["frequency_half_dt"] = at_half[k].frequency;
            cells.push_back(at_half[k].frequency);
        }
        rec.results["points"].push_back(row);
        rec.table->add_row(cells);
        plot.x.push_back(double(k));
        plot.y.push_back(s.frequency);
        plot.yerr.push_back(std::sqrt(s.frequency * (1.0 - s.frequency) / double(s.chains)));
        const std::string tag = "point_" + std::to_string(k);
        if (ph == Phase::simple)
            rec.check_lt("no_swallow_" + tag, s.frequency, p.d("simple-bound"));
        else if (ph == Phase::self_intersecting)
            rec.check("swallow_" + tag, s.frequency, 0.0, s.frequency > 0.0);
    }
    rec.plot = plot;
    return rec;
}

// ---------------------------------------------------------------------------
// dyson-compare

void declare_dyson(Params& p) {
    p.integer("N", 2, "particles");
    p.real("t", 1.0, "comparison time");
    p.real("dt", 1e-3, "SDE step");
    p.integer("samples", 100000, "samples per side");
    p.real("spacing", 1.0, "distance between neighbouring starts");
    p.real("alpha", 0.01, "level of the two-sample tests");
    p.real("gap-bound", 0.015, "Kolmogorov distance bound for the N=2 gap against BES(3)");
}

Record run_dyson(const Context& c) {
    const auto& p = c.p;
    const auto N = p.positive("N");
    WeylPoint x(N);
    for (std::size_t k = 0; k < N; ++k) x[k] = p.d("spacing") * (double(k) - 0.5 * double(N - 1));
    const auto samples = p.positive("samples");
    const auto rep = compare_aspects(x, p.d("t"), p.d("dt"), samples, c.seed, p.d("alpha"), c.workers);

    Record rec;
    auto& r = rec.results;
    r["start"] = x;
    r["ks"] = rep.ks;
    r["critical"] = rep.critical;
    r["aborted"] = rep.aborted;
    rec.table = CsvTable{{"coordinate", "ks", "critical"}, {}};
    PlotData plot{"coordinate", "two-sample KS", {}, {}, {}};
    for (std::size_t k = 0; k < rep.ks.size(); ++k) {
        rec.table->add_row({double(k), rep.ks[k], rep.critical[k]});
        rec.check_le("marginal_" + std::to_string(k), rep.ks[k], rep.critical[k]);
        plot.x.push_back(double(k));
        plot.y.push_back(rep.ks[k]);
        plot.yerr.push_back(0.0);
    }
    if (N == 2) {
        r["gap_ks"] = rep.gap_ks;
        rec.check_lt("gap_vs_bes3", rep.gap_ks, p.d("gap-bound"));
    }
    rec.check_le("aborted_paths", double(rep.aborted), 1e-3 * double(samples));
    rec.plot = plot;
    return rec;
}

// ---------------------------------------------------------------------------
// kernel-table, relax-curve, fredholm

template <class F>
double line_integral(F&& f, double lo, double hi, int panels) {
    static const auto unit = gauss_legendre(64);
    return integrate_panels(f, lo, hi, panels, unit);
}

void declare_kernel(Params& p) {
    p.reals("xi", {-1.2, 0.1, 0.9}, "initial configuration");
    p.real("s", 1.0, "first time");
    p.real("t", 1.0, "second time");
    p.real("x-min", -2.0, "grid start");
    p.real("x-max", 2.0, "grid end");
    p.integer("grid", 9, "grid points per axis");
    p.integer("contour-points", 256, "trapezoid points on the contour");
    p.real("window", 9.0, "mass integral runs this far beyond the configuration");
    p.real("tol-mass", 1e-6, "tolerance on the mass identity");
    p.real("tol-agree", 1e-8, "tolerance between the residue and contour forms");
}

Record run_kernel(const Context& c) {
    const auto& p = c.p;
    const PointConfiguration xi{p.v("xi")};
    if (xi.size() == 0) throw ArgumentError("--xi must not be empty");
    const double s = p.d("s"), t = p.d("t");
    const bool simple = xi.is_simple();
    const auto k2 = make_kernel_K2(xi, {static_cast<int>(p.positive("contour-points")), 1.0});
    const auto grid = linspace(p.d("x-min"), p.d("x-max"), p.positive("grid"));

    Record rec;
    rec.table = CsvTable{{"x", "y", "K1", "K2"}, {}};
    double gap = 0.0;
    for (double x : grid)
        for (double y : grid) {
            const double b = k2(s, x, t, y);
            const double a = simple ? kernel_K1(xi, s, x, t, y) : std::nan("");
            if (simple) gap = std::max(gap, std::fabs(a - b));
            rec.table->add_row({x, y, a, b});
        }
    rec.results["simple"] = simple;
    if (simple) {
        rec.results["max_K1_K2_difference"] = gap;
        rec.check_le("K1_equals_K2", gap, p.d("tol-agree"));
    }
    if (s == t) {
        const auto [lo, hi] = std::minmax_element(xi.points.begin(), xi.points.end());
        const double W = p.d("window");
        const double mass = line_integral(
            [&](double x) { return simple ? kernel_K1(xi, t, x, t, x) : k2(t, x, t, x); }, *lo - W, *hi + W, 16);
        rec.results["mass"] = mass;
        rec.results["points"] = xi.size();
        rec.check_le("mass_identity", std::fabs(mass - double(xi.size())), p.d("tol-mass"));
    }
    PlotData plot{"x", "K(t,x;t,x)", {}, {}, {}};
    for (double x : linspace(p.d("x-min"), p.d("x-max"), 200)) {
        plot.x.push_back(x);
        plot.y.push_back(k2(t, x, t, x));
        plot.yerr.push_back(0.0);
    }
    rec.plot = plot;
    return rec;
}

void declare_relax(Params& p) {
    p.real("s", 0.5, "first time");
    p.real("t", 1.0, "second time");
    p.reals("u", {1, 2, 4, 8}, "time shifts, increasing");
    p.integer("grid", 5, "grid points per axis");
    p.real("x-min", -1.0, "grid start");
    p.real("x-max", 1.0, "grid end");
    p.real("bound", 1e-6, "required sup at the last shift");
}

Record run_relax(const Context& c) {
    const auto& p = c.p;
    const auto us = p.v("u");
    if (us.empty()) throw ArgumentError("--u must not be empty");
    const auto grid = linspace(p.d("x-min"), p.d("x-max"), p.positive("grid"));
    const double s = p.d("s"), t = p.d("t");

    Record rec;
    rec.table = CsvTable{{"u", "sup"}, {}};
    PlotData plot{"u", "sup |K_lattice - K_sine|", {}, {}, {}};
    std::vector<double> sups;
    for (double u : us) {
        double sup = 0.0;
        for (double x : grid)
            for (double y : grid)
                sup = std::max(sup, std::fabs(lattice_kernel(u + s, x, u + t, y).value - extended_sine_kernel(s, x, t, y)));
        sups.push_back(sup);
        rec.table->add_row({u, sup});
        plot.x.push_back(u);
        plot.y.push_back(sup);
        plot.yerr.push_back(0.0);
    }
    rec.results["u"] = us;
    rec.results["sup"] = sups;
    double worst_ratio = 0.0;
    for (std::size_t k = 1; k < sups.size(); ++k) worst_ratio = std::max(worst_ratio, sups[k] / sups[k - 1]);
    rec.check_lt("strictly_decreasing", worst_ratio, 1.0);
    rec.check_lt("below_bound_at_last_shift", sups.back(), p.d("bound"));
    rec.plot = plot;
    return rec;
}

void declare_fredholm(Params& p) {
    p.reals("xi", {-1.0, 1.0}, "initial configuration, simple");
    p.reals("times", {0.5, 1.0}, "observation times, increasing");
    p.reals("centers", {-0.5, 0.8}, "bump centre at each time");
    p.real("width", 1.5, "bump half-width");
    p.reals("eps", {0.02, 0.01}, "two amplitudes, the second smaller");
    p.integer("order", 96, "Gauss-Legendre nodes per panel");
    p.real("tol-ratio", 0.1, "relative tolerance on the residual ratio (eps1/eps2)^2");
}

Record run_fredholm(const Context& c) {
    const auto& p = c.p;
    const PointConfiguration xi{p.v("xi")};
    const auto times = p.v("times"), centers = p.v("centers"), eps = p.v("eps");
    if (times.size() != centers.size()) throw ArgumentError("--centers needs one value per time");
    if (eps.size() != 2 || !(eps[1] < eps[0] && eps[1] > 0)) throw ArgumentError("--eps takes two amplitudes e1 > e2 > 0");
    const double w = p.d("width");
    const auto k = make_kernel_K1(xi);
    double radius = 0.0;
    for (double x : xi.points) radius = std::max(radius, std::fabs(x));
    auto grid = default_grid(times, radius);
    grid.order = static_cast<int>(p.positive("order"));

    auto bump = [w](double center) {
        return [w, center](double x) {
            const double u = x - center;
            return std::fabs(u) < w ? std::pow(1.0 - u * u / (w * w), 3) : 0.0;
        };
    };
    double first = 0.0;
    for (std::size_t b = 0; b < times.size(); ++b) {
        const auto g = bump(centers[b]);
        first += line_integral([&](double x) { return k(times[b], x, times[b], x) * g(x); }, centers[b] - w, centers[b] + w, 8);
    }
    auto residual = [&](double e) {
        std::vector<TestFunction> chi;
        for (double cb : centers) {
            const auto g = bump(cb);
            chi.push_back({[g, e](double x) { return e * g(x); }, cb - w, cb + w});
        }
        return std::fabs(fredholm_generating(k, grid, chi) - 1.0 - e * first);
    };
    const double r1 = residual(eps[0]), r2 = residual(eps[1]);
    const double expected = (eps[0] / eps[1]) * (eps[0] / eps[1]);

    Record rec;
    auto& r = rec.results;
    r["first_order"] = first;
    r["residuals"] = {r1, r2};
    r["ratio"] = r1 / r2;
    r["expected_ratio"] = expected;
    rec.check_le("residual_second_order", r1, 10.0 * eps[0] * eps[0]);
    rec.check_le("quadratic_falloff", std::fabs(r1 / r2 / expected - 1.0), p.d("tol-ratio"));
    rec.table = CsvTable{{"eps", "residual"}, {{eps[0], r1}, {eps[1], r2}}};
    rec.plot = PlotData{"eps", "|Psi - 1 - eps int rho chi|", {eps[0], eps[1]}, {r1, r2}, {0.0, 0.0}};
    return rec;
}

// ---------------------------------------------------------------------------
// extremes

void declare_extremes(Params& p) {
    p.reals("levels", {0.8, 1.0, 1.5, 2.0}, "levels h");
    p.integer("samples", 100000, "bridge samples");
    p.real("dt", 1e-4, "bridge grid step");
    p.real("tol-moment", 1e-4, "tolerance on E[H^2] = pi^2/6");
    p.real("tol-reduction", 1e-12, "tolerance of the N=1 determinant against the series");
}

Record run_extremes(const Context& c) {
    const auto& p = c.p;
    const double dt = p.d("dt");
    const auto maxima = bridge_max_samples(dt, p.positive("samples"), c.seed, c.workers);
    const auto rows = bridge_cdf_table(p.v("levels"), maxima, dt);

    Record rec;
    auto& r = rec.results;
    r["rows"] = Json::array();
    rec.table = CsvTable{{"h", "exact", "mc", "stderr", "bias"}, {}};
    PlotData plot{"h", "P(max <= h)", {}, {}, {}};
    for (const auto& row : rows) {
        r["rows"].push_back({{"h", row.h}, {"exact", row.exact}, {"mc", row.mc}, {"stderr", row.stderr_}, {"bias", row.bias}});
        rec.table->add_row({row.h, row.exact, row.mc, row.stderr_, row.bias});
        rec.check_le("cdf_h_" + format_double(row.h), std::fabs(row.mc - row.exact), 3.0 * row.stderr_ + row.bias);
        plot.x.push_back(row.h);
        plot.y.push_back(row.mc);
        plot.yerr.push_back(row.stderr_);
    }
    const double target = pi * pi / 6.0;
    const double via_xi = moment_h1(2.0), via_cdf = moment_h1_stieltjes(2.0);
    r["second_moment"] = {{"target", target}, {"xi", via_xi}, {"stieltjes", via_cdf}};
    rec.check_le("moment_xi", std::fabs(via_xi - target), p.d("tol-moment"));
    rec.check_le("moment_stieltjes", std::fabs(via_cdf - target), p.d("tol-moment"));
    double reduction = 0.0;
    for (double h : p.v("levels")) reduction = std::max(reduction, std::fabs(max_cdf_hN(1, h).value - max_cdf_h1(h).value));
    r["n1_reduction"] = reduction;
    rec.check_le("n1_reduction", reduction, p.d("tol-reduction"));
    rec.plot = plot;
    return rec;
}

// ---------------------------------------------------------------------------
// charpoly

void declare_charpoly(Params& p) {
    p.integer("N", 2, "matrix size");
    p.reals("alpha", {0.3, 0.0, -1.1, 0.0}, "re,im pairs of the 2n shifts");
    p.real("sigma2", 1.0, "GUE variance");
    p.integer("samples", 1000000, "Monte Carlo matrices (0 skips)");
    p.integer("ishikawa", 100, "random instances of the Ishikawa identity (0 skips)");
    p.integer("ts-samples", 0, "samples for the time-shift test (0 skips)");
    p.real("t1", 0.5, "time-shift test: first time");
    p.real("t2", 0.0, "time-shift test: second time (0 for a single time)");
    p.real("ts-dt", 1e-3, "time-shift test: SDE step");
    p.real("alpha-level", 0.01, "level of the time-shift tests");
    p.real("tol-identity", 1e-10, "relative tolerance between the two determinant forms");
    p.real("tol-ishikawa", 1e-10, "tolerance on the Ishikawa identity");
}

Record run_charpoly(const Context& c) {
    const auto& p = c.p;
    const GueSpec spec(static_cast<int>(p.positive("N")), p.d("sigma2"));
    const auto alpha = complex_pairs(p.v("alpha"), "alpha");
    Record rec;
    auto& r = rec.results;

    // the two determinant forms over N <= 3, n <= 2 (2n shifts)
    const std::vector<std::vector<cplx>> sweep{{{0.3, 0.2}, {-0.5, 0.1}}, {{0.3, 0.2}, {-0.5, 0.1}, {1.1, -0.3}, {-1.4, 0.6}}};
    double identity = 0.0;
    for (int N = 1; N <= 3; ++N)
        for (const auto& a : sweep) {
            const GueSpec g(N, spec.sigma2);
            const cplx full = mgue_det(a, g), block = mgue_det_block(a, g);
            identity = std::max(identity, std::abs(full - block) / std::max(std::abs(full), 1e-300));
        }
    r["determinant_forms_gap"] = identity;
    rec.check_le("determinant_forms", identity, p.d("tol-identity"));

    const cplx det = mgue_det(alpha, spec);
    r["det"] = complex_json(det);
    if (p.i("samples") > 0) {
        const auto mc = mgue_mc(alpha, spec, p.positive("samples"), c.seed, c.workers);
        r["mc"] = complex_json(mc.mean);
        r["stderr"] = {mc.stderr_re, mc.stderr_im};
        rec.check_le("mc_real", std::fabs(mc.mean.real() - det.real()), 3.0 * mc.stderr_re);
        rec.check_le("mc_imag", std::fabs(mc.mean.imag() - det.imag()), 3.0 * mc.stderr_im);
        rec.table = CsvTable{{"N", "n", "det_re", "det_im", "mc_re", "mc_im", "stderr_re", "stderr_im"}, {}};
        rec.table->add_row({double(spec.N), double(alpha.size() / 2), det.real(), det.imag(), mc.mean.real(),
                            mc.mean.imag(), mc.stderr_re, mc.stderr_im});
    }
    if (p.i("ishikawa") > 0) {
        double worst = 0.0;
        for (std::size_t k = 0; k < p.positive("ishikawa"); ++k) {
            RngStream rng(c.seed, (std::uint64_t{1} << 41) + k);
            worst = std::max(worst, ishikawa_check(2 + static_cast<int>(k % 2), rng));
        }
        r["ishikawa_max_deviation"] = worst;
        rec.check_lt("ishikawa", worst, p.d("tol-ishikawa"));
    }
    if (p.i("ts-samples") > 0) {
        const auto ts = timeshift_equivalence_check(spec.N, spec.sigma2, p.d("t1"), p.d("t2"), p.d("ts-dt"),
                                                    p.positive("ts-samples"), c.seed, p.d("alpha-level"), c.workers);
        Json j = {{"labels", ts.labels}, {"ks", ts.ks}, {"critical", ts.critical}, {"aborted", ts.aborted}};
        r["time_shift"] = j;
        for (std::size_t k = 0; k < ts.ks.size(); ++k) rec.check_le("time_shift_" + ts.labels[k], ts.ks[k], ts.critical[k]);
        rec.check("time_shift", ts.pass ? 1.0 : 0.0, 1.0, ts.pass);
    }
    return rec;
}

// ---------------------------------------------------------------------------
// fomin

void declare_fomin(Params& p) {
    p.text("net", "", "network file: 'u v weight' lines, 'A: ...' and 'B: ...'");
    p.integer("Lmax", -1, "longest walk in the enumeration (-1 picks it from --tail)");
    p.real("tail", 1e-8, "target tail bound when Lmax is picked automatically");
}

Record run_fomin(const Context& c) {
    const auto& p = c.p;
    if (p.s("net").empty()) throw ArgumentError("--net is required");
    const auto net = load_network(p.s("net"));
    const bool automatic = p.i("Lmax") < 0;
    const int L = automatic ? fomin_lmax_for(net, p.d("tail")) : static_cast<int>(p.i("Lmax"));
    const double det = fomin_determinant(net);
    const auto brute = brute_force_fomin(net, L, p.d("tail"));

    Record rec;
    auto& r = rec.results;
    r["vertices"] = net.size();
    r["N"] = net.A.size();
    r["max_row_sum"] = net.max_row_sum();
    r["Lmax"] = L;
    r["det"] = det;
    r["brute"] = brute.value;
    r["tail_bound"] = brute.tail_bound;
    const RealMatrix W = walk_matrix(net);
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < W.rows(); ++i) {
        std::vector<double> row;
        for (Eigen::Index j = 0; j < W.cols(); ++j) row.push_back(W(i, j));
        rows.push_back(row);
    }
    r["W"] = rows;
    rec.check_le("det_vs_enumeration", std::fabs(det - brute.value), brute.tail_bound);
    if (automatic) rec.check_le("tail_bound", brute.tail_bound, p.d("tail"));
    r["pass"] = std::all_of(rec.checks.begin(), rec.checks.end(), [](const Check& k) { return k.pass; });
    rec.table = CsvTable{{"Lmax", "det", "brute", "tail_bound"}, {{double(L), det, brute.value, brute.tail_bound}}};
    return rec;
}

// ---------------------------------------------------------------------------

const std::vector<Command>& commands() {
    static const std::vector<Command> all{
        {"bessel-density", "transition density of BES(D): closed forms, mass, optional Euler check", declare_bessel, run_bessel},
        {"cardy", "flow-coupling Monte Carlo of P(T^x = T^y) against the hypergeometric formula", declare_cardy, run_cardy},
        {"sle-trace", "Loewner trace as CSV with phase report and normalization checks", declare_sle_trace, run_sle_trace},
        {"sle-swallow", "swallow frequencies of fixed points over independent chains", declare_sle_swallow, run_sle_swallow},
        {"dyson-compare", "GUE eigenvalue process against the noncolliding SDE", declare_dyson, run_dyson},
        {"kernel-table", "correlation kernel in residue and contour form, mass identity", declare_kernel, run_kernel},
        {"relax-curve", "distance of the lattice-start kernel to the extended sine kernel", declare_relax, run_relax},
        {"fredholm", "first-order expansion of the Fredholm generating function", declare_fredholm, run_fredholm},
        {"extremes", "maximum of the 3-d Bessel bridge: series, moments, Monte Carlo", declare_extremes, run_extremes},
        {"charpoly", "moments of GUE characteristic polynomials", declare_charpoly, run_charpoly},
        {"fomin", "Fomin determinant against the truncated walk enumeration", declare_fomin, run_fomin},
    };
    return all;
}

std::uint64_t resolve_seed(const CLI::App& sub, long long flag_value) {
    if (sub.count("--seed")) {
        if (flag_value < 0) throw ArgumentError("--seed must be nonnegative");
        return static_cast<std::uint64_t>(flag_value);
    }
    if (const char* env = std::getenv("STOCHLAB_SEED"); env && *env) {
        char* end = nullptr;
        errno = 0;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (errno != 0 || *end != '\0' || env[0] == '-') throw ArgumentError(std::string("STOCHLAB_SEED is not a seed: ") + env);
        return v;
    }
    return 1;
}

struct SubcommandState {
    const Command* command;
    CLI::App* app;
    std::unique_ptr<Params> params;
    long long seed = 0;
    int workers = 1;
    std::string json_path, csv_path;
};

Outcome emit_plotdata(const std::string& record_path, const std::string& out_path) {
    Json record;
    try {
        record = Json::parse(read_text(record_path));
    } catch (const nlohmann::json::exception& e) {
        throw ArgumentError(record_path + ": " + e.what());
    }
    if (!record.contains("plot")) throw ArgumentError(record_path + " has no plot data");
    const std::string csv = PlotData::from_json(record["plot"]).to_csv().to_text();
    if (out_path.empty()) return {0, csv, ""};
    write_text(out_path, csv);
    return {0, "", ""};
}

}  // namespace

Outcome run(const std::vector<std::string>& args) {
    CLI::App app{"stochlab: verification suites with seeded, reproducible output", "stochlab_cli"};
    app.set_config("--config", "", "TOML/INI file; flags given on the command line take precedence");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1);

    std::vector<SubcommandState> states;
    states.reserve(commands().size());
    for (const auto& cmd : commands()) {
        SubcommandState st;
        st.command = &cmd;
        st.app = app.add_subcommand(cmd.name, cmd.help);
        st.params = std::make_unique<Params>(st.app);
        cmd.declare(*st.params);
        states.push_back(std::move(st));
        auto& s = states.back();
        s.app->add_option("--seed", s.seed, "seed (default: STOCHLAB_SEED, else 1)");
        s.workers = default_workers();
        s.app->add_option("--workers", s.workers, "worker threads; results do not depend on it")->capture_default_str();
        s.app->add_option("--json", s.json_path, "write the run record here instead of stdout");
        s.app->add_option("--csv", s.csv_path, "write the main table here");
    }
    std::string record_path, plot_out;
    auto* plot = app.add_subcommand("emit_plotdata", "x,y,yerr CSV from a run record");
    plot->add_option("--record", record_path, "run record JSON")->required();
    plot->add_option("--out", plot_out, "output CSV (default stdout)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        std::ostringstream out, err;
        const int code = app.exit(e, out, err);
        return {code == 0 ? 0 : 2, out.str(), err.str()};
    }

    try {
        if (plot->parsed()) return emit_plotdata(record_path, plot_out);
        for (auto& s : states) {
            if (!s.app->parsed()) continue;
            if (s.workers < 1) throw ArgumentError("--workers must be at least 1");
            const std::uint64_t seed = resolve_seed(*s.app, s.seed);
            Context ctx{*s.params, seed, s.workers};
            Record rec = s.command->run(ctx);

            Json config = s.params->to_json();
            config["seed"] = seed;
            config["workers"] = s.workers;
            config["json"] = s.json_path;
            config["csv"] = s.csv_path;
            const bool pass = std::all_of(rec.checks.begin(), rec.checks.end(), [](const Check& k) { return k.pass; });
            Json record = {{"subcommand", s.command->name}, {"config", config}, {"results", rec.results}};
            Json checks = Json::array();
            for (const auto& k : rec.checks)
                checks.push_back({{"name", k.name}, {"value", k.value}, {"bound", k.bound}, {"pass", k.pass}});
            record["checks"] = checks;
            record["pass"] = pass;
            if (rec.plot) record["plot"] = rec.plot->to_json();

            Outcome outcome;
            const std::string text = to_json_text(record);
            if (s.json_path.empty())
                outcome.out = text;
            else
                write_text(s.json_path, text);
            if (!s.csv_path.empty()) {
                if (!rec.table) throw ArgumentError(s.command->name + " has no table for --csv");
                write_text(s.csv_path, rec.table->to_text());
            }
            std::string failed;
            for (const auto& k : rec.checks)
                if (!k.pass) failed += (failed.empty() ? "" : ", ") + k.name;
            outcome.exit_code = pass ? 0 : 1;
            outcome.err = pass ? "PASS " + s.command->name + "\n" : "FAIL " + s.command->name + ": " + failed + "\n";
            return outcome;
        }
        return {2, "", "no subcommand\n"};
    } catch (const ArgumentError& e) {
        return {2, "", std::string("usage error: ") + e.what() + "\n"};
    } catch (const DomainError& e) {
        return {2, "", std::string("usage error: ") + e.what() + "\n"};
    } catch (const NumericError& e) {
        return {1, "", std::string("numeric failure: ") + e.what() + "\n"};
    } catch (const std::exception& e) {
        return {1, "", std::string("failure: ") + e.what() + "\n"};
    }
}

}  // namespace stochlab::cli
