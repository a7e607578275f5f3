#pragma once

#include <functional>
#include <vector>

#include "stochlab/dyson.hpp"

namespace stochlab {

enum class KernelKind { K1, K2, sine, extended_sine, lattice };

// K(s, x; t, y). Time-ordered kernels carry the -1(s>t) p_{s-t}(x|y) term and
// are flagged asymmetric.
struct CorrelationKernel {
    std::function<double(double, double, double, double)> eval;
    bool symmetric = false;
    KernelKind kind = KernelKind::K1;

    double operator()(double s, double x, double t, double y) const { return eval(s, x, t, y); }
};

// Finite simple configuration; Gauss-Hermite in the imaginary shift.
double kernel_K1(const PointConfiguration& xi, double s, double x, double t, double y);

struct ContourSpec {
    int points = 256;
    double radius_scale = 1.0;  // multiplies the default radius
};

// Finite configuration, repeated points allowed; circle contour around the support.
double kernel_K2(const PointConfiguration& xi, double s, double x, double t, double y, const ContourSpec& c = {});

double sine_kernel(double x, double y);
double extended_sine_kernel(double s, double x, double t, double y);

struct LatticeKernelValue {
    double value;
    int n_max;
    double tail_bound;
};

enum class LatticeForm { series, theta };

// Integer-lattice start. n_max < 0 picks the truncation from the tail bound.
LatticeKernelValue lattice_kernel(double s, double x, double t, double y, int n_max = -1,
                                  LatticeForm form = LatticeForm::series);
// the part added to the extended sine kernel
LatticeKernelValue lattice_correction(double s, double x, double t, double y, int n_max = -1,
                                      LatticeForm form = LatticeForm::series);

CorrelationKernel make_kernel_K1(const PointConfiguration& xi);
CorrelationKernel make_kernel_K2(const PointConfiguration& xi, const ContourSpec& c = {});
CorrelationKernel make_sine_kernel();  // single-time, ignores s and t
CorrelationKernel make_extended_sine_kernel();
CorrelationKernel make_lattice_kernel();

struct SpaceTimePoint {
    double t;
    double x;
};

// det[K(t_i, x_i; t_j, x_j)]
double correlation_function(const CorrelationKernel& k, const std::vector<SpaceTimePoint>& pts);

struct TestFunction {
    std::function<double(double)> chi;
    double lo, hi;  // support
};

struct SpaceTimeGrid {
    std::vector<double> times;           // ascending
    double L;                            // window [-L, L]
    std::vector<double> breakpoints;     // extra panel edges inside the window
    int order = 128;                     // Gauss-Legendre nodes per panel
};

// L = max(5 sqrt(t_max), support radius + 5 sqrt(t_max))
SpaceTimeGrid default_grid(const std::vector<double>& times, double support_radius);

// det(I + K chi) on the Nystrom discretization, blocks ordered by time.
double fredholm_generating(const CorrelationKernel& k, const SpaceTimeGrid& grid,
                           const std::vector<TestFunction>& chi);

struct ConditionFunctionals {
    double M;
    double M_alpha;
    double M1_shifted;
};

// Sums over the points in [-L, L] minus the origin; the shifted term uses the
// points x^2 - a^2.
ConditionFunctionals condition_functionals(const PointConfiguration& xi, double L, double alpha, double a);
ConditionFunctionals condition_functionals_lattice(double L, double alpha, double a);

}  // namespace stochlab
