#pragma once

#include <complex>
#include <vector>

namespace stochlab {

enum class QuadratureKind { gauss_legendre, gauss_hermite, trapezoid_contour };

struct QuadratureRule {
    QuadratureKind kind;
    std::vector<std::complex<double>> nodes;  // real rules keep imag == 0
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
    double node(std::size_t i) const { return nodes[i].real(); }
};

inline constexpr int kDefaultLegendreOrder = 128;
inline constexpr int kDefaultHermiteOrder = 64;

// Nodes and weights on [a,b].
QuadratureRule gauss_legendre(int order = kDefaultLegendreOrder, double a = -1.0, double b = 1.0);

// Weight exp(-w^2) on the real line.
QuadratureRule gauss_hermite(int order = kDefaultHermiteOrder);

// Equispaced points on a circle; weights are dz/(2 pi i) scaled so that
// sum_k w_k f(z_k) approximates (1/(2 pi i)) \oint f(z) dz.
struct ContourRule {
    std::vector<std::complex<double>> nodes;
    std::vector<std::complex<double>> weights;
};
ContourRule trapezoid_circle(int points, std::complex<double> center, double radius);

// Composite Gauss-Legendre over equal panels.
template <class F>
double integrate_panels(F&& f, double a, double b, int panels, const QuadratureRule& unit) {
    const double h = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        double part = 0.0;
        for (std::size_t i = 0; i < unit.size(); ++i)
            part += unit.weights[i] * f(lo + 0.5 * h * (unit.node(i) + 1.0));
        total += 0.5 * h * part;
    }
    return total;
}

}  // namespace stochlab
