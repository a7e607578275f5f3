#include "stochlab/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "stochlab/errors.hpp"

namespace stochlab {

QuadratureRule gauss_legendre(int order, double a, double b) {
    if (order < 1) throw ArgumentError("gauss_legendre: order must be positive");
    QuadratureRule rule{QuadratureKind::gauss_legendre, {}, {}};
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const double mid = 0.5 * (b + a), half = 0.5 * (b - a);
    const int m = (order + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < order; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
            }
            dp = order * (z * p1 - p2) / (z * z - 1.0);
            double dz = p1 / dp;
            z -= dz;
            if (std::fabs(dz) < 1e-16) break;
        }
        // recompute the derivative at the converged node
        double p1 = 1.0, p2 = 0.0;
        for (int j = 0; j < order; ++j) {
            double p3 = p2;
            p2 = p1;
            p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
        }
        dp = order * (z * p1 - p2) / (z * z - 1.0);
        const double w = 2.0 * half / ((1.0 - z * z) * dp * dp);
        rule.nodes[i] = mid - half * z;
        rule.nodes[order - 1 - i] = mid + half * z;
        rule.weights[i] = w;
        rule.weights[order - 1 - i] = w;
    }
    return rule;
}

QuadratureRule gauss_hermite(int order) {
    if (order < 1) throw ArgumentError("gauss_hermite: order must be positive");
    QuadratureRule rule{QuadratureKind::gauss_hermite, {}, {}};
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const double pim4 = std::pow(std::numbers::pi, -0.25);
    const int m = (order + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < m; ++i) {
        // standard initial guesses for the largest roots, then extrapolation
        if (i == 0)
            z = std::sqrt(2.0 * order + 1.0) - 1.85575 * std::pow(2.0 * order + 1.0, -0.16667);
        else if (i == 1)
            z -= 1.14 * std::pow(static_cast<double>(order), 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * rule.nodes[0].real();
        else if (i == 3)
            z = 1.91 * z - 0.91 * rule.nodes[1].real();
        else
            z = 2.0 * z - rule.nodes[i - 2].real();
        double pp = 0.0;
        for (int it = 0; it < 200; ++it) {
            double p1 = pim4, p2 = 0.0;
            for (int j = 0; j < order; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
            }
            pp = std::sqrt(2.0 * order) * p2;
            double dz = p1 / pp;
            z -= dz;
            if (std::fabs(dz) <= 1e-15 * std::max(1.0, std::fabs(z))) {
                p1 = pim4, p2 = 0.0;
                for (int j = 0; j < order; ++j) {
                    double p3 = p2;
                    p2 = p1;
                    p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
                }
                pp = std::sqrt(2.0 * order) * p2;
                break;
            }
        }
        rule.nodes[i] = z;
        rule.nodes[order - 1 - i] = -z;
        rule.weights[i] = 2.0 / (pp * pp);
        rule.weights[order - 1 - i] = rule.weights[i];
    }
    return rule;
}

ContourRule trapezoid_circle(int points, std::complex<double> center, double radius) {
    if (points < 2 || !(radius > 0)) throw ArgumentError("trapezoid_circle: bad size or radius");
    ContourRule rule;
    rule.nodes.resize(points);
    rule.weights.resize(points);
    for (int k = 0; k < points; ++k) {
        const double theta = 2.0 * std::numbers::pi * (k + 0.5) / points;
        const std::complex<double> e = std::polar(1.0, theta);
        rule.nodes[k] = center + radius * e;
        // dz = i r e dtheta; divided by 2 pi i
        rule.weights[k] = radius * e / static_cast<double>(points);
    }
    return rule;
}

}  // namespace stochlab
