#include "nlstab/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>

#include "nlstab/errors.hpp"

namespace nlstab {

QuadratureRule gauss_legendre(int n) {
    if (n < 1) {
        throw DomainError("gauss_legendre requires n >= 1");
    }
    if (n == 1) {
        return QuadratureRule{{0.0}, {2.0}};
    }
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        // Recompute derivative at the converged node for the weight.
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) {
        rule.nodes[n / 2] = 0.0;
    }
    return rule;
}

IntegralResult integrate_tanh_sinh(const std::function<double(double)>& f, double a, double b,
                                   double rel_tol) {
    IntegralResult out;
    if (a == b) return out;
    static boost::math::quadrature::tanh_sinh<double> integrator(15);
    out.value = integrator.integrate(f, a, b, rel_tol, &out.error, &out.l1);
    return out;
}

IntegralResult integrate_tanh_sinh_inner(const std::function<double(double)>& f, double a, double b,
                                         double rel_tol) {
    IntegralResult out;
    if (a == b) return out;
    static boost::math::quadrature::tanh_sinh<double> integrator(15);
    out.value = integrator.integrate(f, a, b, rel_tol, &out.error, &out.l1);
    return out;
}

IntegralResult integrate_gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                                       double rel_tol) {
    IntegralResult out;
    if (a == b) return out;
    out.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 15, rel_tol,
                                                                             &out.error, &out.l1);
    return out;
}

}  // namespace nlstab
