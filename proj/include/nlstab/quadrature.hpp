#pragma once

#include <functional>
#include <vector>

namespace nlstab {

/// Nodes and weights of a fixed one-dimensional rule on [-1, 1].
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1], exact for polynomials of degree 2n-1.
QuadratureRule gauss_legendre(int n);

/// Result of an adaptive 1D integration.
struct IntegralResult {
    double value = 0.0;
    double error = 0.0;   // estimated absolute error
    double l1 = 0.0;      // integral of |f|, for relative error control
};

/// Adaptive double-exponential (tanh-sinh) integration on [a, b]. Handles
/// integrable algebraic endpoint singularities. The integrand is never
/// evaluated exactly at the endpoints.
IntegralResult integrate_tanh_sinh(const std::function<double(double)>& f, double a, double b,
                                   double rel_tol);

/// Same as integrate_tanh_sinh but backed by a separate integrator, for use
/// inside an integrand that is itself integrated with integrate_tanh_sinh.
IntegralResult integrate_tanh_sinh_inner(const std::function<double(double)>& f, double a, double b,
                                         double rel_tol);

/// Adaptive Gauss-Kronrod (15-point) integration for smooth integrands.
IntegralResult integrate_gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                                       double rel_tol);

}  // namespace nlstab
