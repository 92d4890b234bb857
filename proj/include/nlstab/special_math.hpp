#pragma once

// Gamma function, ball/sphere measures and normalized ultraspherical polynomials.

namespace nlstab {

/// Ambient dimension of the problem, d >= 2.
class Dimension {
public:
    explicit Dimension(int d);
    int value() const noexcept { return d_; }
    operator int() const noexcept { return d_; }

private:
    int d_;
};

/// ln Gamma(x) for x > 0. Throws DomainError otherwise.
double log_gamma(double x);

/// Volume of the unit ball in R^d, pi^{d/2} / Gamma(d/2 + 1). Valid for d >= 0.
double unit_ball_volume(int d);

/// (d-1)-dimensional measure of the unit sphere in R^d, d * omega_d.
double unit_sphere_area(int d);

struct BallGeometry {
    Dimension d;
    double volume;              // omega_d
    double surface_area;        // d * omega_d
    double lower_sphere_area;   // omega_{d-1}
};

BallGeometry ball_geometry(Dimension d);

/// Degree-k ultraspherical polynomial with parameter lambda > -1/2, scaled so
/// that its value at t = 1 is 1. lambda = 0 gives the Chebyshev polynomial T_k
/// (the normalized limit), lambda = 1/2 the Legendre polynomial P_k.
double gegenbauer_eval(int k, double lambda, double t);

}  // namespace nlstab
