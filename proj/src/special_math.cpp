#include "nlstab/special_math.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nlstab/errors.hpp"

namespace nlstab {

Dimension::Dimension(int d) : d_(d) {
    if (d < 2) {
        throw DomainError("dimension must be >= 2, got " + std::to_string(d));
    }
}

double log_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError("log_gamma requires a finite positive argument, got " + std::to_string(x));
    }
    return std::lgamma(x);
}

double unit_ball_volume(int d) {
    if (d < 0) {
        throw DomainError("unit_ball_volume requires d >= 0");
    }
    // Exact low-dimensional values keep the common cases at machine precision.
    switch (d) {
        case 0: return 1.0;
        case 1: return 2.0;
        case 2: return std::numbers::pi;
        case 3: return 4.0 * std::numbers::pi / 3.0;
        default: break;
    }
    const double half = 0.5 * d;
    return std::exp(half * std::log(std::numbers::pi) - log_gamma(half + 1.0));
}

double unit_sphere_area(int d) { return d * unit_ball_volume(d); }

BallGeometry ball_geometry(Dimension d) {
    const double vol = unit_ball_volume(d);
    return BallGeometry{d, vol, d.value() * vol, unit_ball_volume(d.value() - 1)};
}

double gegenbauer_eval(int k, double lambda, double t) {
    if (k < 0) {
        throw DomainError("gegenbauer_eval requires k >= 0");
    }
    if (!(lambda > -0.5)) {
        throw DomainError("gegenbauer_eval requires lambda > -1/2");
    }
    if (!(std::abs(t) <= 1.0)) {
        throw DomainError("gegenbauer_eval requires |t| <= 1");
    }
    if (k == 0) return 1.0;
    if (t == 1.0) return 1.0;
    // Normalized recurrence: (n + 2 lambda) P_{n+1} = 2 (n + lambda) t P_n - n P_{n-1}.
    double prev = 1.0;
    double cur = t;
    for (int n = 1; n < k; ++n) {
        const double next = (2.0 * (n + lambda) * t * cur - n * prev) / (n + 2.0 * lambda);
        prev = cur;
        cur = next;
    }
    return cur;
}

}  // namespace nlstab
