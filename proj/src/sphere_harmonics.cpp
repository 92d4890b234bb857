#include "nlstab/sphere_harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "nlstab/errors.hpp"
#include "nlstab/quadrature.hpp"

namespace nlstab {

namespace {

void require_sphere_dim(int d) {
    if (d != 2 && d != 3) throw UnsupportedDimension(d);
}

void require_index(int d, int k, int i) {
    if (k < 0 || i < 1 || i > harmonic_dimension(d, k)) {
        throw DomainError("invalid harmonic index (k=" + std::to_string(k) + ", i=" + std::to_string(i) +
                          ") for d=" + std::to_string(d));
    }
}

}  // namespace

double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

int harmonic_dimension(int d, int k) {
    require_sphere_dim(d);
    if (k < 0) return 0;
    if (k == 0) return 1;
    return d == 3 ? 2 * k + 1 : 2;
}

HarmonicCoefficients::HarmonicCoefficients(int dim, int L) : d(dim), degree_max(L) {
    require_sphere_dim(dim);
    if (L < 0) throw DomainError("degree_max must be >= 0");
    values.assign(static_cast<std::size_t>(size_for(dim, L)), 0.0);
}

int HarmonicCoefficients::offset(int d, int k) {
    require_sphere_dim(d);
    if (d == 3) return k * k;
    return k == 0 ? 0 : 2 * k - 1;
}

double& HarmonicCoefficients::at(int k, int i) {
    require_index(d, k, i);
    if (k > degree_max) throw DomainError("degree exceeds degree_max");
    return values[static_cast<std::size_t>(offset(d, k) + i - 1)];
}

double HarmonicCoefficients::at(int k, int i) const {
    require_index(d, k, i);
    if (k > degree_max) return 0.0;
    return values[static_cast<std::size_t>(offset(d, k) + i - 1)];
}

double HarmonicCoefficients::l2_norm_squared() const {
    double s = 0.0;
    for (double v : values) s += v * v;
    return s;
}

double HarmonicCoefficients::degree_energy(int k) const {
    if (k < 0 || k > degree_max) return 0.0;
    double s = 0.0;
    const int begin = offset(d, k);
    const int end = offset(d, k + 1);
    for (int j = begin; j < end; ++j) s += values[j] * values[j];
    return s;
}

int SphereGrid::max_analysis_degree() const {
    return d == 3 ? resolution - 1 : (resolution - 1) / 2;
}

SphereGrid build_grid(int d, int resolution) {
    require_sphere_dim(d);
    if (resolution < 4) throw DomainError("grid resolution must be >= 4");
    SphereGrid g;
    g.d = d;
    g.resolution = resolution;
    const double two_pi = 2.0 * std::numbers::pi;
    if (d == 2) {
        const double w = two_pi / resolution;
        for (int j = 0; j < resolution; ++j) {
            const double th = w * j;
            g.nodes.push_back(Vec3{std::cos(th), std::sin(th), 0.0});
            g.weights.push_back(w);
            g.azimuth.push_back(th);
        }
        return g;
    }
    const QuadratureRule gl = gauss_legendre(resolution);
    const int n_phi = 2 * resolution;
    const double dphi = two_pi / n_phi;
    g.polar_cos = gl.nodes;
    for (int j = 0; j < n_phi; ++j) g.azimuth.push_back(dphi * j);
    for (int i = 0; i < resolution; ++i) {
        const double ct = gl.nodes[i];
        const double st = std::sqrt((1.0 - ct) * (1.0 + ct));
        for (int j = 0; j < n_phi; ++j) {
            const double ph = g.azimuth[j];
            g.nodes.push_back(Vec3{st * std::cos(ph), st * std::sin(ph), ct});
            g.weights.push_back(gl.weights[i] * dphi);
        }
    }
    return g;
}

double basis_eval(int d, int k, int i, const Vec3& x) {
    require_index(d, k, i);
    if (d == 2) {
        if (k == 0) return 1.0 / std::sqrt(2.0 * std::numbers::pi);
        const double th = std::atan2(x.y, x.x);
        const double c = 1.0 / std::sqrt(std::numbers::pi);
        return i == 1 ? c * std::cos(k * th) : c * std::sin(k * th);
    }
    const double r = norm(x);
    const double theta = std::acos(std::clamp(x.z / r, -1.0, 1.0));
    const double phi = std::atan2(x.y, x.x);
    if (i == 1) return std::sph_legendre(k, 0, theta);
    const int m = i / 2;
    // std::sph_legendre carries the Condon-Shortley phase; strip it.
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    const double p = sign * std::numbers::sqrt2 * std::sph_legendre(k, m, theta);
    return (i % 2 == 0) ? p * std::cos(m * phi) : p * std::sin(m * phi);
}

std::vector<double> basis_all(int d, int L, const Vec3& x) {
    require_sphere_dim(d);
    std::vector<double> out(static_cast<std::size_t>(HarmonicCoefficients::size_for(d, L)), 0.0);
    if (d == 2) {
        const double c = 1.0 / std::sqrt(std::numbers::pi);
        out[0] = 1.0 / std::sqrt(2.0 * std::numbers::pi);
        const std::complex<double> z(x.x, x.y);
        std::complex<double> zk(1.0, 0.0);
        for (int k = 1; k <= L; ++k) {
            zk *= z;
            out[2 * k - 1] = c * zk.real();
            out[2 * k] = c * zk.imag();
        }
        return out;
    }
    // Normalized associated Legendre functions divided by sin^m(theta); the
    // sin^m cos(m phi) and sin^m sin(m phi) factors come from (x + i y)^m.
    const double t = x.z;
    const double inv4pi = 1.0 / (4.0 * std::numbers::pi);
    std::complex<double> zm(1.0, 0.0);
    const std::complex<double> z(x.x, x.y);
    double qmm = std::sqrt(inv4pi);
    for (int m = 0; m <= L; ++m) {
        if (m > 0) {
            qmm *= std::sqrt((2.0 * m + 1.0) / (2.0 * m));
            zm *= z;
        }
        const double fc = m == 0 ? 1.0 : std::numbers::sqrt2 * zm.real();
        const double fs = m == 0 ? 0.0 : std::numbers::sqrt2 * zm.imag();
        double q_prev = 0.0;
        double q = qmm;
        for (int l = m; l <= L; ++l) {
            if (l == m + 1) {
                q_prev = q;
                q = std::sqrt(2.0 * m + 3.0) * t * qmm;
            } else if (l > m + 1) {
                const double ll = l;
                const double a = std::sqrt((4.0 * ll * ll - 1.0) / (ll * ll - double(m) * m));
                const double b = std::sqrt(((ll - 1.0) * (ll - 1.0) - double(m) * m) /
                                           (4.0 * (ll - 1.0) * (ll - 1.0) - 1.0));
                const double next = a * (t * q - b * q_prev);
                q_prev = q;
                q = next;
            }
            const int base = l * l;
            if (m == 0) {
                out[base] = q;
            } else {
                out[base + 2 * m - 1] = q * fc;
                out[base + 2 * m] = q * fs;
            }
        }
    }
    return out;
}

double evaluate(const HarmonicCoefficients& coeffs, const Vec3& x) {
    const auto b = basis_all(coeffs.d, coeffs.degree_max, x);
    double s = 0.0;
    for (std::size_t j = 0; j < b.size(); ++j) s += coeffs.values[j] * b[j];
    return s;
}

HarmonicCoefficients analyze(const SphereFunction& u, const SphereGrid& grid, int L) {
    if (u.values.size() != grid.size()) {
        throw DomainError("sphere function size does not match the grid");
    }
    if (L > grid.max_analysis_degree()) {
        throw DomainError("grid resolution " + std::to_string(grid.resolution) +
                          " is insufficient for degree " + std::to_string(L));
    }
    HarmonicCoefficients c(grid.d, L);
    for (std::size_t n = 0; n < grid.size(); ++n) {
        const double wu = grid.weights[n] * u.values[n];
        if (wu == 0.0) continue;
        const auto b = basis_all(grid.d, L, grid.nodes[n]);
        for (std::size_t j = 0; j < b.size(); ++j) c.values[j] += wu * b[j];
    }
    return c;
}

SphereFunction synthesize(const HarmonicCoefficients& coeffs, const SphereGrid& grid) {
    if (coeffs.d != grid.d) throw DomainError("coefficient dimension does not match the grid");
    SphereFunction f;
    f.values.resize(grid.size());
    for (std::size_t n = 0; n < grid.size(); ++n) f.values[n] = evaluate(coeffs, grid.nodes[n]);
    return f;
}

double integrate(const SphereFunction& u, const SphereGrid& grid) {
    if (u.values.size() != grid.size()) {
        throw DomainError("sphere function size does not match the grid");
    }
    double s = 0.0;
    for (std::size_t n = 0; n < grid.size(); ++n) s += grid.weights[n] * u.values[n];
    return s;
}

double seminorm_spectral(const HarmonicCoefficients& coeffs, KernelExponent sigma) {
    const auto mu = mu_sequence(sigma, coeffs.degree_max, Dimension(coeffs.d));
    double s = 0.0;
    for (int k = 1; k <= coeffs.degree_max; ++k) s += mu[k] * coeffs.degree_energy(k);
    return s;
}

void complete_frame(const Vec3& x, Vec3& e1, Vec3& e2) {
    // Helper axis least aligned with x.
    Vec3 h{1.0, 0.0, 0.0};
    if (std::abs(x.y) < std::abs(x.x) && std::abs(x.y) <= std::abs(x.z)) {
        h = Vec3{0.0, 1.0, 0.0};
    } else if (std::abs(x.z) < std::abs(x.x)) {
        h = Vec3{0.0, 0.0, 1.0};
    }
    const double p = dot(h, x);
    e1 = Vec3{h.x - p * x.x, h.y - p * x.y, h.z - p * x.z};
    const double n1 = norm(e1);
    e1 = Vec3{e1.x / n1, e1.y / n1, e1.z / n1};
    e2 = Vec3{x.y * e1.z - x.z * e1.y, x.z * e1.x - x.x * e1.z, x.x * e1.y - x.y * e1.x};
}

}  // namespace nlstab
