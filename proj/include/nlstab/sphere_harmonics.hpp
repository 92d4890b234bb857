#pragma once

// Quadrature grids on the unit sphere (d = 2, 3), a real orthonormal
// spherical-harmonic basis, and analysis/synthesis between sampled functions
// and harmonic coefficients.

#include <span>
#include <vector>

#include "nlstab/spectral.hpp"

namespace nlstab {

/// A point of R^d, d in {2, 3}. Unused trailing components are zero.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
double norm(const Vec3& a);

/// Number of real harmonics of degree k on the sphere of R^d (d in {2, 3}).
int harmonic_dimension(int d, int k);

/// Finite expansion u = sum_{k <= L} sum_i a_k^i Y_k^i. Entries are stored
/// degree by degree; index i runs from 1 to harmonic_dimension(d, k).
///
/// Index convention: i = 1 is the zonal (d = 3) or cosine (d = 2) harmonic;
/// for d = 3, i = 2m is the cos(m phi) and i = 2m + 1 the sin(m phi) harmonic.
/// With this ordering the degree-1 harmonics are sqrt(3 / 4 pi) (z, x, y).
struct HarmonicCoefficients {
    int d = 3;
    int degree_max = 0;
    std::vector<double> values;

    HarmonicCoefficients() = default;
    HarmonicCoefficients(int dim, int L);

    static int offset(int d, int k);
    static int size_for(int d, int L) { return offset(d, L + 1); }

    double& at(int k, int i);
    double at(int k, int i) const;

    /// Sum of squared coefficients, the L^2(sphere) norm squared of u.
    double l2_norm_squared() const;
    /// Sum of squared coefficients of degree k.
    double degree_energy(int k) const;
};

/// Tensor-product quadrature on the unit sphere. d = 2: uniform angles with
/// equal weights. d = 3: Gauss-Legendre in the polar cosine times uniform
/// azimuth (2n points), exact for spherical polynomials of degree <= 2n - 1.
struct SphereGrid {
    int d = 3;
    int resolution = 0;
    std::vector<Vec3> nodes;
    std::vector<double> weights;
    /// Polar/azimuth structure (d = 3) for fast basis tabulation.
    std::vector<double> polar_cos;
    std::vector<double> azimuth;

    std::size_t size() const { return nodes.size(); }
    /// Largest degree L for which analyze() is exact on band-limited input.
    int max_analysis_degree() const;
};

SphereGrid build_grid(int d, int resolution);

/// Values of a function at the nodes of a SphereGrid.
struct SphereFunction {
    std::vector<double> values;
};

/// Real orthonormal spherical harmonic Y_k^i evaluated at a unit vector.
double basis_eval(int d, int k, int i, const Vec3& x);

/// All basis values Y_k^i(x) for k <= L in HarmonicCoefficients layout.
std::vector<double> basis_all(int d, int L, const Vec3& x);

/// Evaluates the expansion at one direction.
double evaluate(const HarmonicCoefficients& coeffs, const Vec3& x);

/// Fourier coefficients a_k^i = sum_nodes w u Y_k^i. Requires the grid to
/// integrate products of degree-L harmonics exactly.
HarmonicCoefficients analyze(const SphereFunction& u, const SphereGrid& grid, int L);

SphereFunction synthesize(const HarmonicCoefficients& coeffs, const SphereGrid& grid);

/// Integral of a sampled function over the sphere.
double integrate(const SphereFunction& u, const SphereGrid& grid);

/// sum_k mu_k(sigma) sum_i (a_k^i)^2: the kernel seminorm
/// int int |x-y|^sigma |u(x) - u(y)|^2 over the sphere.
double seminorm_spectral(const HarmonicCoefficients& coeffs, KernelExponent sigma);

/// Orthonormal frame (e1, e2) completing a unit vector x (d = 3).
void complete_frame(const Vec3& x, Vec3& e1, Vec3& e2);

}  // namespace nlstab
