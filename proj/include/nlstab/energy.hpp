#pragma once

// Ball potential, energy differences of star-shaped perturbations of the unit
// ball, ball-ball interactions, and the Monte Carlo cross-checks for them.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nlstab/sphere_harmonics.hpp"
#include "nlstab/spectral.hpp"

namespace nlstab {

/// A computed energy with its error and how it was obtained. For Monte Carlo
/// the error is one standard error; for quadrature it is an estimated bound.
struct EnergyEstimate {
    enum class Method { Quadrature, MonteCarlo, ClosedForm };

    double value = 0.0;
    double error = 0.0;
    Method method = Method::Quadrature;
    std::int64_t samples = 0;  // MC samples or quadrature nodes
    std::optional<std::uint64_t> seed;
};

std::string to_string(EnergyEstimate::Method method);

EnergyEstimate operator+(const EnergyEstimate& a, const EnergyEstimate& b);
EnergyEstimate operator-(const EnergyEstimate& a, const EnergyEstimate& b);
EnergyEstimate operator*(double s, const EnergyEstimate& a);

// ---------------------------------------------------------------------------
// Ball potential

/// int_{B_1} |r e_1 - y|^sigma dy for sigma > -d. Throws ConvergenceError when
/// the estimated error exceeds tol * max(1, |value|).
EnergyEstimate psi_sigma(double r, KernelExponent sigma, Dimension d, double tol);

/// psi(r) = psi_{-alpha}(r) + gamma psi_beta(r).
EnergyEstimate psi(double r, const ModelParams& params, double tol);

struct RadialProfile {
    std::vector<double> radii;
    std::vector<double> psi_values;
    std::vector<double> errors;
};

RadialProfile psi_profile(const std::vector<double>& radii, const ModelParams& params, double tol);

/// d/dr psi_sigma at r = 1 from the eigenvalue sequence: (mu_1 - mu_limit) / 2.
double psi_sigma_prime_spectral(KernelExponent sigma, Dimension d);

struct RadialDerivative {
    double value;     // finite-difference estimate
    double error;     // Richardson error estimate
    double spectral;  // value from the eigenvalues
};

/// Central differences of psi_sigma around r = 1 with Richardson extrapolation.
RadialDerivative psi_sigma_prime_at_one(KernelExponent sigma, Dimension d, double tol);

/// psi'(1) by finite differences, checked against the spectral value. Throws
/// ComputationError when they differ by more than 1e-6 (mixed abs/rel).
double psi_prime_at_one(const ModelParams& params, double tol);

// ---------------------------------------------------------------------------
// Star-shaped perturbations E_t = {s x : x in S^{d-1}, 0 <= s < 1 + t u(x)}

enum class ConstraintMode { Raw, VolumeCorrected, VolumeAndBarycenterCorrected };

std::string to_string(ConstraintMode mode);

class StarPerturbation {
public:
    /// Applies the requested corrections to the profile for amplitude t. The
    /// corrections shift the degree-0 and degree-1 coefficients only.
    StarPerturbation(HarmonicCoefficients profile, double t, ConstraintMode mode);

    const HarmonicCoefficients& coeffs() const noexcept { return coeffs_; }
    double amplitude() const noexcept { return t_; }
    ConstraintMode mode() const noexcept { return mode_; }
    int dim() const noexcept { return coeffs_.d; }

    /// u(x) of the corrected profile.
    double profile(const Vec3& x) const { return evaluate(coeffs_, x); }
    /// Boundary radius 1 + t u(x) in direction x.
    double radius(const Vec3& x) const { return 1.0 + t_ * profile(x); }
    /// sup |t u| sampled on a fine grid.
    double sup_deviation() const noexcept { return sup_tu_; }

    /// (1/d) int (1 + t u)^d, the volume of E_t.
    double volume() const;
    /// int_{E_t} x dx.
    Vec3 first_moment() const;

private:
    HarmonicCoefficients coeffs_;
    double t_;
    ConstraintMode mode_;
    double sup_tu_ = 0.0;
};

/// int_{S} (1 + t u)^{2d + sigma} dH.
double h_sigma(const StarPerturbation& u, KernelExponent sigma, const SphereGrid& grid);

/// h_sigma(t) - h_sigma(0), accurate for small t.
double h_sigma_increment(const StarPerturbation& u, KernelExponent sigma, const SphereGrid& grid);

/// Quadruple integral over S x S x [u(y), u(x)]^2 of
/// f(a, b, theta) = a^{d-1} b^{d-1} ((a-b)^2 + a b theta^2)^{sigma/2}, a = 1 + t r, b = 1 + t rho.
/// The outer integral over x uses the grid (and a finer one for the error
/// estimate); the integral over y is done in geodesic polar coordinates about x.
EnergyEstimate g_sigma(const StarPerturbation& u, KernelExponent sigma, const SphereGrid& grid, double tol);

/// J_sigma(E_t) - J_sigma(B_1) through the exact h/g decomposition.
EnergyEstimate delta_j_star(const StarPerturbation& u, KernelExponent sigma, const SphereGrid& grid,
                            double tol);

/// F_gamma(E_t) - F_gamma(B_1).
EnergyEstimate delta_f(const StarPerturbation& u, const ModelParams& params, const SphereGrid& grid,
                       double tol);

/// |E_t symmetric-difference B_1| (centered, no translation).
double asymmetry_star(const StarPerturbation& u, const SphereGrid& grid);

// ---------------------------------------------------------------------------
// Monte Carlo

/// Description of a set E through delta(x) = 1_E(x) - 1_{B_1}(x). The
/// support of delta must lie inside the sampled support region, and E inside
/// the ball of radius outer_radius.
struct DifferenceDomain {
    int d = 3;
    std::function<double(const Vec3&)> delta;
    std::function<Vec3(std::mt19937_64&)> sample_support;
    double support_volume = 0.0;
    double outer_radius = 1.0;
};

struct MonteCarloBreakdown {
    EnergyEstimate repulsive;   // J_{-alpha}(E) - J_{-alpha}(B_1)
    EnergyEstimate attractive;  // J_beta(E) - J_beta(B_1)
    EnergyEstimate total;       // repulsive + gamma attractive
};

/// Seeded Monte Carlo estimate of F(E) - F(B_1). Samples are processed in
/// fixed-size chunks with per-chunk generators derived from (seed, chunk).
MonteCarloBreakdown mc_energy_difference(const DifferenceDomain& domain, const ModelParams& params,
                                         std::int64_t n_samples, std::uint64_t seed);

MonteCarloBreakdown mc_energy_star_components(const StarPerturbation& u, const ModelParams& params,
                                              std::int64_t n_samples, std::uint64_t seed);

EnergyEstimate mc_energy_star(const StarPerturbation& u, const ModelParams& params,
                              std::int64_t n_samples, std::uint64_t seed);

/// Uniform point in the ball B_r(c) of R^d (d in {2, 3}).
Vec3 sample_in_ball(std::mt19937_64& rng, int d, const Vec3& c, double r);

// ---------------------------------------------------------------------------
// Ball interactions

struct InteractionOptions {
    double tol = 1e-9;
    std::int64_t samples = 1'000'000;
    std::uint64_t seed = 1;
};

/// I(F, G) = int_F int_G |x-y|^{-alpha} + gamma |x-y|^beta for balls F = B_{r1}(c1), G = B_{r2}(c2).
EnergyEstimate ball_ball_interaction(const Vec3& c1, double r1, const Vec3& c2, double r2,
                                     const ModelParams& params, const InteractionOptions& options);

/// Measure of the sphere of radius rho centered at 0 that lies inside B_delta(c), |c| = dist.
double sphere_ball_overlap(int d, double rho, double dist, double delta);

}  // namespace nlstab
