#pragma once

// Spectrum of the second variation of the attractive-repulsive energy at the
// unit ball: the eigenvalue sequences mu_k(sigma), ball self-energies,
// the ratio sequence and its factorization kappa * X_k, and the stability
// thresholds derived from them.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nlstab/special_math.hpp"

namespace nlstab {

struct HarmonicCoefficients;

/// Exponent of the power kernel r^sigma. Repulsive kernels use sigma = -alpha,
/// attractive kernels sigma = beta.
class KernelExponent {
public:
    enum class SignClass { Repulsive, Neutral, Attractive };

    explicit constexpr KernelExponent(double sigma) : sigma_(sigma) {}
    constexpr double value() const noexcept { return sigma_; }
    constexpr SignClass sign_class() const noexcept {
        return sigma_ < 0.0 ? SignClass::Repulsive
                            : (sigma_ > 0.0 ? SignClass::Attractive : SignClass::Neutral);
    }

private:
    double sigma_;
};

/// Problem instance: dimension d, repulsive exponent alpha in (0, d-1),
/// attractive exponent beta > 0 and coupling gamma > 0. Validated on
/// construction and immutable afterwards.
class ModelParams {
public:
    ModelParams(int d, double alpha, double beta, double gamma = 1.0);

    Dimension d() const noexcept { return d_; }
    int dim() const noexcept { return d_.value(); }
    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_; }
    double gamma() const noexcept { return gamma_; }

    KernelExponent repulsive() const noexcept { return KernelExponent(-alpha_); }
    KernelExponent attractive() const noexcept { return KernelExponent(beta_); }

    ModelParams with_gamma(double gamma) const { return ModelParams(d_.value(), alpha_, beta_, gamma); }

private:
    Dimension d_;
    double alpha_;
    double beta_;
    double gamma_;
};

/// Throws DomainError unless sigma > -(d-1).
void require_admissible_exponent(KernelExponent sigma, Dimension d);

// ---------------------------------------------------------------------------
// Eigenvalue sequences

/// k -> infinity limit of mu_k(sigma); also the prefactor of the closed form.
double mu_limit(KernelExponent sigma, Dimension d);

/// mu_k(sigma): coefficient of the degree-k harmonic in the kernel seminorm on
/// the unit sphere. mu_0 = 0.
double mu_k(KernelExponent sigma, int k, Dimension d);

/// mu_0 .. mu_{k_max}, computed with a running product (O(k_max)).
std::vector<double> mu_sequence(KernelExponent sigma, int k_max, Dimension d);

/// Independent evaluation of mu_k through the Funk-Hecke formula: mu_k = 2 S - 2 lambda_k
/// with S the kernel mass on the sphere and lambda_k the Funk-Hecke eigenvalue,
/// both by adaptive 1D quadrature. d in {2, 3}, k <= 50. Throws ConvergenceError
/// when the quadrature error estimate exceeds tol.
double mu_k_funk_hecke(KernelExponent sigma, int k, Dimension d, double tol = 1e-10);

/// J_sigma(B_1) = int_{B_1} int_{B_1} |x-y|^sigma dx dy. Evaluated through mu_1 and
/// through the explicit Gamma-function expression; the two must agree to 1e-12.
double j_ball(KernelExponent sigma, Dimension d);

/// Nonlocal curvature constant c^2_sigma of the unit sphere, from J_sigma(B_1).
double c_squared(KernelExponent sigma, Dimension d);

// ---------------------------------------------------------------------------
// Ratio sequence and thresholds

/// (mu_k(-alpha) - mu_1(-alpha)) / (mu_1(beta) - mu_k(beta)) for k >= 2.
double ratio_k(const ModelParams& params, int k);

/// Normalized ratio sequence X_k (k >= 2) from its product form.
double x_k(const ModelParams& params, int k);

/// Displayed closed forms of X_2 and X_3, kept only as cross-checks of the
/// product form (the X_2 display does not match the product; see report).
double x2_closed_form(const ModelParams& params);
double x3_closed_form(const ModelParams& params);

/// kappa(d, alpha, beta) from the Gamma-function form.
double kappa_gamma_form(const ModelParams& params);
/// kappa(d, alpha, beta) from the ratio of ball energies.
double kappa_energy_form(const ModelParams& params);
/// kappa evaluated both ways; throws ComputationError when they differ by > 1e-11 relative.
double kappa(const ModelParams& params);

/// Attraction exponent separating the two regimes of the supremum.
double beta_star(Dimension d, double alpha);

double gamma_star(const ModelParams& params);
double gamma_star_star(const ModelParams& params);

enum class Regime { BetaBelowStar, BetaAtOrAboveStar };
std::string to_string(Regime regime);

struct Thresholds {
    double gamma_star;
    double gamma_star_star;
    double beta_star;
    double m_star;
    double m_star_star;
    double kappa;
    Regime regime;
};

Thresholds compute_thresholds(const ModelParams& params);

struct SpectralRow {
    int k;
    double mu_rep;
    double mu_att;
    std::optional<double> ratio;  // k >= 2 only
    std::optional<double> x_k;    // k >= 2 only
};

/// Rows k = 0 .. k_max of the stability spectrum.
std::vector<SpectralRow> spectrum(const ModelParams& params, int k_max);

/// Brute-force extremes of ratio_k over 2 <= k <= k_max with kappa (the k -> infinity
/// limit) as an extra supremum candidate.
struct BruteForceThresholds {
    double sup;
    double inf;
    std::optional<int> argmax;  // empty when the supremum is the limit kappa
    int argmin;
    double max_finite;          // largest ratio_k over the finite range
};

BruteForceThresholds thresholds_bruteforce(const ModelParams& params, int k_max);

struct MassThresholds {
    double m_star;
    double m_star_star;
};

MassThresholds mass_thresholds(const ModelParams& params);

/// Rescaling of a mass-m problem to the unit-ball volume: gamma = (m/omega_d)^{(alpha+beta)/d}
/// and F_1(E) = energy_scale * F_gamma(E~).
struct MassScaling {
    double gamma;
    double energy_scale;
};

MassScaling mass_gamma_scaling(double mass, const ModelParams& params);
/// Inverse of mass_gamma_scaling: the mass whose rescaled coupling is gamma.
double gamma_to_mass(double gamma, const ModelParams& params);

/// Bracket multiplying (a_k^i)^2 in the spectral form of the quadratic form.
double quad_form_weight(const ModelParams& params, int k);

/// Second-variation quadratic form of F_gamma at the unit ball.
double quad_form(const ModelParams& params, const HarmonicCoefficients& coeffs);

struct StabilityClass {
    enum class Verdict { StableMinimum, Indefinite, StableMaximum };
    Verdict verdict;
    double margin;  // distance of gamma to the nearest threshold
};

std::string to_string(StabilityClass::Verdict verdict);

/// StableMinimum iff gamma >= gamma_*, StableMaximum iff gamma <= gamma_**.
StabilityClass classify_stability(const ModelParams& params);

/// mu_2(-alpha) - mu_1(-alpha) = alpha mu_1(-alpha) / (2d - alpha).
double quad_bound_constant(Dimension d, double alpha);

}  // namespace nlstab
