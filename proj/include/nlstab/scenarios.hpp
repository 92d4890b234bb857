#pragma once

// End-to-end checks assembled from the spectral and energy layers.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nlstab/energy.hpp"
#include "nlstab/spectral.hpp"

namespace nlstab {

struct CheckResult {
    std::string name;
    bool passed = false;
    double deviation = 0.0;
    std::string detail;
};

bool all_passed(const std::vector<CheckResult>& checks);

// ---------------------------------------------------------------------------

struct AppendixReport {
    int k_max = 0;
    Thresholds closed{};
    BruteForceThresholds brute{};
    double x2_product = 0.0;
    double x2_display = 0.0;
    double x3_product = 0.0;
    double x3_display = 0.0;
    std::vector<CheckResult> checks;
};

/// Infimum at k = 2, supremum location by regime, the kappa X_k factorization,
/// and closed-form against brute-force thresholds.
AppendixReport verify_appendix(const ModelParams& params, int k_max);

// ---------------------------------------------------------------------------

struct FugledeRow {
    double t = 0.0;
    EnergyEstimate delta_f;
    double quad_form = 0.0;  // QF_gamma of the corrected profile
    double defect = 0.0;     // |2 delta_f / t^2 - quad_form|
    double asymmetry = 0.0;
};

struct FugledeOptions {
    int grid_resolution = 16;
    double tol = 1e-9;
};

struct FugledeReport {
    int degree = 2;
    ConstraintMode mode = ConstraintMode::VolumeAndBarycenterCorrected;
    std::optional<int> expected_sign;  // +1 above gamma_*, -1 below gamma_**
    std::vector<FugledeRow> rows;
    std::vector<CheckResult> checks;
};

/// Energy change along the zonal degree-k mode (amplitude sign from profile_sign)
/// for each t, against the quadratic form. Degree 1 uses the volume correction
/// only, since removing the barycenter would remove the mode.
FugledeReport verify_fuglede(const ModelParams& params, int degree, const std::vector<double>& t_list,
                             const FugledeOptions& options = {}, double profile_sign = 1.0);

// ---------------------------------------------------------------------------

struct NecessaryConditionScan {
    RadialProfile profile;
    double psi_one = 0.0;
    double psi_one_error = 0.0;
    double max_interior_excess = 0.0;  // max_{r<1} psi(r) - psi(1)
    double interior_argmax = 0.0;
    double min_exterior_excess = 0.0;  // min_{R>1} psi(R) - psi(1)
    double exterior_argmin = 0.0;
    bool interior_violation = false;
    bool exterior_violation = false;
    bool holds = true;
};

/// 64 log-spaced radii in (0.02, 1) and 64 in (1, 2.5].
std::vector<double> default_scan_grid();

NecessaryConditionScan scan_necessary_condition(const ModelParams& params, const std::vector<double>& radii,
                                                double tol = 1e-10);

// ---------------------------------------------------------------------------

enum class BumpMode { InnerBump, OuterBump };
std::string to_string(BumpMode mode);

struct CounterexampleTrial {
    double delta = 0.0;
    Vec3 donor_center;     // D_1 = B_delta(donor_center), inside B_1
    Vec3 receiver_center;  // D_2 = B_delta(receiver_center), outside B_1
    EnergyEstimate delta_f;
    double leading_term = 0.0;  // 2 (psi(c2) - psi(c1)) |B_delta|
    double asymmetry = 0.0;
    bool negative = false;      // delta_f + 3 error < 0
};

struct CounterexampleOptions {
    double tol = 1e-9;
    std::int64_t samples = 1'000'000;
    std::uint64_t seed = 1;
};

struct CounterexampleReport {
    BumpMode mode = BumpMode::InnerBump;
    std::vector<CounterexampleTrial> trials;
    std::optional<std::size_t> found;  // index into trials
    NecessaryConditionScan scan;
    bool verdict() const { return found.has_value(); }
};

std::vector<double> default_bump_radii();

/// Moves a small ball of mass from where the potential is high inside B_1 to
/// where it is low outside. No negative energy change is an inconclusive
/// outcome, not an error.
CounterexampleReport find_counterexample(const ModelParams& params, const std::vector<double>& radii,
                                         const CounterexampleOptions& options = {});

/// Energy change of one trial re-estimated by a single Monte Carlo run over
/// E = (B_1 \ D_1) u D_2.
EnergyEstimate counterexample_mc(const ModelParams& params, const CounterexampleReport& report,
                                 std::size_t trial, std::int64_t samples, std::uint64_t seed);

// ---------------------------------------------------------------------------

/// Gaussian coefficients on degrees 1..degree_max (degree 0 left at zero),
/// scaled to unit L2 norm on the sphere. Deterministic in seed.
HarmonicCoefficients random_band_limited(int d, int degree_max, std::uint64_t seed);

/// Quadrature energy change of the raw star perturbation against the Monte
/// Carlo estimate; passes when they agree within 3 combined errors.
CheckResult star_identity_check(const ModelParams& params, const HarmonicCoefficients& coeffs, double t,
                                int grid_resolution, double tol, std::int64_t samples, std::uint64_t seed);

// ---------------------------------------------------------------------------

struct MassReport {
    double mass = 0.0;
    double gamma = 0.0;
    double energy_scale = 0.0;
    double radius = 0.0;  // radius of the ball of volume m
    Thresholds thresholds{};
    StabilityClass::Verdict verdict = StabilityClass::Verdict::Indefinite;
    bool at_boundary = false;
};

/// Thresholds and stability class in terms of the mass. Masses within 1e-12
/// relative of m_* or m_** count as the (stable) boundary.
MassReport mass_report(double mass, int d, double alpha, double beta);

}  // namespace nlstab
