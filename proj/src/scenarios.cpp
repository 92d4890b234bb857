#include "nlstab/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "nlstab/errors.hpp"

namespace nlstab {

namespace {

double rel_dev(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

CheckResult check(std::string name, bool passed, double deviation, std::string detail = {}) {
    return CheckResult{std::move(name), passed, deviation, std::move(detail)};
}

std::string num(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

}  // namespace

bool all_passed(const std::vector<CheckResult>& checks) {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

AppendixReport verify_appendix(const ModelParams& params, int k_max) {
    if (k_max < 100) throw DomainError("verify_appendix requires k_max >= 100");
    AppendixReport rep;
    rep.k_max = k_max;
    rep.closed = compute_thresholds(params);
    rep.brute = thresholds_bruteforce(params, k_max);
    rep.x2_product = x_k(params, 2);
    rep.x2_display = x2_closed_form(params);
    rep.x3_product = x_k(params, 3);
    rep.x3_display = x3_closed_form(params);

    rep.checks.push_back(check("inf_at_k2", rep.brute.argmin == 2, rep.brute.argmin - 2.0,
                               "argmin k = " + std::to_string(rep.brute.argmin)));

    const bool above = rep.closed.regime == Regime::BetaAtOrAboveStar;
    const bool sup_ok = above ? (rep.brute.argmax && *rep.brute.argmax == 3) : !rep.brute.argmax;
    rep.checks.push_back(check("sup_location", sup_ok, 0.0,
                               std::string("expected ") + (above ? "k=3" : "limit") + ", found " +
                                   (rep.brute.argmax ? "k=" + std::to_string(*rep.brute.argmax) : "limit")));

    double fact = 0.0;
    const double kap = rep.closed.kappa;
    for (const SpectralRow& row : spectrum(params, std::min(k_max, 1000))) {
        if (row.k >= 2) fact = std::max(fact, rel_dev(*row.ratio, kap * *row.x_k));
    }
    rep.checks.push_back(check("kappa_x_k_factorization", fact <= 1e-10, fact));

    const double dstar = rel_dev(rep.closed.gamma_star, rep.brute.sup);
    rep.checks.push_back(check("gamma_star_vs_bruteforce", dstar <= 1e-9, dstar));
    const double dss = rel_dev(rep.closed.gamma_star_star, rep.brute.inf);
    rep.checks.push_back(check("gamma_star_star_vs_bruteforce", dss <= 1e-9, dss));

    rep.checks.push_back(check("threshold_ordering", rep.closed.gamma_star_star < rep.closed.gamma_star,
                               rep.closed.gamma_star - rep.closed.gamma_star_star));

    // Both expressions for gamma_* must meet at beta = beta_*.
    const ModelParams at_star(params.dim(), params.alpha(), rep.closed.beta_star, params.gamma());
    const double x3 = x_k(at_star, 3);
    const double kap_star = kappa(at_star);
    const double cont = rel_dev(kap_star, kap_star * x3);
    rep.checks.push_back(check("gamma_star_branch_continuity", cont <= 1e-9, cont));

    const double d3 = rel_dev(rep.x3_display, rep.x3_product);
    rep.checks.push_back(check("x3_closed_form", d3 <= 1e-9, d3));
    return rep;
}

FugledeReport verify_fuglede(const ModelParams& params, int degree, const std::vector<double>& t_list,
                             const FugledeOptions& options, double profile_sign) {
    const int d = params.dim();
    if (d != 2 && d != 3) throw UnsupportedDimension(d);
    if (degree < 1) throw DomainError("verify_fuglede requires a mode degree >= 1");
    FugledeReport rep;
    rep.degree = degree;
    rep.mode = degree == 1 ? ConstraintMode::VolumeCorrected : ConstraintMode::VolumeAndBarycenterCorrected;
    if (degree >= 2) {
        if (params.gamma() >= gamma_star(params)) {
            rep.expected_sign = 1;
        } else if (params.gamma() <= gamma_star_star(params)) {
            rep.expected_sign = -1;
        }
    }
    HarmonicCoefficients base(d, degree);
    base.at(degree, 1) = profile_sign;
    const SphereGrid grid = build_grid(d, d == 3 ? options.grid_resolution : 4 * options.grid_resolution);

    std::vector<double> ts = t_list;
    std::sort(ts.begin(), ts.end(), std::greater<>());
    for (double t : ts) {
        const StarPerturbation u(base, t, rep.mode);
        FugledeRow row;
        row.t = t;
        row.delta_f = delta_f(u, params, grid, options.tol);
        row.quad_form = quad_form(params, u.coeffs());
        row.defect = std::abs(2.0 * row.delta_f.value / (t * t) - row.quad_form);
        row.asymmetry = asymmetry_star(u, grid);
        rep.rows.push_back(row);
    }

    if (rep.expected_sign) {
        bool ok = true;
        double worst = std::numeric_limits<double>::infinity();
        for (const FugledeRow& row : rep.rows) {
            const double signed_v = *rep.expected_sign * row.delta_f.value;
            ok = ok && signed_v > 3.0 * row.delta_f.error;
            worst = std::min(worst, signed_v);
        }
        rep.checks.push_back(check("energy_sign", ok, worst,
                                   *rep.expected_sign > 0 ? "expected positive" : "expected negative"));
    }
    if (rep.rows.size() >= 2) {
        double min_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < rep.rows.size(); ++i) {
            min_ratio = std::min(min_ratio, rep.rows[i].defect / rep.rows[i + 1].defect);
        }
        rep.checks.push_back(check("defect_decrease", min_ratio >= 1.7, min_ratio,
                                   "minimum defect ratio between consecutive t"));
    }
    return rep;
}

std::vector<double> default_scan_grid() {
    std::vector<double> r;
    const double lo = std::log(0.02);
    for (int i = 0; i < 64; ++i) r.push_back(std::exp(lo + (0.0 - lo) * i / 64.0));
    for (int i = 1; i <= 64; ++i) r.push_back(1.0 + 1.5 * i / 64.0);
    return r;
}

NecessaryConditionScan scan_necessary_condition(const ModelParams& params, const std::vector<double>& radii,
                                                double tol) {
    NecessaryConditionScan scan;
    scan.profile = psi_profile(radii, params, tol);
    const EnergyEstimate one = psi(1.0, params, tol);
    scan.psi_one = one.value;
    scan.psi_one_error = one.error;
    scan.max_interior_excess = -std::numeric_limits<double>::infinity();
    scan.min_exterior_excess = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double r = radii[i];
        const double excess = scan.profile.psi_values[i] - one.value;
        const double band = 3.0 * (scan.profile.errors[i] + one.error);
        if (r < 1.0) {
            if (excess > scan.max_interior_excess) {
                scan.max_interior_excess = excess;
                scan.interior_argmax = r;
            }
            scan.interior_violation = scan.interior_violation || excess > band;
        } else if (r > 1.0) {
            if (excess < scan.min_exterior_excess) {
                scan.min_exterior_excess = excess;
                scan.exterior_argmin = r;
            }
            scan.exterior_violation = scan.exterior_violation || excess < -band;
        }
    }
    scan.holds = !scan.interior_violation && !scan.exterior_violation;
    return scan;
}

std::string to_string(BumpMode mode) { return mode == BumpMode::InnerBump ? "inner_bump" : "outer_bump"; }

std::vector<double> default_bump_radii() { return {0.02, 0.04, 0.06, 0.08, 0.1}; }

CounterexampleReport find_counterexample(const ModelParams& params, const std::vector<double>& radii,
                                         const CounterexampleOptions& options) {
    const int d = params.dim();
    if (d != 2 && d != 3) throw UnsupportedDimension(d);
    CounterexampleReport rep;
    rep.scan = scan_necessary_condition(params, default_scan_grid(), 0.1 * options.tol);
    rep.mode = (!rep.scan.interior_violation && rep.scan.exterior_violation) ? BumpMode::OuterBump
                                                                             : BumpMode::InnerBump;
    const Vec3 unit_center{};
    InteractionOptions io{options.tol, options.samples, options.seed};
    for (double delta : radii) {
        if (!(delta > 0.0) || !(delta < 0.5)) throw DomainError("bump radius must lie in (0, 1/2)");
        CounterexampleTrial trial;
        trial.delta = delta;
        if (rep.mode == BumpMode::InnerBump) {
            trial.donor_center = Vec3{std::min(rep.scan.interior_argmax, 1.0 - delta), 0.0, 0.0};
            trial.receiver_center = Vec3{1.0 + delta, 0.0, 0.0};
        } else {
            trial.donor_center = Vec3{1.0 - delta, 0.0, 0.0};
            trial.receiver_center = Vec3{std::max(rep.scan.exterior_argmin, 1.0 + delta), 0.0, 0.0};
        }
        const EnergyEstimate b_d2 = ball_ball_interaction(unit_center, 1.0, trial.receiver_center, delta, params, io);
        const EnergyEstimate b_d1 = ball_ball_interaction(unit_center, 1.0, trial.donor_center, delta, params, io);
        const EnergyEstimate d1_d2 =
            ball_ball_interaction(trial.donor_center, delta, trial.receiver_center, delta, params, io);
        const EnergyEstimate d1 = ball_ball_interaction(trial.donor_center, delta, trial.donor_center, delta, params, io);
        trial.delta_f = 2.0 * b_d2 - 2.0 * b_d1 - 2.0 * d1_d2 + 2.0 * d1;
        const double bump_vol = unit_ball_volume(d) * std::pow(delta, d);
        trial.asymmetry = 2.0 * bump_vol;
        trial.leading_term = 2.0 *
                             (psi(norm(trial.receiver_center), params, options.tol).value -
                              psi(norm(trial.donor_center), params, options.tol).value) *
                             bump_vol;
        trial.negative = trial.delta_f.value + 3.0 * trial.delta_f.error < 0.0;
        if (trial.negative && !rep.found) rep.found = rep.trials.size();
        rep.trials.push_back(trial);
    }
    return rep;
}

EnergyEstimate counterexample_mc(const ModelParams& params, const CounterexampleReport& report,
                                 std::size_t trial, std::int64_t samples, std::uint64_t seed) {
    const CounterexampleTrial& tr = report.trials.at(trial);
    const int d = params.dim();
    const double delta = tr.delta;
    const Vec3 c1 = tr.donor_center;
    const Vec3 c2 = tr.receiver_center;
    auto inside = [delta](const Vec3& x, const Vec3& c) {
        const Vec3 v{x.x - c.x, x.y - c.y, x.z - c.z};
        return dot(v, v) < delta * delta;
    };
    DifferenceDomain dom;
    dom.d = d;
    dom.support_volume = 2.0 * unit_ball_volume(d) * std::pow(delta, d);
    dom.outer_radius = std::max(1.0, norm(c2) + delta);
    dom.delta = [=](const Vec3& x) { return (inside(x, c2) ? 1.0 : 0.0) - (inside(x, c1) ? 1.0 : 0.0); };
    dom.sample_support = [=](std::mt19937_64& rng) {
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        return sample_in_ball(rng, d, u01(rng) < 0.5 ? c1 : c2, delta);
    };
    return mc_energy_difference(dom, params, samples, seed).total;
}

HarmonicCoefficients random_band_limited(int d, int degree_max, std::uint64_t seed) {
    if (degree_max < 1) throw DomainError("random_band_limited requires degree_max >= 1");
    HarmonicCoefficients c(d, degree_max);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n01(0.0, 1.0);
    for (int k = 1; k <= degree_max; ++k) {
        for (int i = 1; i <= harmonic_dimension(d, k); ++i) c.at(k, i) = n01(rng);
    }
    const double norm2 = c.l2_norm_squared();
    for (double& v : c.values) v /= std::sqrt(norm2);
    return c;
}

CheckResult star_identity_check(const ModelParams& params, const HarmonicCoefficients& coeffs, double t,
                                int grid_resolution, double tol, std::int64_t samples, std::uint64_t seed) {
    const StarPerturbation u(coeffs, t, ConstraintMode::Raw);
    const SphereGrid grid = build_grid(params.dim(), grid_resolution);
    const EnergyEstimate quad = delta_f(u, params, grid, tol);
    const EnergyEstimate mc = mc_energy_star(u, params, samples, seed);
    const double sigma = std::hypot(quad.error, mc.error);
    const double z = std::abs(quad.value - mc.value) / sigma;
    return check("star_identity_vs_monte_carlo", z <= 3.0, z,
                 "quadrature " + num(quad.value) + ", monte carlo " + num(mc.value) + " +- " + num(mc.error));
}

MassReport mass_report(double mass, int d, double alpha, double beta) {
    const ModelParams base(d, alpha, beta, 1.0);
    const MassScaling sc = mass_gamma_scaling(mass, base);
    MassReport rep;
    rep.mass = mass;
    rep.gamma = sc.gamma;
    rep.energy_scale = sc.energy_scale;
    rep.radius = std::pow(mass / unit_ball_volume(d), 1.0 / d);
    rep.thresholds = compute_thresholds(base);
    const double ms = rep.thresholds.m_star;
    const double mss = rep.thresholds.m_star_star;
    constexpr double kBoundary = 1e-12;
    const bool at_star = std::abs(mass - ms) <= kBoundary * ms;
    const bool at_star_star = std::abs(mass - mss) <= kBoundary * mss;
    rep.at_boundary = at_star || at_star_star;
    if (mass >= ms || at_star) {
        rep.verdict = StabilityClass::Verdict::StableMinimum;
    } else if (mass <= mss || at_star_star) {
        rep.verdict = StabilityClass::Verdict::StableMaximum;
    } else {
        rep.verdict = StabilityClass::Verdict::Indefinite;
    }
    return rep;
}

}  // namespace nlstab
