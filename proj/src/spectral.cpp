#include "nlstab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "nlstab/errors.hpp"
#include "nlstab/quadrature.hpp"
#include "nlstab/sphere_harmonics.hpp"

namespace nlstab {

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// ln of the prefactor (d-1) omega_{d-1} 2^{d-1+s} G((d-1+s)/2) G((d-1)/2) / G((2d-2+s)/2).
double log_mu_limit(double s, int d) {
    const double dm1 = d - 1.0;
    return std::log(dm1 * unit_ball_volume(d - 1)) + (dm1 + s) * std::numbers::ln2 +
           log_gamma(0.5 * (dm1 + s)) + log_gamma(0.5 * dm1) - log_gamma(0.5 * (2.0 * dm1 + s));
}

// ln J_s(B_1) from the explicit Gamma expression.
double log_j_ball_explicit(double s, int d) {
    const double dd = d;
    const double num = dd * (dd - 1.0) * (dd - 1.0 + s) * unit_ball_volume(d) * unit_ball_volume(d - 1);
    const double den = (dd + s) * (2.0 * dd + s) * (2.0 * dd - 2.0 + s);
    return (dd + s) * std::numbers::ln2 + std::log(num / den) + log_gamma(0.5 * (dd - 1.0 + s)) +
           log_gamma(0.5 * (dd - 1.0)) - log_gamma(0.5 * (2.0 * dd - 2.0 + s));
}

// Pi_k(s) = prod_{j<k} (j - s/2) / (j + d - 1 + s/2), so that mu_k = P (1 - Pi_k).
double product_term(double s, int j, int d) { return (j - 0.5 * s) / (j + d - 1.0 + 0.5 * s); }

// Rel. tolerance for deciding that the finite maximum ties with kappa.
constexpr double kTieTol = 1e-12;

}  // namespace

ModelParams::ModelParams(int d, double alpha, double beta, double gamma)
    : d_(d), alpha_(alpha), beta_(beta), gamma_(gamma) {
    if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(gamma)) {
        throw InvalidParameters("parameters must be finite");
    }
    if (!(alpha > 0.0)) {
        throw InvalidParameters("alpha must be positive, got " + fmt(alpha));
    }
    if (alpha >= d - 1.0) {
        throw InvalidParameters("alpha = " + fmt(alpha) + " >= d-1 = " + std::to_string(d - 1) +
                                ": the unit ball is never stable for the functional in this range");
    }
    if (!(beta > 0.0)) {
        throw InvalidParameters("beta must be positive, got " + fmt(beta));
    }
    if (!(gamma > 0.0)) {
        throw InvalidParameters("gamma must be positive, got " + fmt(gamma));
    }
}

void require_admissible_exponent(KernelExponent sigma, Dimension d) {
    if (!(sigma.value() > -(d.value() - 1.0)) || !std::isfinite(sigma.value())) {
        throw DomainError("kernel exponent sigma = " + fmt(sigma.value()) + " must exceed -(d-1) = " +
                          std::to_string(1 - d.value()) +
                          "; the surface seminorm diverges and the spectral formula does not apply");
    }
}

double mu_limit(KernelExponent sigma, Dimension d) {
    require_admissible_exponent(sigma, d);
    return std::exp(log_mu_limit(sigma.value(), d));
}

double mu_k(KernelExponent sigma, int k, Dimension d) {
    require_admissible_exponent(sigma, d);
    if (k < 0) throw DomainError("degree k must be >= 0");
    if (k == 0) return 0.0;
    const double s = sigma.value();
    double prod = 1.0;
    for (int j = 0; j < k; ++j) prod *= product_term(s, j, d);
    return mu_limit(sigma, d) * (1.0 - prod);
}

std::vector<double> mu_sequence(KernelExponent sigma, int k_max, Dimension d) {
    require_admissible_exponent(sigma, d);
    if (k_max < 0) throw DomainError("k_max must be >= 0");
    const double p = mu_limit(sigma, d);
    const double s = sigma.value();
    std::vector<double> out(static_cast<std::size_t>(k_max) + 1, 0.0);
    double prod = 1.0;
    for (int k = 1; k <= k_max; ++k) {
        prod *= product_term(s, k - 1, d);
        out[k] = p * (1.0 - prod);
    }
    return out;
}

double mu_k_funk_hecke(KernelExponent sigma, int k, Dimension d, double tol) {
    require_admissible_exponent(sigma, d);
    if (d.value() != 2 && d.value() != 3) throw UnsupportedDimension(d.value());
    if (k < 0 || k > 50) throw DomainError("mu_k_funk_hecke supports 0 <= k <= 50");
    const double s = sigma.value();
    const int dd = d.value();
    const double lambda = 0.5 * (dd - 2);
    // Measure of the (d-2)-sphere of directions orthogonal to the pole.
    const double lower = (dd - 1) * unit_ball_volume(dd - 1);
    // Angle variable theta with t = cos theta: |x - y| = 2 sin(theta/2) and
    // (1 - t^2)^{(d-3)/2} dt = sin^{d-2}(theta) dtheta. The singularity sits at theta = 0.
    auto weight = [s, dd](double th) {
        return std::pow(2.0 * std::sin(0.5 * th), s) * std::pow(std::sin(th), dd - 2);
    };
    // 1 - G_k(t) vanishes to second order at the pole, so the integrand tends to 0 there.
    auto integrand = [&](double th) {
        const double gap = 1.0 - gegenbauer_eval(k, lambda, std::cos(th));
        if (gap == 0.0) return 0.0;
        return weight(th) * gap;
    };
    const IntegralResult eig = integrate_tanh_sinh(integrand, 0.0, std::numbers::pi, 1e-13);
    const double value = 2.0 * lower * eig.value;
    const double err = 2.0 * lower * eig.error;
    if (!(err <= tol * std::max(1.0, std::abs(value)))) {
        throw ConvergenceError("Funk-Hecke quadrature did not reach tolerance", value, err);
    }
    return value;
}

double j_ball(KernelExponent sigma, Dimension d) {
    require_admissible_exponent(sigma, d);
    const double s = sigma.value();
    const double dd = d.value();
    const double explicit_form = std::exp(log_j_ball_explicit(s, d));
    const double via_mu = dd * unit_ball_volume(d) / ((dd + s) * (2.0 * dd + s)) * mu_k(sigma, 1, d);
    if (rel_diff(explicit_form, via_mu) > 1e-12) {
        throw ComputationError("J_sigma(B_1) evaluations disagree: " + fmt(explicit_form) + " vs " +
                               fmt(via_mu));
    }
    return explicit_form;
}

double c_squared(KernelExponent sigma, Dimension d) {
    const double s = sigma.value();
    const double dd = d.value();
    const double c2 = (dd + s) * (2.0 * dd + s) / (dd * unit_ball_volume(d)) * j_ball(sigma, d);
    const double mu1 = mu_k(sigma, 1, d);
    if (rel_diff(c2, mu1) > 1e-12) {
        throw ComputationError("c^2 and mu_1 disagree: " + fmt(c2) + " vs " + fmt(mu1));
    }
    return c2;
}

double ratio_k(const ModelParams& params, int k) {
    if (k < 2) throw DomainError("ratio_k requires k >= 2");
    const Dimension d = params.d();
    const double rep = mu_k(params.repulsive(), k, d) - mu_k(params.repulsive(), 1, d);
    const double att = mu_k(params.attractive(), 1, d) - mu_k(params.attractive(), k, d);
    return rep / att;
}

double x_k(const ModelParams& params, int k) {
    if (k < 2) throw DomainError("x_k requires k >= 2");
    const double d = params.dim();
    const double a = params.alpha();
    const double b = params.beta();
    double num = 1.0;
    double den = 1.0;
    for (int j = 1; j < k; ++j) {
        num *= (j + 0.5 * a) / (j + 0.5 * (2.0 * d - 2.0 - a));
        den *= (j - 0.5 * b) / (j + 0.5 * (2.0 * d - 2.0 + b));
    }
    return (1.0 - num) / (1.0 - den);
}

double x2_closed_form(const ModelParams& params) {
    const double d = params.dim();
    return (d - 1.0 - params.alpha()) / (d - 1.0 + params.beta());
}

double x3_closed_form(const ModelParams& params) {
    const double d = params.dim();
    const double a = params.alpha();
    const double b = params.beta();
    return (d - 1.0 - a) * (2.0 * d + b) * (2.0 * d + 2.0 + b) /
           ((d - 1.0 + b) * (2.0 * d - a) * (2.0 * d + 2.0 - a));
}

double kappa_gamma_form(const ModelParams& params) {
    const double d = params.dim();
    const double a = params.alpha();
    const double b = params.beta();
    const double lg = log_gamma(0.5 * (d - 1.0 - a)) + log_gamma(0.5 * (2.0 * d - 2.0 + b)) -
                      log_gamma(0.5 * (d - 1.0 + b)) - log_gamma(0.5 * (2.0 * d - 2.0 - a));
    const double rational = a * (2.0 * d - 2.0 + b) / (b * (2.0 * d - 2.0 - a));
    return rational * std::exp(lg - (a + b) * std::numbers::ln2);
}

namespace {

// J_{-alpha}(B_1) / J_beta(B_1), formed in log space.
double j_ratio(const ModelParams& params) {
    return std::exp(log_j_ball_explicit(-params.alpha(), params.dim()) -
                    log_j_ball_explicit(params.beta(), params.dim()));
}

}  // namespace

double kappa_energy_form(const ModelParams& params) {
    const double d = params.dim();
    const double a = params.alpha();
    const double b = params.beta();
    return a * (d - a) * (2.0 * d - a) * (d - 1.0 + b) /
           (b * (d + b) * (2.0 * d + b) * (d - 1.0 - a)) * j_ratio(params);
}

double kappa(const ModelParams& params) {
    const double g = kappa_gamma_form(params);
    const double e = kappa_energy_form(params);
    if (rel_diff(g, e) > 1e-11) {
        throw ComputationError("kappa evaluations disagree: " + fmt(g) + " vs " + fmt(e));
    }
    return g;
}

double beta_star(Dimension d, double alpha) {
    const double dd = d.value();
    if (!(alpha > 0.0) || !(alpha < dd - 1.0)) {
        throw DomainError("beta_star requires 0 < alpha < d-1, got alpha = " + fmt(alpha));
    }
    return (6.0 * dd + 2.0 + alpha * (dd - 1.0)) / (dd - 1.0 - alpha);
}

namespace {

double gamma_star_upper_branch(const ModelParams& params) {
    const double d = params.dim();
    const double a = params.alpha();
    const double b = params.beta();
    return a * (d - a) * (2.0 * d + 2.0 + b) / (b * (d + b) * (2.0 * d + 2.0 - a)) * j_ratio(params);
}

}  // namespace

double gamma_star(const ModelParams& params) {
    const double k = kappa(params);
    if (params.beta() >= beta_star(params.d(), params.alpha())) {
        const double closed = gamma_star_upper_branch(params);
        const double check = k * x_k(params, 3);
        if (rel_diff(closed, check) > 1e-10) {
            throw ComputationError("gamma_* upper branch disagrees with kappa X_3: " + fmt(closed) +
                                   " vs " + fmt(check));
        }
        return closed;
    }
    const double closed = kappa_energy_form(params);
    if (rel_diff(closed, k) > 1e-10) {
        throw ComputationError("gamma_* lower branch disagrees with kappa");
    }
    return closed;
}

double gamma_star_star(const ModelParams& params) {
    const double d = params.dim();
    const double a = params.alpha();
    const double b = params.beta();
    const double closed = a * (d - a) / (b * (d + b)) * j_ratio(params);
    const double check = ratio_k(params, 2);
    if (rel_diff(closed, check) > 1e-10) {
        throw ComputationError("gamma_** disagrees with ratio_2: " + fmt(closed) + " vs " + fmt(check));
    }
    return closed;
}

std::string to_string(Regime regime) {
    return regime == Regime::BetaBelowStar ? "beta_below_star" : "beta_at_or_above_star";
}

Thresholds compute_thresholds(const ModelParams& params) {
    Thresholds t{};
    t.beta_star = beta_star(params.d(), params.alpha());
    t.kappa = kappa(params);
    t.gamma_star = gamma_star(params);
    t.gamma_star_star = gamma_star_star(params);
    const MassThresholds m = mass_thresholds(params);
    t.m_star = m.m_star;
    t.m_star_star = m.m_star_star;
    t.regime = params.beta() >= t.beta_star ? Regime::BetaAtOrAboveStar : Regime::BetaBelowStar;
    return t;
}

std::vector<SpectralRow> spectrum(const ModelParams& params, int k_max) {
    if (k_max < 0) throw DomainError("k_max must be >= 0");
    const auto rep = mu_sequence(params.repulsive(), k_max, params.d());
    const auto att = mu_sequence(params.attractive(), k_max, params.d());
    std::vector<SpectralRow> rows;
    rows.reserve(rep.size());
    // X_k products accumulated alongside; see x_k for the single-degree form.
    const double d = params.dim();
    const double a = params.alpha();
    const double b = params.beta();
    double num = 1.0;
    double den = 1.0;
    for (int k = 0; k <= k_max; ++k) {
        SpectralRow row{k, rep[k], att[k], std::nullopt, std::nullopt};
        if (k >= 2) {
            const int j = k - 1;
            num *= (j + 0.5 * a) / (j + 0.5 * (2.0 * d - 2.0 - a));
            den *= (j - 0.5 * b) / (j + 0.5 * (2.0 * d - 2.0 + b));
            row.ratio = (rep[k] - rep[1]) / (att[1] - att[k]);
            row.x_k = (1.0 - num) / (1.0 - den);
        }
        rows.push_back(row);
    }
    return rows;
}

BruteForceThresholds thresholds_bruteforce(const ModelParams& params, int k_max) {
    if (k_max < 3) throw DomainError("thresholds_bruteforce requires k_max >= 3");
    const auto rep = mu_sequence(params.repulsive(), k_max, params.d());
    const auto att = mu_sequence(params.attractive(), k_max, params.d());
    double max_v = -std::numeric_limits<double>::infinity();
    double min_v = std::numeric_limits<double>::infinity();
    int argmax = 2;
    int argmin = 2;
    for (int k = 2; k <= k_max; ++k) {
        const double r = (rep[k] - rep[1]) / (att[1] - att[k]);
        if (r > max_v) {
            max_v = r;
            argmax = k;
        }
        if (r < min_v) {
            min_v = r;
            argmin = k;
        }
    }
    const double kap = kappa(params);
    BruteForceThresholds out{};
    out.inf = min_v;
    out.argmin = argmin;
    out.max_finite = max_v;
    // A finite maximizer counts as the supremum if it beats kappa, or ties with it
    // well inside the range. A tie reached only at the end of the range is the
    // sequence creeping up to its limit.
    const bool beats = max_v > kap * (1.0 + kTieTol);
    const bool ties = max_v >= kap * (1.0 - kTieTol) && argmax <= k_max / 2;
    if (beats || ties) {
        out.sup = max_v;
        out.argmax = argmax;
    } else {
        out.sup = std::max(kap, max_v);
        out.argmax = std::nullopt;
    }
    return out;
}

MassThresholds mass_thresholds(const ModelParams& params) {
    const double w = unit_ball_volume(params.dim());
    const double e = params.dim() / (params.alpha() + params.beta());
    return MassThresholds{w * std::pow(gamma_star(params), e), w * std::pow(gamma_star_star(params), e)};
}

MassScaling mass_gamma_scaling(double mass, const ModelParams& params) {
    if (!(mass > 0.0) || !std::isfinite(mass)) {
        throw InvalidParameters("mass must be positive, got " + fmt(mass));
    }
    const double d = params.dim();
    const double q = mass / unit_ball_volume(params.dim());
    return MassScaling{std::pow(q, (params.alpha() + params.beta()) / d),
                       std::pow(q, 2.0 - params.alpha() / d)};
}

double gamma_to_mass(double gamma, const ModelParams& params) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw InvalidParameters("gamma must be positive, got " + fmt(gamma));
    }
    return unit_ball_volume(params.dim()) *
           std::pow(gamma, params.dim() / (params.alpha() + params.beta()));
}

double quad_form_weight(const ModelParams& params, int k) {
    if (k < 0) throw DomainError("degree k must be >= 0");
    if (k == 1) return 0.0;
    const Dimension d = params.d();
    const double rep = mu_k(params.repulsive(), 1, d) - mu_k(params.repulsive(), k, d);
    const double att = mu_k(params.attractive(), 1, d) - mu_k(params.attractive(), k, d);
    return rep + params.gamma() * att;
}

double quad_form(const ModelParams& params, const HarmonicCoefficients& coeffs) {
    if (coeffs.d != params.dim()) {
        throw DomainError("coefficient dimension does not match the model dimension");
    }
    double total = 0.0;
    for (int k = 0; k <= coeffs.degree_max; ++k) {
        const double e = coeffs.degree_energy(k);
        if (e != 0.0) total += quad_form_weight(params, k) * e;
    }
    return total;
}

std::string to_string(StabilityClass::Verdict verdict) {
    switch (verdict) {
        case StabilityClass::Verdict::StableMinimum: return "stable_minimum";
        case StabilityClass::Verdict::Indefinite: return "indefinite";
        case StabilityClass::Verdict::StableMaximum: return "stable_maximum";
    }
    return "unknown";
}

StabilityClass classify_stability(const ModelParams& params) {
    const double gs = gamma_star(params);
    const double gss = gamma_star_star(params);
    const double g = params.gamma();
    StabilityClass out{};
    if (g >= gs) {
        out.verdict = StabilityClass::Verdict::StableMinimum;
    } else if (g <= gss) {
        out.verdict = StabilityClass::Verdict::StableMaximum;
    } else {
        out.verdict = StabilityClass::Verdict::Indefinite;
    }
    out.margin = std::min(std::abs(g - gs), std::abs(g - gss));
    return out;
}

double quad_bound_constant(Dimension d, double alpha) {
    if (!(alpha > 0.0) || !(alpha < d.value() - 1.0)) {
        throw DomainError("quad_bound_constant requires 0 < alpha < d-1");
    }
    const KernelExponent s(-alpha);
    const double mu1 = mu_k(s, 1, d);
    const double c = alpha * mu1 / (2.0 * d.value() - alpha);
    const double direct = mu_k(s, 2, d) - mu1;
    if (rel_diff(c, direct) > 1e-12) {
        throw ComputationError("mu_2 - mu_1 disagrees with its closed form");
    }
    return c;
}

}  // namespace nlstab
