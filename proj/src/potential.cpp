#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "nlstab/energy.hpp"
#include "nlstab/errors.hpp"
#include "nlstab/quadrature.hpp"

namespace nlstab {

std::string to_string(EnergyEstimate::Method method) {
    switch (method) {
        case EnergyEstimate::Method::Quadrature: return "quadrature";
        case EnergyEstimate::Method::MonteCarlo: return "monte_carlo";
        case EnergyEstimate::Method::ClosedForm: return "closed_form";
    }
    return "unknown";
}

namespace {

EnergyEstimate combine(const EnergyEstimate& a, const EnergyEstimate& b, double sb) {
    EnergyEstimate out;
    out.value = a.value + sb * b.value;
    const bool mc = a.method == EnergyEstimate::Method::MonteCarlo ||
                    b.method == EnergyEstimate::Method::MonteCarlo;
    // Independent statistical errors add in quadrature, deterministic bounds linearly.
    out.error = mc ? std::hypot(a.error, sb * b.error) : a.error + std::abs(sb) * b.error;
    if (mc) {
        out.method = EnergyEstimate::Method::MonteCarlo;
    } else if (a.method == EnergyEstimate::Method::ClosedForm &&
               b.method == EnergyEstimate::Method::ClosedForm) {
        out.method = EnergyEstimate::Method::ClosedForm;
    } else {
        out.method = EnergyEstimate::Method::Quadrature;
    }
    out.samples = a.samples + b.samples;
    out.seed = a.seed ? a.seed : b.seed;
    return out;
}

// Internal tanh-sinh tolerance for a requested tolerance.
double inner_tol(double tol) { return std::max(1e-15, 0.1 * tol); }

void check_tol(const char* what, double value, double err, double tol) {
    if (!(err <= tol * std::max(1.0, std::abs(value)))) {
        throw ConvergenceError(std::string(what) + " did not reach tolerance", value, err);
    }
}

// ((1+x)^p - (1-x)^p) / p for 0 <= x <= 1 without cancellation; p = 0 is the log limit.
double power_gap(double x, double p) {
    const double a = std::log1p(x);
    if (x >= 1.0) {
        if (p > 0.0) return std::exp(p * a) / p;
        return std::numeric_limits<double>::infinity();
    }
    const double b = std::log1p(-x);
    if (p == 0.0) return a - b;
    return std::exp(p * b) * std::expm1(p * (a - b)) / p;
}

// Tanh-sinh error estimates are unreliable on very short intervals; there a
// cosine-mapped Gauss rule with an order-doubling error estimate is used.
IntegralResult integrate_piece(const std::function<double(double)>& f, double a, double b, double tol) {
    if (b - a > 1e-4) return integrate_tanh_sinh(f, a, b, tol);
    auto rule = [&](int n) {
        const QuadratureRule gr = gauss_legendre(n);
        const double h = 0.5 * (b - a);
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            const double th = 0.5 * std::numbers::pi * (gr.nodes[i] + 1.0);
            s += gr.weights[i] * f(a + h * (1.0 - std::cos(th))) * h * std::sin(th);
        }
        return 0.5 * std::numbers::pi * s;
    };
    IntegralResult out;
    out.value = rule(24);
    out.error = std::abs(out.value - rule(12));
    out.l1 = std::abs(out.value);
    return out;
}

// d = 3: the polar integral has a closed form, leaving a 1D integral in s.
IntegralResult psi_d3(double r, double sigma, double tol) {
    const double p = sigma + 2.0;
    auto f = [r, p](double s) {
        const double big = std::max(r, s);
        const double x = std::min(r, s) / big;
        return 2.0 * std::numbers::pi * s / r * std::pow(big, p) * power_gap(x, p);
    };
    if (r < 1.0) {
        IntegralResult a = integrate_tanh_sinh(f, 0.0, r, tol);
        const IntegralResult b = integrate_piece(f, r, 1.0, tol);
        a.value += b.value;
        a.error += b.error;
        a.l1 += b.l1;
        return a;
    }
    return integrate_tanh_sinh(f, 0.0, 1.0, tol);
}

// Any d: nested polar/radial integral.
IntegralResult psi_general(double r, double sigma, int d, double tol) {
    const double lower = (d - 1) * unit_ball_volume(d - 1);
    auto inner = [r, sigma, d, tol](double s) {
        auto g = [r, s, sigma, d](double th) {
            const double sh = std::sin(0.5 * th);
            const double q = (r - s) * (r - s) + 4.0 * r * s * sh * sh;
            return std::pow(q, 0.5 * sigma) * std::pow(std::sin(th), d - 2);
        };
        return std::pow(s, d - 1) * integrate_tanh_sinh_inner(g, 0.0, std::numbers::pi, 0.01 * tol).value;
    };
    IntegralResult out;
    if (r < 1.0) {
        out = integrate_tanh_sinh(inner, 0.0, r, tol);
        const IntegralResult b = integrate_piece(inner, r, 1.0, tol);
        out.value += b.value;
        out.error += b.error;
        out.l1 += b.l1;
    } else {
        out = integrate_tanh_sinh(inner, 0.0, 1.0, tol);
    }
    out.value *= lower;
    out.error *= lower;
    out.l1 *= lower;
    return out;
}

}  // namespace

EnergyEstimate operator+(const EnergyEstimate& a, const EnergyEstimate& b) { return combine(a, b, 1.0); }
EnergyEstimate operator-(const EnergyEstimate& a, const EnergyEstimate& b) { return combine(a, b, -1.0); }
EnergyEstimate operator*(double s, const EnergyEstimate& a) {
    EnergyEstimate out = a;
    out.value *= s;
    out.error *= std::abs(s);
    return out;
}

EnergyEstimate psi_sigma(double r, KernelExponent sigma, Dimension d, double tol) {
    const double s = sigma.value();
    if (!(s > -double(d.value())) || !std::isfinite(s)) {
        throw DomainError("psi_sigma requires sigma > -d");
    }
    if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("psi_sigma requires r >= 0");
    if (!(tol > 0.0)) throw DomainError("psi_sigma requires tol > 0");
    EnergyEstimate out;
    if (r == 0.0) {
        out.value = d.value() * unit_ball_volume(d) / (d.value() + s);
        out.method = EnergyEstimate::Method::ClosedForm;
        return out;
    }
    const IntegralResult res = d.value() == 3 ? psi_d3(r, s, inner_tol(tol))
                                              : psi_general(r, s, d.value(), inner_tol(tol));
    out.value = res.value;
    out.error = res.error;
    out.method = EnergyEstimate::Method::Quadrature;
    check_tol("psi_sigma", out.value, out.error, tol);
    return out;
}

EnergyEstimate psi(double r, const ModelParams& params, double tol) {
    const EnergyEstimate rep = psi_sigma(r, params.repulsive(), params.d(), tol);
    const EnergyEstimate att = psi_sigma(r, params.attractive(), params.d(), tol);
    return combine(rep, att, params.gamma());
}

RadialProfile psi_profile(const std::vector<double>& radii, const ModelParams& params, double tol) {
    RadialProfile p;
    p.radii = radii;
    for (double r : radii) {
        const EnergyEstimate e = psi(r, params, tol);
        p.psi_values.push_back(e.value);
        p.errors.push_back(e.error);
    }
    return p;
}

double psi_sigma_prime_spectral(KernelExponent sigma, Dimension d) {
    return 0.5 * (mu_k(sigma, 1, d) - mu_limit(sigma, d));
}

RadialDerivative psi_sigma_prime_at_one(KernelExponent sigma, Dimension d, double tol) {
    constexpr int kLevels = 7;
    constexpr double kH0 = 0.05;
    // Quadrature accuracy well below what the differences can resolve.
    const double qtol = std::min(tol, 1e-13);
    // Error terms of the central difference: integer powers of h (the second
    // derivative jumps across r = 1) and h^{p-1+j} from the |1 - r|^p term, p = sigma + d.
    std::vector<double> powers;
    const double p = sigma.value() + d.value();
    for (int j = 1; j <= kLevels; ++j) {
        powers.push_back(j);
        if (p - 1.0 > 0.0 && std::abs(p - std::round(p)) > 1e-12) powers.push_back(p - 1.0 + j - 1);
    }
    std::sort(powers.begin(), powers.end());
    std::vector<std::vector<double>> table(kLevels);
    double h = kH0;
    for (int i = 0; i < kLevels; ++i, h *= 0.5) {
        const double up = psi_sigma(1.0 + h, sigma, d, qtol).value;
        const double down = psi_sigma(1.0 - h, sigma, d, qtol).value;
        table[i].push_back((up - down) / (2.0 * h));
        for (int j = 1; j <= i; ++j) {
            const double f = std::exp2(powers[j - 1]) - 1.0;
            table[i].push_back(table[i][j - 1] + (table[i][j - 1] - table[i - 1][j - 1]) / f);
        }
    }
    RadialDerivative out{table[0][0], std::abs(table[1][1] - table[0][0]), psi_sigma_prime_spectral(sigma, d)};
    for (int i = 1; i < kLevels; ++i) {
        const double diff = std::abs(table[i][i] - table[i - 1][i - 1]);
        if (diff < out.error) {
            out.error = diff;
            out.value = table[i][i];
        }
    }
    return out;
}

double psi_prime_at_one(const ModelParams& params, double tol) {
    const RadialDerivative rep = psi_sigma_prime_at_one(params.repulsive(), params.d(), tol);
    const RadialDerivative att = psi_sigma_prime_at_one(params.attractive(), params.d(), tol);
    const double fd = rep.value + params.gamma() * att.value;
    const double spectral = rep.spectral + params.gamma() * att.spectral;
    if (std::abs(fd - spectral) > 1e-6 * std::max(1.0, std::abs(spectral))) {
        throw ComputationError("psi'(1) finite difference " + std::to_string(fd) +
                               " disagrees with the spectral value " + std::to_string(spectral));
    }
    return fd;
}

}  // namespace nlstab
