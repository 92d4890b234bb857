#include <algorithm>
#include <cmath>
#include <numbers>

#include "nlstab/energy.hpp"
#include "nlstab/errors.hpp"
#include "nlstab/quadrature.hpp"

namespace nlstab {

namespace {

bool is_unit_ball(const Vec3& c, double r) { return r == 1.0 && c.x == 0.0 && c.y == 0.0 && c.z == 0.0; }

Vec3 sub(const Vec3& a, const Vec3& b) { return Vec3{a.x - b.x, a.y - b.y, a.z - b.z}; }

// int_{B_delta(c)} psi(|x|) dx by integrating psi against the overlap of
// origin-centered spheres with the ball.
EnergyEstimate unit_ball_with(const Vec3& c, double delta, const ModelParams& params, double tol) {
    const int d = params.dim();
    const double dist = norm(c);
    const double lo = std::max(0.0, dist - delta);
    const double hi = dist + delta;
    double quad_err = 0.0;
    auto f = [&](double rho) {
        const double area = sphere_ball_overlap(d, rho, dist, delta);
        if (area == 0.0) return 0.0;
        return area * psi(rho, params, 0.01 * tol).value;
    };
    // Breakpoints: full-sphere region ends at delta - dist; psi'' jumps at 1.
    std::vector<double> cuts{lo};
    for (double b : {delta - dist, 1.0}) {
        if (b > lo && b < hi) cuts.push_back(b);
    }
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    // Gauss-Legendre in theta with rho = a + (b - a)(1 - cos theta) / 2, which
    // smooths the square-root endpoint behavior of the overlap in d = 2.
    auto piece = [&](double a, double b, int n) {
        const QuadratureRule gr = gauss_legendre(n);
        const double h = 0.5 * (b - a);
        double s = 0.0;
        for (int i = 0; i < n; ++i) {
            const double th = 0.5 * std::numbers::pi * (gr.nodes[i] + 1.0);
            s += gr.weights[i] * f(a + h * (1.0 - std::cos(th))) * h * std::sin(th);
        }
        return 0.5 * std::numbers::pi * s;
    };
    double value = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double prev = piece(cuts[i], cuts[i + 1], 16);
        double cur = prev;
        double err = 0.0;
        for (int n = 32; n <= 256; n *= 2) {
            cur = piece(cuts[i], cuts[i + 1], n);
            err = std::abs(cur - prev);
            if (err <= 0.1 * tol * std::max(1.0, std::abs(cur))) break;
            prev = cur;
        }
        value += cur;
        quad_err += err;
    }
    // Pointwise psi errors are relative at the 0.01 tol level.
    const double psi_err = 0.01 * tol * std::abs(value);
    EnergyEstimate out;
    out.value = value;
    out.error = quad_err + psi_err;
    out.method = EnergyEstimate::Method::Quadrature;
    if (!(out.error <= tol * std::max(1.0, std::abs(value)))) {
        throw ConvergenceError("ball interaction quadrature did not reach tolerance", value, out.error);
    }
    return out;
}

struct BallNodes {
    std::vector<Vec3> points;
    std::vector<double> weights;
};

// Product Gauss rule on B_r(c): radial Gauss in s with weight s^{d-1}, Gauss in
// the polar cosine and a uniform azimuth rule (d = 3), uniform angles (d = 2).
BallNodes ball_rule(int d, const Vec3& c, double r, int n) {
    BallNodes out;
    const QuadratureRule gr = gauss_legendre(n);
    const int n_phi = 2 * n;
    const double dphi = 2.0 * std::numbers::pi / n_phi;
    for (int a = 0; a < n; ++a) {
        const double s = 0.5 * r * (gr.nodes[a] + 1.0);
        const double ws = 0.5 * r * gr.weights[a] * std::pow(s, d - 1);
        if (d == 2) {
            for (int b = 0; b < n_phi; ++b) {
                const double ph = dphi * b;
                out.points.push_back(Vec3{c.x + s * std::cos(ph), c.y + s * std::sin(ph), 0.0});
                out.weights.push_back(ws * dphi);
            }
            continue;
        }
        for (int p = 0; p < n; ++p) {
            const double ct = gr.nodes[p];
            const double st = std::sqrt((1.0 - ct) * (1.0 + ct));
            for (int b = 0; b < n_phi; ++b) {
                const double ph = dphi * b;
                out.points.push_back(
                    Vec3{c.x + s * st * std::cos(ph), c.y + s * st * std::sin(ph), c.z + s * ct});
                out.weights.push_back(ws * gr.weights[p] * dphi);
            }
        }
    }
    return out;
}

double product_rule(const BallNodes& f, const BallNodes& g, const ModelParams& params) {
    const double a = params.alpha();
    const double b = params.beta();
    const double gam = params.gamma();
    double total = 0.0;
    for (std::size_t i = 0; i < f.points.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < g.points.size(); ++j) {
            const double dist = norm(sub(f.points[i], g.points[j]));
            row += g.weights[j] * (std::pow(dist, -a) + gam * std::pow(dist, b));
        }
        total += f.weights[i] * row;
    }
    return total;
}

EnergyEstimate separated_balls(const Vec3& c1, double r1, const Vec3& c2, double r2,
                               const ModelParams& params, double tol) {
    const int d = params.dim();
    double prev = 0.0;
    EnergyEstimate out;
    out.method = EnergyEstimate::Method::Quadrature;
    for (int n = 6; n <= 14; n += 4) {
        const double v = product_rule(ball_rule(d, c1, r1, n), ball_rule(d, c2, r2, n), params);
        if (n > 6) {
            out.value = v;
            out.error = std::abs(v - prev);
            out.samples = static_cast<std::int64_t>(n) * n * n;
            if (out.error <= tol * std::max(1.0, std::abs(v))) return out;
        }
        prev = v;
    }
    throw ConvergenceError("ball-ball product rule did not reach tolerance", out.value, out.error);
}

EnergyEstimate mc_balls(const Vec3& c1, double r1, const Vec3& c2, double r2, const ModelParams& params,
                        std::int64_t n, std::uint64_t seed) {
    const int d = params.dim();
    const double vol = unit_ball_volume(d);
    const double scale = vol * std::pow(r1, d) * vol * std::pow(r2, d);
    double sum = 0.0;
    double sq = 0.0;
    constexpr std::int64_t kChunk = 1 << 16;
    for (std::int64_t chunk = 0; chunk * kChunk < n; ++chunk) {
        const auto cc = static_cast<std::uint64_t>(chunk);
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(cc), static_cast<std::uint32_t>(cc >> 32), 0xba11u};
        std::mt19937_64 rng(seq);
        const std::int64_t count = std::min(kChunk, n - chunk * kChunk);
        double s = 0.0;
        double q = 0.0;
        for (std::int64_t i = 0; i < count; ++i) {
            const Vec3 x = sample_in_ball(rng, d, c1, r1);
            const Vec3 y = sample_in_ball(rng, d, c2, r2);
            const double dist = norm(sub(x, y));
            const double v = scale * (std::pow(dist, -params.alpha()) + params.gamma() * std::pow(dist, params.beta()));
            s += v;
            q += v * v;
        }
        sum += s;
        sq += q;
    }
    EnergyEstimate out;
    out.method = EnergyEstimate::Method::MonteCarlo;
    out.samples = n;
    out.seed = seed;
    const double dn = static_cast<double>(n);
    out.value = sum / dn;
    out.error = std::sqrt(std::max(0.0, (sq - dn * out.value * out.value) / (dn - 1.0)) / dn);
    return out;
}

}  // namespace

double sphere_ball_overlap(int d, double rho, double dist, double delta) {
    if (d != 2 && d != 3) throw UnsupportedDimension(d);
    if (rho <= 0.0) return 0.0;
    const double full = d * unit_ball_volume(d) * std::pow(rho, d - 1);
    if (rho + dist <= delta) return full;
    if (rho >= dist + delta || rho <= dist - delta) return 0.0;
    if (d == 3) {
        // Cap area 2 pi rho^2 (1 - cos theta_0) without cancellation.
        return std::numbers::pi * rho * (delta * delta - (rho - dist) * (rho - dist)) / dist;
    }
    const double c = std::clamp((rho * rho + dist * dist - delta * delta) / (2.0 * rho * dist), -1.0, 1.0);
    return 2.0 * rho * std::acos(c);
}

EnergyEstimate ball_ball_interaction(const Vec3& c1, double r1, const Vec3& c2, double r2,
                                     const ModelParams& params, const InteractionOptions& options) {
    if (!(r1 > 0.0) || !(r2 > 0.0)) throw DomainError("ball radii must be positive");
    const int d = params.dim();
    if (d != 2 && d != 3) throw UnsupportedDimension(d);
    const double dist = norm(sub(c1, c2));
    if (dist == 0.0 && r1 == r2) {
        EnergyEstimate out;
        out.method = EnergyEstimate::Method::ClosedForm;
        out.value = std::pow(r1, 2 * d - params.alpha()) * j_ball(params.repulsive(), params.d()) +
                    params.gamma() * std::pow(r1, 2 * d + params.beta()) * j_ball(params.attractive(), params.d());
        return out;
    }
    if (is_unit_ball(c1, r1)) return unit_ball_with(c2, r2, params, options.tol);
    if (is_unit_ball(c2, r2)) return unit_ball_with(c1, r1, params, options.tol);
    if (dist - r1 - r2 >= 0.5 * std::max(r1, r2)) {
        return separated_balls(c1, r1, c2, r2, params, options.tol);
    }
    return mc_balls(c1, r1, c2, r2, params, options.samples, options.seed);
}

}  // namespace nlstab
