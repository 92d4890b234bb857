#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "nlstab/energy.hpp"
#include "nlstab/errors.hpp"
#include "nlstab/quadrature.hpp"

namespace nlstab {

namespace {

// Grid on which the volume and first moment of E_t are polynomial integrands
// and therefore integrated exactly.
SphereGrid constraint_grid(int d, int L) {
    const int degree = (d + 1) * L + 1;
    if (d == 3) return build_grid(3, std::max(8, degree / 2 + 2));
    return build_grid(2, std::max(16, degree + 2));
}

std::vector<double> radii_on(const HarmonicCoefficients& c, double t, const SphereGrid& g) {
    std::vector<double> rho(g.size());
    for (std::size_t n = 0; n < g.size(); ++n) rho[n] = 1.0 + t * evaluate(c, g.nodes[n]);
    return rho;
}

double volume_on(const std::vector<double>& rho, const SphereGrid& g) {
    double v = 0.0;
    for (std::size_t n = 0; n < g.size(); ++n) v += g.weights[n] * std::pow(rho[n], g.d);
    return v / g.d;
}

Vec3 moment_on(const std::vector<double>& rho, const SphereGrid& g) {
    Vec3 m;
    for (std::size_t n = 0; n < g.size(); ++n) {
        const double w = g.weights[n] * std::pow(rho[n], g.d + 1) / (g.d + 1);
        m.x += w * g.nodes[n].x;
        m.y += w * g.nodes[n].y;
        m.z += w * g.nodes[n].z;
    }
    return m;
}

double component(const Vec3& v, int i) { return i == 0 ? v.x : (i == 1 ? v.y : v.z); }

// Newton step on the constant coefficient so that the volume equals omega_d.
bool correct_volume(HarmonicCoefficients& c, double t, const SphereGrid& g) {
    const double target = unit_ball_volume(g.d);
    const double y0 = 1.0 / std::sqrt(g.d * target);
    for (int iter = 0; iter < 50; ++iter) {
        const auto rho = radii_on(c, t, g);
        double f = -g.d * target;
        double df = 0.0;
        for (std::size_t n = 0; n < g.size(); ++n) {
            f += g.weights[n] * std::pow(rho[n], g.d);
            df += g.weights[n] * g.d * std::pow(rho[n], g.d - 1);
        }
        const double shift = -f / df;
        c.at(0, 1) += shift / (t * y0);
        if (std::abs(f) <= 1e-14 * g.d * target) return true;
    }
    return false;
}

// Newton step on the degree-1 coefficients so that the first moment vanishes.
double correct_barycenter(HarmonicCoefficients& c, double t, const SphereGrid& g) {
    const int d = g.d;
    const auto rho = radii_on(c, t, g);
    const Vec3 m = moment_on(rho, g);
    std::array<std::array<double, 4>, 3> a{};
    for (int r = 0; r < d; ++r) a[r][d] = -component(m, r);
    for (std::size_t n = 0; n < g.size(); ++n) {
        const auto basis = basis_all(d, 1, g.nodes[n]);
        const double w = g.weights[n] * std::pow(rho[n], d) * t;
        for (int r = 0; r < d; ++r) {
            for (int j = 0; j < d; ++j) a[r][j] += w * component(g.nodes[n], r) * basis[1 + j];
        }
    }
    // Gaussian elimination with partial pivoting on the d x d system.
    for (int col = 0; col < d; ++col) {
        int piv = col;
        for (int r = col + 1; r < d; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        }
        std::swap(a[col], a[piv]);
        for (int r = col + 1; r < d; ++r) {
            const double f = a[r][col] / a[col][col];
            for (int j = col; j <= d; ++j) a[r][j] -= f * a[col][j];
        }
    }
    std::array<double, 3> x{};
    for (int r = d - 1; r >= 0; --r) {
        double s = a[r][d];
        for (int j = r + 1; j < d; ++j) s -= a[r][j] * x[j];
        x[r] = s / a[r][r];
    }
    for (int j = 0; j < d; ++j) c.at(1, j + 1) += x[j];
    return std::sqrt(m.x * m.x + m.y * m.y + m.z * m.z);
}

HarmonicCoefficients with_degree_at_least(const HarmonicCoefficients& c, int L) {
    if (c.degree_max >= L) return c;
    HarmonicCoefficients out(c.d, L);
    std::copy(c.values.begin(), c.values.end(), out.values.begin());
    return out;
}

}  // namespace

std::string to_string(ConstraintMode mode) {
    switch (mode) {
        case ConstraintMode::Raw: return "raw";
        case ConstraintMode::VolumeCorrected: return "volume";
        case ConstraintMode::VolumeAndBarycenterCorrected: return "volume_barycenter";
    }
    return "unknown";
}

StarPerturbation::StarPerturbation(HarmonicCoefficients profile, double t, ConstraintMode mode)
    : coeffs_(std::move(profile)), t_(t), mode_(mode) {
    if (!std::isfinite(t)) throw DomainError("perturbation amplitude must be finite");
    const int d = coeffs_.d;
    const int check_res = d == 3 ? std::max(24, coeffs_.degree_max + 8) : std::max(64, 4 * coeffs_.degree_max + 8);
    const SphereGrid fine = build_grid(d, check_res);
    for (const Vec3& x : fine.nodes) {
        if (t_ * evaluate(coeffs_, x) <= -1.0) {
            throw DomainError("profile is not star-shaped: 1 + t u <= 0 somewhere");
        }
    }
    if (t_ != 0.0 && mode_ != ConstraintMode::Raw) {
        if (mode_ == ConstraintMode::VolumeAndBarycenterCorrected) {
            coeffs_ = with_degree_at_least(coeffs_, 1);
        }
        const SphereGrid g = constraint_grid(d, coeffs_.degree_max);
        bool done = false;
        for (int cycle = 0; cycle < 50 && !done; ++cycle) {
            const bool vol_ok = correct_volume(coeffs_, t_, g);
            if (mode_ == ConstraintMode::VolumeCorrected) {
                done = vol_ok;
                break;
            }
            const double moment = correct_barycenter(coeffs_, t_, g);
            if (vol_ok && moment <= 1e-14) {
                done = correct_volume(coeffs_, t_, g);
            }
        }
        if (!done) {
            throw ConvergenceError("volume/barycenter correction did not converge", t_, 0.0);
        }
    }
    for (const Vec3& x : fine.nodes) sup_tu_ = std::max(sup_tu_, std::abs(t_ * evaluate(coeffs_, x)));
    if (!(sup_tu_ < 0.5)) {
        throw DomainError("perturbation too large: sup |t u| = " + std::to_string(sup_tu_) +
                          " must stay below 1/2");
    }
}

double StarPerturbation::volume() const {
    const SphereGrid g = constraint_grid(dim(), coeffs_.degree_max);
    return volume_on(radii_on(coeffs_, t_, g), g);
}

Vec3 StarPerturbation::first_moment() const {
    const SphereGrid g = constraint_grid(dim(), coeffs_.degree_max);
    return moment_on(radii_on(coeffs_, t_, g), g);
}

double h_sigma(const StarPerturbation& u, KernelExponent sigma, const SphereGrid& grid) {
    const double p = 2.0 * grid.d + sigma.value();
    double s = 0.0;
    for (std::size_t n = 0; n < grid.size(); ++n) {
        s += grid.weights[n] * std::pow(u.radius(grid.nodes[n]), p);
    }
    return s;
}

double h_sigma_increment(const StarPerturbation& u, KernelExponent sigma, const SphereGrid& grid) {
    const double p = 2.0 * grid.d + sigma.value();
    const double t = u.amplitude();
    double s = 0.0;
    for (std::size_t n = 0; n < grid.size(); ++n) {
        s += grid.weights[n] * std::expm1(p * std::log1p(t * u.profile(grid.nodes[n])));
    }
    return s;
}

namespace {

struct GLevel {
    int outer_res;
    int n_theta;
    int n_phi;
    int n_inner;
};

// One evaluation of g_sigma at a fixed discretization.
double g_sigma_level(const StarPerturbation& u, double sigma, const GLevel& lv) {
    const int d = u.dim();
    const double t = u.amplitude();
    const SphereGrid outer = build_grid(d, lv.outer_res);
    // theta = pi s^2 clusters nodes at the kernel singularity theta = 0.
    const QuadratureRule gs = gauss_legendre(lv.n_theta);
    std::vector<double> th(lv.n_theta), wth(lv.n_theta);
    for (int a = 0; a < lv.n_theta; ++a) {
        const double s = 0.5 * (gs.nodes[a] + 1.0);
        th[a] = std::numbers::pi * s * s;
        wth[a] = 0.5 * gs.weights[a] * 2.0 * std::numbers::pi * s;
    }
    const QuadratureRule gi = gauss_legendre(lv.n_inner);
    std::vector<double> si(lv.n_inner), wi(lv.n_inner);
    for (int p = 0; p < lv.n_inner; ++p) {
        si[p] = 0.5 * (gi.nodes[p] + 1.0);
        wi[p] = 0.5 * gi.weights[p];
    }
    const int branches = d == 3 ? lv.n_phi : 2;
    const double wphi = d == 3 ? 2.0 * std::numbers::pi / lv.n_phi : 1.0;
    const double half_sigma = 0.5 * sigma;

    auto inner = [&](double ux, double uy, double theta_c2) {
        const double delta = ux - uy;
        if (delta == 0.0) return 0.0;
        double acc = 0.0;
        for (int p = 0; p < lv.n_inner; ++p) {
            const double a = 1.0 + t * (uy + delta * si[p]);
            for (int q = 0; q <= p; ++q) {
                const double b = 1.0 + t * (uy + delta * si[q]);
                const double ab = a * b;
                const double gap = t * delta * (si[p] - si[q]);
                const double f = std::pow(ab, d - 1) * std::pow(gap * gap + ab * theta_c2, half_sigma);
                acc += (p == q ? 1.0 : 2.0) * wi[p] * wi[q] * f;
            }
        }
        return delta * delta * acc;
    };

    double total = 0.0;
    for (std::size_t n = 0; n < outer.size(); ++n) {
        const Vec3& x = outer.nodes[n];
        const double ux = u.profile(x);
        Vec3 e1, e2;
        if (d == 3) {
            complete_frame(x, e1, e2);
        } else {
            e1 = Vec3{-x.y, x.x, 0.0};
        }
        double gx = 0.0;
        for (int a = 0; a < lv.n_theta; ++a) {
            const double ct = std::cos(th[a]);
            const double st = std::sin(th[a]);
            const double sh = 2.0 * std::sin(0.5 * th[a]);
            const double jac = d == 3 ? st : 1.0;
            double ring = 0.0;
            for (int b = 0; b < branches; ++b) {
                Vec3 dir;
                if (d == 3) {
                    const double ph = wphi * b;
                    const double cp = std::cos(ph);
                    const double sp = std::sin(ph);
                    dir = Vec3{cp * e1.x + sp * e2.x, cp * e1.y + sp * e2.y, cp * e1.z + sp * e2.z};
                } else {
                    const double sgn = b == 0 ? 1.0 : -1.0;
                    dir = Vec3{sgn * e1.x, sgn * e1.y, 0.0};
                }
                const Vec3 y{ct * x.x + st * dir.x, ct * x.y + st * dir.y, ct * x.z + st * dir.z};
                ring += inner(ux, u.profile(y), sh * sh);
            }
            gx += wth[a] * jac * wphi * ring;
        }
        total += outer.weights[n] * gx;
    }
    return total;
}

}  // namespace

EnergyEstimate g_sigma(const StarPerturbation& u, KernelExponent sigma, const SphereGrid& grid, double tol) {
    require_admissible_exponent(sigma, Dimension(u.dim()));
    if (grid.d != u.dim()) throw DomainError("grid dimension does not match the perturbation");
    EnergyEstimate out;
    out.method = EnergyEstimate::Method::Quadrature;
    // Successive refinements of every discretization parameter; the error is
    // the change between the last two levels.
    constexpr int kMaxLevels = 4;
    const int step = grid.d == 3 ? 4 : 16;
    double prev = 0.0;
    for (int level = 0; level < kMaxLevels; ++level) {
        const GLevel lv{grid.resolution + step * level, 20 + 10 * level, 20 + 10 * level, 5 + level};
        const double value = g_sigma_level(u, sigma.value(), lv);
        out.samples = static_cast<std::int64_t>(lv.n_theta) * lv.n_phi * lv.n_inner * lv.n_inner;
        if (level > 0) {
            out.value = value;
            out.error = std::abs(value - prev);
            if (out.error <= tol * std::max(1.0, std::abs(value))) return out;
        }
        prev = value;
    }
    throw ConvergenceError("g_sigma did not reach tolerance", out.value, out.error);
}

EnergyEstimate delta_j_star(const StarPerturbation& u, KernelExponent sigma, const SphereGrid& grid,
                            double tol) {
    const Dimension d(u.dim());
    const double t = u.amplitude();
    EnergyEstimate out;
    out.method = EnergyEstimate::Method::Quadrature;
    if (t == 0.0) return out;
    const double scale = j_ball(sigma, d) / (d.value() * unit_ball_volume(d));
    const double dh = h_sigma_increment(u, sigma, grid);
    const EnergyEstimate g = g_sigma(u, sigma, grid, tol);
    out.value = scale * dh - 0.5 * t * t * g.value;
    out.error = 0.5 * t * t * g.error;
    out.samples = g.samples;
    return out;
}

EnergyEstimate delta_f(const StarPerturbation& u, const ModelParams& params, const SphereGrid& grid,
                       double tol) {
    const EnergyEstimate rep = delta_j_star(u, params.repulsive(), grid, tol);
    const EnergyEstimate att = delta_j_star(u, params.attractive(), grid, tol);
    return rep + params.gamma() * att;
}

double asymmetry_star(const StarPerturbation& u, const SphereGrid& grid) {
    const double t = u.amplitude();
    double s = 0.0;
    for (std::size_t n = 0; n < grid.size(); ++n) {
        s += grid.weights[n] * std::abs(std::expm1(grid.d * std::log1p(t * u.profile(grid.nodes[n]))));
    }
    return s / grid.d;
}

}  // namespace nlstab
