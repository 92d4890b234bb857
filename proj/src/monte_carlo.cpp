#include <algorithm>
#include <cmath>
#include <numbers>

#include "nlstab/energy.hpp"
#include "nlstab/errors.hpp"

namespace nlstab {

namespace {

constexpr std::int64_t kChunk = 1 << 16;

std::mt19937_64 chunk_rng(std::uint64_t seed, std::int64_t chunk) {
    const auto c = static_cast<std::uint64_t>(chunk);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
    return std::mt19937_64(seq);
}

Vec3 random_direction(std::mt19937_64& rng, int d) {
    std::normal_distribution<double> n01(0.0, 1.0);
    Vec3 v;
    double len = 0.0;
    while (len == 0.0) {
        v = Vec3{n01(rng), n01(rng), d == 3 ? n01(rng) : 0.0};
        len = norm(v);
    }
    return Vec3{v.x / len, v.y / len, v.z / len};
}

struct Moments {
    double s_rep = 0.0, q_rep = 0.0;
    double s_att = 0.0, q_att = 0.0;
    double cross = 0.0;

    void add(const Moments& o) {
        s_rep += o.s_rep;
        q_rep += o.q_rep;
        s_att += o.s_att;
        q_att += o.q_att;
        cross += o.cross;
    }
};

EnergyEstimate from_moments(double sum, double sq, std::int64_t n, std::uint64_t seed) {
    EnergyEstimate e;
    e.method = EnergyEstimate::Method::MonteCarlo;
    e.samples = n;
    e.seed = seed;
    const double dn = static_cast<double>(n);
    e.value = sum / dn;
    const double var = std::max(0.0, (sq - dn * e.value * e.value) / (dn - 1.0));
    e.error = std::sqrt(var / dn);
    return e;
}

}  // namespace

Vec3 sample_in_ball(std::mt19937_64& rng, int d, const Vec3& c, double r) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const Vec3 dir = random_direction(rng, d);
    const double s = r * std::pow(u01(rng), 1.0 / d);
    return Vec3{c.x + s * dir.x, c.y + s * dir.y, c.z + s * dir.z};
}

MonteCarloBreakdown mc_energy_difference(const DifferenceDomain& domain, const ModelParams& params,
                                         std::int64_t n_samples, std::uint64_t seed) {
    if (n_samples < 2) throw DomainError("Monte Carlo needs at least two samples");
    if (domain.d != params.dim()) throw DomainError("domain dimension does not match the model");
    const int d = domain.d;
    const double outer_vol = unit_ball_volume(d) * std::pow(domain.outer_radius, d);
    const double scale = domain.support_volume * outer_vol;
    const double a = params.alpha();
    const double b = params.beta();
    const Vec3 origin{};

    // delta(x) (2 1_B(y) + delta(y)) k(x - y) integrates to the energy change
    // for x uniform on the support of delta and y uniform on the outer ball.
    Moments total;
    const std::int64_t n_chunks = (n_samples + kChunk - 1) / kChunk;
    for (std::int64_t chunk = 0; chunk < n_chunks; ++chunk) {
        auto rng = chunk_rng(seed, chunk);
        const std::int64_t count = std::min(kChunk, n_samples - chunk * kChunk);
        Moments m;
        for (std::int64_t i = 0; i < count; ++i) {
            const Vec3 x = domain.sample_support(rng);
            const Vec3 y = sample_in_ball(rng, d, origin, domain.outer_radius);
            const double dx = domain.delta(x);
            if (dx == 0.0) continue;
            const double in_b = dot(y, y) < 1.0 ? 1.0 : 0.0;
            const double factor = dx * (2.0 * in_b + domain.delta(y));
            if (factor == 0.0) continue;
            const Vec3 diff{x.x - y.x, x.y - y.y, x.z - y.z};
            const double dist = norm(diff);
            const double vr = scale * factor * std::pow(dist, -a);
            const double va = scale * factor * std::pow(dist, b);
            m.s_rep += vr;
            m.q_rep += vr * vr;
            m.s_att += va;
            m.q_att += va * va;
            m.cross += vr * va;
        }
        total.add(m);
    }
    MonteCarloBreakdown out;
    out.repulsive = from_moments(total.s_rep, total.q_rep, n_samples, seed);
    out.attractive = from_moments(total.s_att, total.q_att, n_samples, seed);
    const double g = params.gamma();
    out.total = from_moments(total.s_rep + g * total.s_att,
                             total.q_rep + 2.0 * g * total.cross + g * g * total.q_att, n_samples, seed);
    return out;
}

MonteCarloBreakdown mc_energy_star_components(const StarPerturbation& u, const ModelParams& params,
                                              std::int64_t n_samples, std::uint64_t seed) {
    if (u.dim() != params.dim()) throw DomainError("perturbation dimension does not match the model");
    const int d = u.dim();
    // The sampled sup of |t u| can miss the true one between grid nodes.
    const double tau = std::min(0.99, 1.25 * u.sup_deviation());
    if (tau == 0.0) {
        MonteCarloBreakdown zero;
        for (EnergyEstimate* e : {&zero.repulsive, &zero.attractive, &zero.total}) {
            e->method = EnergyEstimate::Method::MonteCarlo;
            e->samples = n_samples;
            e->seed = seed;
        }
        return zero;
    }
    const double r0 = 1.0 - tau;
    const double r1 = 1.0 + tau;
    const double p0 = std::pow(r0, d);
    const double p1 = std::pow(r1, d);
    DifferenceDomain dom;
    dom.d = d;
    dom.outer_radius = r1;
    dom.support_volume = unit_ball_volume(d) * (p1 - p0);
    dom.delta = [&u](const Vec3& x) {
        const double r = norm(x);
        if (r == 0.0) return 0.0;
        const double in_b = r < 1.0 ? 1.0 : 0.0;
        const double rho = u.radius(Vec3{x.x / r, x.y / r, x.z / r});
        const double in_e = r < rho ? 1.0 : 0.0;
        return in_e - in_b;
    };
    dom.sample_support = [d, p0, p1](std::mt19937_64& rng) {
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        const Vec3 dir = random_direction(rng, d);
        const double r = std::pow(p0 + u01(rng) * (p1 - p0), 1.0 / d);
        return Vec3{r * dir.x, r * dir.y, r * dir.z};
    };
    return mc_energy_difference(dom, params, n_samples, seed);
}

EnergyEstimate mc_energy_star(const StarPerturbation& u, const ModelParams& params,
                              std::int64_t n_samples, std::uint64_t seed) {
    return mc_energy_star_components(u, params, n_samples, seed).total;
}

}  // namespace nlstab
