#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nlstab/errors.hpp"
#include "nlstab/sphere_harmonics.hpp"
#include "nlstab/spectral.hpp"

using namespace nlstab;
using std::numbers::pi;

namespace {

HarmonicCoefficients random_coeffs(int d, int L, std::uint64_t seed) {
    HarmonicCoefficients c(d, L);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n01(0.0, 1.0);
    for (double& v : c.values) v = n01(rng);
    return c;
}

}  // namespace

TEST_CASE("harmonic dimensions and layout") {
    CHECK(harmonic_dimension(3, 0) == 1);
    CHECK(harmonic_dimension(3, 4) == 9);
    CHECK(harmonic_dimension(2, 0) == 1);
    CHECK(harmonic_dimension(2, 5) == 2);
    CHECK(HarmonicCoefficients::size_for(3, 4) == 25);
    CHECK(HarmonicCoefficients::size_for(2, 4) == 9);
    HarmonicCoefficients c(3, 2);
    CHECK_THROWS_AS(c.at(3, 1), DomainError);
    CHECK_THROWS_AS(c.at(2, 6), DomainError);
    CHECK_THROWS_AS(c.at(2, 0), DomainError);
}

TEST_CASE("grids") {
    const SphereGrid g2 = build_grid(2, 8);
    REQUIRE(g2.size() == 8);
    for (double w : g2.weights) CHECK(w == doctest::Approx(2.0 * pi / 8.0).epsilon(1e-15));
    const SphereGrid g3 = build_grid(3, 16);
    CHECK(g3.size() == 16 * 32);
    double s = 0.0;
    for (double w : g3.weights) s += w;
    CHECK(s == doctest::Approx(4.0 * pi).epsilon(1e-14));
    SphereFunction one{std::vector<double>(g3.size(), 1.0)};
    CHECK(integrate(one, g3) == doctest::Approx(unit_sphere_area(3)).epsilon(1e-14));
    CHECK_THROWS_AS(build_grid(4, 8), UnsupportedDimension);
}

TEST_CASE("basis values") {
    const Vec3 north{0.0, 0.0, 1.0};
    CHECK(basis_eval(3, 0, 1, Vec3{0.3, -0.4, std::sqrt(0.75)}) == doctest::Approx(1.0 / std::sqrt(4.0 * pi)));
    CHECK(basis_eval(3, 1, 1, north) == doctest::Approx(std::sqrt(3.0 / (4.0 * pi))).epsilon(1e-15));
    const double th = 0.7;
    CHECK(basis_eval(2, 1, 1, Vec3{std::cos(th), std::sin(th), 0.0}) ==
          doctest::Approx(std::cos(th) / std::sqrt(pi)).epsilon(1e-14));
    CHECK(basis_eval(2, 0, 1, Vec3{1.0, 0.0, 0.0}) == doctest::Approx(1.0 / std::sqrt(2.0 * pi)));
    // Degree-1 harmonics are the coordinates up to normalization.
    const Vec3 x{0.48, -0.6, 0.64};
    const double c1 = std::sqrt(3.0 / (4.0 * pi));
    CHECK(basis_eval(3, 1, 2, x) == doctest::Approx(c1 * x.x).epsilon(1e-14));
    CHECK(basis_eval(3, 1, 3, x) == doctest::Approx(c1 * x.y).epsilon(1e-14));
}

TEST_CASE("basis_all agrees with basis_eval") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> n01(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        Vec3 x{n01(rng), n01(rng), n01(rng)};
        const double r = norm(x);
        x = Vec3{x.x / r, x.y / r, x.z / r};
        const std::vector<double> all = basis_all(3, 12, x);
        for (int k = 0; k <= 12; ++k) {
            for (int i = 1; i <= harmonic_dimension(3, k); ++i) {
                CHECK(all[HarmonicCoefficients::offset(3, k) + i - 1] ==
                      doctest::Approx(basis_eval(3, k, i, x)).epsilon(1e-11).scale(1.0));
            }
        }
    }
}

TEST_CASE("orthonormality on the grid") {
    for (int d : {2, 3}) {
        const int L = 12;
        const SphereGrid g = build_grid(d, d == 3 ? 2 * L : 4 * L + 2);
        const int n = HarmonicCoefficients::size_for(d, L);
        std::vector<std::vector<double>> tab;
        for (const Vec3& x : g.nodes) tab.push_back(basis_all(d, L, x));
        double worst = 0.0;
        for (int a = 0; a < n; ++a) {
            for (int b = a; b < n; ++b) {
                double s = 0.0;
                for (std::size_t q = 0; q < g.size(); ++q) s += g.weights[q] * tab[q][a] * tab[q][b];
                worst = std::max(worst, std::abs(s - (a == b ? 1.0 : 0.0)));
            }
        }
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("analysis and synthesis") {
    for (int d : {2, 3}) {
        const int L = 8;
        const SphereGrid g = build_grid(d, d == 3 ? 16 : 40);
        REQUIRE(g.max_analysis_degree() >= L);

        HarmonicCoefficients y2(d, L);
        y2.at(2, 1) = 1.0;
        const HarmonicCoefficients back = analyze(synthesize(y2, g), g, L);
        for (std::size_t i = 0; i < back.values.size(); ++i) {
            CHECK(std::abs(back.values[i] - y2.values[i]) < 1e-10);
        }

        SphereFunction c{std::vector<double>(g.size(), 2.5)};
        const HarmonicCoefficients cc = analyze(c, g, L);
        CHECK(cc.at(0, 1) == doctest::Approx(2.5 * std::sqrt(unit_sphere_area(d))).epsilon(1e-12));
        for (std::size_t i = 1; i < cc.values.size(); ++i) CHECK(std::abs(cc.values[i]) < 1e-10);

        const HarmonicCoefficients r = random_coeffs(d, L, 11);
        const SphereFunction u = synthesize(r, g);
        const HarmonicCoefficients rr = analyze(u, g, L);
        for (std::size_t i = 0; i < r.values.size(); ++i) CHECK(std::abs(rr.values[i] - r.values[i]) < 1e-10);

        SphereFunction u2 = u;
        for (double& v : u2.values) v *= v;
        CHECK(r.l2_norm_squared() == doctest::Approx(integrate(u2, g)).epsilon(1e-9));

        const HarmonicCoefficients zero(d, L);
        for (double v : synthesize(zero, g).values) CHECK(v == 0.0);

        CHECK_THROWS_AS(analyze(u, build_grid(d, 4), L), DomainError);
    }
}

TEST_CASE("evaluate reproduces single basis functions") {
    HarmonicCoefficients c(3, 5);
    c.at(4, 6) = 1.0;
    const Vec3 x{0.0, 0.6, 0.8};
    CHECK(evaluate(c, x) == doctest::Approx(basis_eval(3, 4, 6, x)).epsilon(1e-13));
}

TEST_CASE("spectral seminorm") {
    const KernelExponent s(-1.0);
    HarmonicCoefficients c(3, 3);
    c.at(0, 1) = 4.0;
    CHECK(seminorm_spectral(c, s) == 0.0);
    c.at(1, 2) = 1.0;
    CHECK(seminorm_spectral(c, s) == doctest::Approx(mu_k(s, 1, Dimension(3))).epsilon(1e-14));
    c.at(2, 1) = 1.0;
    CHECK(seminorm_spectral(c, s) ==
          doctest::Approx(mu_k(s, 1, Dimension(3)) + mu_k(s, 2, Dimension(3))).epsilon(1e-14));
    for (double sigma : {-1.5, -0.3, 0.7, 3.0, 9.5}) {
        for (int seed = 0; seed < 5; ++seed) {
            CHECK(seminorm_spectral(random_coeffs(3, 10, seed), KernelExponent(sigma)) >= 0.0);
        }
    }
}

TEST_CASE("complete frame is orthonormal") {
    for (const Vec3& x : {Vec3{0, 0, 1}, Vec3{0, 0, -1}, Vec3{0.6, 0.0, 0.8}, Vec3{1, 0, 0}}) {
        Vec3 e1, e2;
        complete_frame(x, e1, e2);
        CHECK(std::abs(dot(e1, x)) < 1e-15);
        CHECK(std::abs(dot(e2, x)) < 1e-15);
        CHECK(std::abs(dot(e1, e2)) < 1e-15);
        CHECK(norm(e1) == doctest::Approx(1.0));
        CHECK(norm(e2) == doctest::Approx(1.0));
    }
}
