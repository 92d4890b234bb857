#include <doctest.h>

#include <cmath>

#include "nlstab/errors.hpp"
#include "nlstab/scenarios.hpp"

using namespace nlstab;

TEST_CASE("ratio sequence extremizer checks") {
    const AppendixReport r = verify_appendix(ModelParams(3, 1.0, 4.0), 10000);
    CHECK(all_passed(r.checks));
    CHECK(r.brute.argmin == 2);
    CHECK_FALSE(r.brute.argmax.has_value());
    CHECK(r.x3_display == doctest::Approx(r.x3_product).epsilon(1e-12));
    // The displayed X_2 expression does not match the product form.
    CHECK(r.x2_product == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    CHECK(std::abs(r.x2_display - r.x2_product) > 1e-3);

    const AppendixReport high = verify_appendix(ModelParams(3, 1.0, 155.0), 10000);
    CHECK(all_passed(high.checks));
    REQUIRE(high.brute.argmax.has_value());
    CHECK(*high.brute.argmax == 3);
    CHECK(all_passed(verify_appendix(ModelParams(3, 1.0, 5.0), 10000).checks));
    CHECK(all_passed(verify_appendix(ModelParams(3, 1.0, 22.0), 10000).checks));
    CHECK_THROWS_AS(verify_appendix(ModelParams(3, 1.0, 4.0), 10), DomainError);
}

TEST_CASE("energy along the degree-2 mode") {
    const ModelParams p(3, 1.0, 4.0);
    const std::vector<double> ts{0.02, 0.01, 0.005};
    const FugledeReport above = verify_fuglede(p.with_gamma(1.0), 2, ts);
    REQUIRE(above.expected_sign.has_value());
    CHECK(*above.expected_sign == 1);
    CHECK(all_passed(above.checks));
    for (const FugledeRow& r : above.rows) CHECK(r.delta_f.value > 0.0);

    const FugledeReport below = verify_fuglede(p.with_gamma(1.0 / 48.0), 2, ts);
    REQUIRE(below.expected_sign.has_value());
    CHECK(*below.expected_sign == -1);
    CHECK(all_passed(below.checks));
    for (const FugledeRow& r : below.rows) CHECK(r.delta_f.value < 0.0);

    // The quadratic form is even in u.
    const FugledeReport flipped = verify_fuglede(p.with_gamma(1.0), 2, ts, {}, -1.0);
    CHECK(all_passed(flipped.checks));
    for (const FugledeRow& r : flipped.rows) CHECK(r.delta_f.value > 0.0);

    const FugledeReport mid = verify_fuglede(p.with_gamma(0.08), 2, ts);
    CHECK_FALSE(mid.expected_sign.has_value());
}

TEST_CASE("translation mode changes the energy only at third order") {
    const ModelParams p(3, 1.0, 4.0, 0.5);
    const FugledeReport r = verify_fuglede(p, 1, {0.02, 0.01});
    CHECK(r.mode == ConstraintMode::VolumeCorrected);
    REQUIRE(r.rows.size() == 2);
    for (const FugledeRow& row : r.rows) {
        // Only the O(t) constant-mode correction contributes.
        CHECK(std::abs(row.quad_form) < 20.0 * row.t * row.t);
        CHECK(std::abs(row.delta_f.value) < 50.0 * std::pow(row.t, 3));
    }
}

TEST_CASE("necessary condition scan") {
    const NecessaryConditionScan low = scan_necessary_condition(ModelParams(3, 1.0, 4.0, 1.0 / 7.0), default_scan_grid());
    CHECK(low.interior_violation);
    CHECK(low.max_interior_excess > 0.0);
    CHECK_FALSE(low.holds);

    const NecessaryConditionScan coulomb = scan_necessary_condition(ModelParams(3, 1.0, 2.0, 1.0), default_scan_grid());
    CHECK(coulomb.holds);

    const NecessaryConditionScan strong = scan_necessary_condition(ModelParams(3, 1.0, 4.0, 1e3), default_scan_grid());
    CHECK(strong.min_exterior_excess > 0.0);

    for (double alpha : {0.5, 1.0, 1.5}) {
        for (double beta : {1.0, 2.0, 4.0}) {
            const ModelParams base(3, alpha, beta);
            const ModelParams p = base.with_gamma(2.0 * gamma_star(base));
            CHECK_FALSE(scan_necessary_condition(p, default_scan_grid()).exterior_violation);
        }
    }
    const std::vector<double> grid = default_scan_grid();
    CHECK(grid.size() == 128);
    CHECK(grid.front() == doctest::Approx(0.02));
    CHECK(grid.back() == doctest::Approx(2.5));
}

TEST_CASE("mass transfer counterexample at gamma = 1/7") {
    const ModelParams p(3, 1.0, 4.0, 1.0 / 7.0);
    const CounterexampleReport r = find_counterexample(p, default_bump_radii());
    CHECK(r.verdict());
    CHECK(r.mode == BumpMode::InnerBump);
    REQUIRE(r.found.has_value());
    const CounterexampleTrial& t = r.trials[*r.found];
    CHECK(t.delta_f.value + 3.0 * t.delta_f.error < 0.0);
    CHECK(t.asymmetry <= 0.1);
    CHECK(t.asymmetry == doctest::Approx(2.0 * unit_ball_volume(3) * std::pow(t.delta, 3)).epsilon(1e-14));

    // Leading-order behavior for the smallest bump.
    const CounterexampleTrial& small = r.trials.front();
    CHECK(small.delta_f.value == doctest::Approx(small.leading_term).epsilon(0.1));

    // Single Monte Carlo run over the whole modified set.
    const EnergyEstimate mc = counterexample_mc(p, r, *r.found, 1'000'000, 3);
    CHECK(std::abs(mc.value - t.delta_f.value) <= 3.0 * std::hypot(mc.error, t.delta_f.error));
}

TEST_CASE("no counterexample for strong attraction") {
    for (double g : {0.5, 1.0}) {
        const CounterexampleReport r = find_counterexample(ModelParams(3, 1.0, 4.0, g), default_bump_radii());
        CHECK_FALSE(r.verdict());
        CHECK(r.scan.holds);
    }
    CHECK_THROWS_AS(find_counterexample(ModelParams(3, 1.0, 4.0, 0.5), {0.7}), DomainError);
}

TEST_CASE("mass report") {
    const ModelParams p(3, 1.0, 4.0);
    const MassThresholds m = mass_thresholds(p);
    const MassReport at = mass_report(m.m_star, 3, 1.0, 4.0);
    CHECK(at.verdict == StabilityClass::Verdict::StableMinimum);
    CHECK(at.at_boundary);
    CHECK(at.gamma == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(mass_report(0.5 * m.m_star_star, 3, 1.0, 4.0).verdict == StabilityClass::Verdict::StableMaximum);
    CHECK(mass_report(0.5 * (m.m_star + m.m_star_star), 3, 1.0, 4.0).verdict == StabilityClass::Verdict::Indefinite);
    for (int d = 3; d <= 8; ++d) {
        const MassReport r = mass_report((d - 2) * unit_ball_volume(d) / 2.0, d, d - 2.0, 2.0);
        CHECK(r.at_boundary);
        CHECK(r.verdict == StabilityClass::Verdict::StableMinimum);
    }
    CHECK(mass_report(unit_ball_volume(3), 3, 1.0, 4.0).radius == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(mass_report(-1.0, 3, 1.0, 4.0), DomainError);
}

TEST_CASE("random band-limited profiles") {
    const HarmonicCoefficients a = random_band_limited(3, 4, 9);
    const HarmonicCoefficients b = random_band_limited(3, 4, 9);
    CHECK(a.values == b.values);
    CHECK(a.l2_norm_squared() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(a.at(0, 1) == 0.0);
    CHECK(random_band_limited(3, 4, 10).values != a.values);
}
