// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "nlstab/energy.hpp"
#include "nlstab/report.hpp"
#include "nlstab/scenarios.hpp"
#include "nlstab/spectral.hpp"

using namespace nlstab;
using std::numbers::pi;

namespace {

struct Outcome {
    bool passed;
    std::string detail;
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

Outcome c1() {
    const ModelParams p(3, 1.0, 4.0);
    const double g = gamma_star(p);
    const BruteForceThresholds b = thresholds_bruteforce(p, 10000);
    const double d1 = rel(g, 0.125);
    const double d2 = rel(b.sup, g);
    return {d1 <= 1e-12 && d2 <= 1e-9, "closed-form deviation " + sci(d1) + ", brute-force deviation " + sci(d2)};
}

Outcome c2() {
    const double b = beta_star(Dimension(3), 1.0);
    return {rel(b, 22.0) <= 1e-12, "beta_star = " + format_number(b)};
}

Outcome c3() {
    double worst = 0.0;
    for (int d = 3; d <= 8; ++d) {
        const ModelParams p(d, d - 2.0, 2.0);
        worst = std::max(worst, rel(gamma_star(p), (d - 2) / 2.0));
        worst = std::max(worst, rel(mass_thresholds(p).m_star, (d - 2) * unit_ball_volume(d) / 2.0));
    }
    return {worst <= 1e-12, "max relative deviation " + sci(worst)};
}

Outcome c4() {
    const ModelParams p(3, 1.0, 4.0);
    const double g = gamma_star_star(p);
    const BruteForceThresholds b = thresholds_bruteforce(p, 10000);
    const double d1 = rel(g, 1.0 / 24.0);
    const double d2 = rel(ratio_k(p, 2), g);
    const double d3 = rel(b.inf, g);
    return {d1 <= 1e-12 && d2 <= 1e-12 && d3 <= 1e-12 && b.argmin == 2,
            "closed form " + sci(d1) + ", ratio_2 " + sci(d2) + ", brute-force inf " + sci(d3) + " at k=" +
                std::to_string(b.argmin)};
}

Outcome c5() {
    int count = 0;
    int failed = 0;
    for (int d : {2, 3, 4, 5}) {
        for (double f : {0.25, 0.5, 0.9}) {
            const double a = f * (d - 1);
            const double bs = beta_star(Dimension(d), a);
            for (double b : {0.5, 2.0, bs - 1.0, bs, bs + 1.0, 4.0 * bs}) {
                ++count;
                if (!all_passed(verify_appendix(ModelParams(d, a, b), 10000).checks)) ++failed;
            }
        }
    }
    return {failed == 0, std::to_string(count - failed) + "/" + std::to_string(count) + " parameter sets"};
}

Outcome c6() {
    const double samples[][3] = {{3, 1.0, 4.0}, {3, 0.5, 2.0}, {3, 1.5, 0.7},
                                 {2, 0.5, 1.0}, {2, 0.25, 3.0}, {2, 0.8, 2.5}};
    double worst = 0.0;
    for (const auto& s : samples) {
        const ModelParams p(static_cast<int>(s[0]), s[1], s[2]);
        for (KernelExponent sig : {p.repulsive(), p.attractive()}) {
            for (int k = 0; k <= 12; ++k) {
                const double ref = mu_k(sig, k, p.d());
                const double fh = mu_k_funk_hecke(sig, k, p.d(), 1e-10);
                worst = std::max(worst, std::abs(fh - ref) / std::max(1.0, std::abs(ref)));
            }
        }
    }
    return {worst <= 1e-8, "max mixed deviation " + sci(worst)};
}

Outcome c7() {
    double worst = 0.0;
    for (double r : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const double v = psi_sigma(r, KernelExponent(-1.0), Dimension(3), 1e-10).value;
        worst = std::max(worst, std::abs(v - 2.0 * pi * (1.0 - r * r / 3.0)));
    }
    const RadialDerivative der = psi_sigma_prime_at_one(KernelExponent(-1.0), Dimension(3), 1e-12);
    const double dd = std::abs(der.value + 4.0 * pi / 3.0);
    return {worst <= 1e-6 && dd <= 1e-6, "potential deviation " + sci(worst) + ", derivative deviation " + sci(dd)};
}

Outcome c8() {
    const ModelParams p(3, 1.0, 4.0);
    const double above = psi_prime_at_one(p.with_gamma(1.01 * gamma_star(p)), 1e-12);
    const double below = psi_prime_at_one(p.with_gamma(0.99 * gamma_star_star(p)), 1e-12);
    const RadialDerivative rep = psi_sigma_prime_at_one(p.repulsive(), p.d(), 1e-12);
    const RadialDerivative att = psi_sigma_prime_at_one(p.attractive(), p.d(), 1e-12);
    const double root = -rep.value / att.value;
    const double dev = std::abs(root - 0.125);
    return {above > 0.0 && below < 0.0 && dev <= 1e-6,
            "psi'(1) = " + sci(above) + " above, " + sci(below) + " below, zero at " + format_number(root)};
}

Outcome c9() {
    const ModelParams p(3, 1.0, 4.0);
    bool ok = true;
    std::string detail;
    for (double g : {1.0, 1.0 / 48.0}) {
        const FugledeReport r = verify_fuglede(p.with_gamma(g), 2, {0.02, 0.01, 0.005});
        ok = ok && all_passed(r.checks) && r.expected_sign.has_value() && r.checks.size() == 2;
        for (const CheckResult& c : r.checks) {
            detail += (detail.empty() ? "" : ", ") + ("gamma " + sci(g) + " " + c.name + " " + sci(c.deviation));
        }
    }
    return {ok, detail};
}

Outcome c10() {
    const ModelParams p(3, 1.0, 4.0);
    bool ok = true;
    std::string detail = "z-scores";
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const CheckResult c =
            star_identity_check(p, random_band_limited(3, 4, seed), 0.05, 16, 1e-9, 1'000'000, seed);
        ok = ok && c.passed;
        detail += " " + sci(c.deviation);
    }
    return {ok, detail};
}

Outcome c11() {
    const ModelParams p(3, 1.0, 4.0, 1.0 / 7.0);
    const NecessaryConditionScan scan = scan_necessary_condition(p, default_scan_grid());
    const CounterexampleReport r = find_counterexample(p, default_bump_radii());
    if (!r.found) return {false, "no negative energy change found"};
    const CounterexampleTrial& t = r.trials[*r.found];
    const bool ok = !scan.holds && t.delta_f.value + 3.0 * t.delta_f.error < 0.0 && t.asymmetry <= 0.1;
    return {ok, "delta " + sci(t.delta) + ", energy change " + sci(t.delta_f.value) + " +- " + sci(t.delta_f.error) +
                    ", asymmetry " + sci(t.asymmetry)};
}

Outcome c12() {
    RunConfig c;
    c.subcommand = "verify";
    const Emission a = run_command(c);
    const Emission b = run_command(c);
    return {a.text == b.text && !a.text.empty() && a.exit_code == b.exit_code,
            std::to_string(a.text.size()) + " bytes, exit code " + std::to_string(a.exit_code)};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* what;
        double budget_seconds;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "gamma_* at (3,1,4) equals 1/8", 1.0, c1},
        {2, "beta_* at (3,1) equals 22", 1.0, c2},
        {3, "gamma_* at (d,d-2,2) equals (d-2)/2", 1.0, c3},
        {4, "gamma_** at (3,1,4) equals 1/24 and ratio_2", 1.0, c4},
        {5, "extremizers of the ratio sequence over the parameter grid", 30.0, c5},
        {6, "Funk-Hecke oracle", 60.0, c6},
        {7, "Newtonian potential", 10.0, c7},
        {8, "sign of psi'(1) and its zero", 10.0, c8},
        {9, "second-order expansion along the degree-2 mode", 300.0, c9},
        {10, "exact energy identity against Monte Carlo", 300.0, c10},
        {11, "mass transfer counterexample at gamma = 1/7", 300.0, c11},
        {12, "verify output is deterministic", 600.0, c12},
    };
    int failures = 0;
    for (const Criterion& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o{false, {}};
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs <= c.budget_seconds;
        const bool pass = o.passed && in_time;
        if (!pass) ++failures;
        std::printf("%s %2d %s: %s (%.2f s of %.0f s)%s\n", pass ? "PASS" : "FAIL", c.id, c.what, o.detail.c_str(),
                    secs, c.budget_seconds, in_time ? "" : " over budget");
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
