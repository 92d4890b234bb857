#include "nlstab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "nlstab/energy.hpp"
#include "nlstab/errors.hpp"
#include "nlstab/scenarios.hpp"
#include "nlstab/spectral.hpp"

namespace nlstab {

using Json = nlohmann::ordered_json;

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

std::string format_of(const RunConfig& c, const char* fallback) {
    const std::string f = c.format.value_or(fallback);
    if (f != "json" && f != "csv") throw InvalidParameters("unknown output format '" + f + "'");
    return f;
}

Emission json_emission(const Json& j, int code = exit_code::ok) { return Emission{j.dump(2) + "\n", code, {}}; }

ModelParams base_params(const RunConfig& c) { return ModelParams(c.d, c.alpha, c.beta, 1.0); }

// gamma from --gamma or --mass; exactly one of them must be given.
ModelParams coupled_params(const RunConfig& c) {
    const ModelParams base = base_params(c);
    if (c.gamma && c.mass) throw InvalidParameters("--gamma and --mass are mutually exclusive");
    if (c.gamma) return base.with_gamma(*c.gamma);
    if (c.mass) {
        if (!(*c.mass > 0.0)) throw InvalidParameters("mass must be positive");
        return base.with_gamma(mass_gamma_scaling(*c.mass, base).gamma);
    }
    throw InvalidParameters("this command needs --gamma or --mass");
}

void put_model(Json& j, const ModelParams& p) {
    j["d"] = p.dim();
    j["alpha"] = p.alpha();
    j["beta"] = p.beta();
    j["gamma"] = p.gamma();
    j["mass"] = gamma_to_mass(p.gamma(), p);
}

Json estimate_json(const EnergyEstimate& e) {
    Json j;
    j["value"] = e.value;
    j["error"] = e.error;
    j["method"] = to_string(e.method);
    j["samples"] = e.samples;
    if (e.seed) j["seed"] = *e.seed;
    return j;
}

Json checks_json(const std::vector<CheckResult>& checks, const std::string& group) {
    Json arr = Json::array();
    for (const CheckResult& c : checks) {
        Json j;
        j["group"] = group;
        j["name"] = c.name;
        j["passed"] = c.passed;
        j["deviation"] = c.deviation;
        j["detail"] = c.detail;
        arr.push_back(j);
    }
    return arr;
}

std::vector<double> default_t_list() { return {0.02, 0.01, 0.005}; }

Json fuglede_json(const FugledeReport& rep) {
    Json j;
    j["degree"] = rep.degree;
    j["mode"] = to_string(rep.mode);
    j["expected_sign"] = rep.expected_sign ? Json(*rep.expected_sign) : Json(nullptr);
    Json rows = Json::array();
    for (const FugledeRow& r : rep.rows) {
        Json row;
        row["t"] = r.t;
        row["delta_f"] = estimate_json(r.delta_f);
        row["quad_form"] = r.quad_form;
        row["defect"] = r.defect;
        row["asymmetry"] = r.asymmetry;
        rows.push_back(row);
    }
    j["rows"] = rows;
    return j;
}

}  // namespace

Emission cmd_thresholds(const RunConfig& c) {
    const ModelParams p = base_params(c);
    const Thresholds t = compute_thresholds(p);
    Json j;
    j["d"] = p.dim();
    j["alpha"] = p.alpha();
    j["beta"] = p.beta();
    j["beta_star"] = t.beta_star;
    j["kappa"] = t.kappa;
    j["gamma_star"] = t.gamma_star;
    j["gamma_star_star"] = t.gamma_star_star;
    j["m_star"] = t.m_star;
    j["m_star_star"] = t.m_star_star;
    j["regime"] = to_string(t.regime);
    if (format_of(c, "json") == "json") return json_emission(j);
    std::ostringstream os;
    os << "d,alpha,beta,beta_star,kappa,gamma_star,gamma_star_star,m_star,m_star_star,regime\n";
    os << p.dim() << ',' << format_number(p.alpha()) << ',' << format_number(p.beta()) << ','
       << format_number(t.beta_star) << ',' << format_number(t.kappa) << ',' << format_number(t.gamma_star) << ','
       << format_number(t.gamma_star_star) << ',' << format_number(t.m_star) << ','
       << format_number(t.m_star_star) << ',' << to_string(t.regime) << '\n';
    return Emission{os.str(), exit_code::ok, {}};
}

Emission cmd_spectrum(const RunConfig& c) {
    const ModelParams p = base_params(c);
    const int k_max = c.k_max.value_or(50);
    if (k_max < 2) throw InvalidParameters("--kmax must be at least 2");
    const std::vector<SpectralRow> rows = spectrum(p, k_max);
    if (format_of(c, "csv") == "csv") {
        std::ostringstream os;
        os << "k,mu_rep,mu_att,ratio,x_k\n";
        for (const SpectralRow& r : rows) {
            os << r.k << ',' << format_number(r.mu_rep) << ',' << format_number(r.mu_att) << ','
               << (r.ratio ? format_number(*r.ratio) : "") << ',' << (r.x_k ? format_number(*r.x_k) : "") << '\n';
        }
        return Emission{os.str(), exit_code::ok, {}};
    }
    Json j;
    j["d"] = p.dim();
    j["alpha"] = p.alpha();
    j["beta"] = p.beta();
    j["kappa"] = kappa(p);
    Json arr = Json::array();
    for (const SpectralRow& r : rows) {
        Json row;
        row["k"] = r.k;
        row["mu_rep"] = r.mu_rep;
        row["mu_att"] = r.mu_att;
        row["ratio"] = r.ratio ? Json(*r.ratio) : Json(nullptr);
        row["x_k"] = r.x_k ? Json(*r.x_k) : Json(nullptr);
        arr.push_back(row);
    }
    j["rows"] = arr;
    return json_emission(j);
}

Emission cmd_potential(const RunConfig& c) {
    const ModelParams p = coupled_params(c);
    std::vector<double> radii{0.0};
    for (double r : default_scan_grid()) radii.push_back(r);
    if (std::find(radii.begin(), radii.end(), 1.0) == radii.end()) {
        radii.insert(std::upper_bound(radii.begin(), radii.end(), 1.0), 1.0);
    }
    const RadialProfile prof = psi_profile(radii, p, c.tol);
    if (format_of(c, "csv") == "csv") {
        std::ostringstream os;
        os << "r,psi,err\n";
        for (std::size_t i = 0; i < radii.size(); ++i) {
            os << format_number(radii[i]) << ',' << format_number(prof.psi_values[i]) << ','
               << format_number(prof.errors[i]) << '\n';
        }
        return Emission{os.str(), exit_code::ok, {}};
    }
    Json j;
    put_model(j, p);
    Json arr = Json::array();
    for (std::size_t i = 0; i < radii.size(); ++i) {
        arr.push_back(Json{{"r", radii[i]}, {"psi", prof.psi_values[i]}, {"err", prof.errors[i]}});
    }
    j["rows"] = arr;
    return json_emission(j);
}

Emission cmd_verify(const RunConfig& c) {
    format_of(c, "json");
    const ModelParams p = base_params(c);
    const int d = p.dim();
    const int k_max = c.k_max.value_or(10000);
    Json j;
    j["d"] = d;
    j["alpha"] = p.alpha();
    j["beta"] = p.beta();
    j["k_max"] = k_max;
    j["tol"] = c.tol;
    j["samples"] = c.samples;
    j["seed"] = c.seed;
    Json checks = Json::array();
    bool ok = true;
    auto add = [&](const std::vector<CheckResult>& list, const std::string& group) {
        ok = ok && all_passed(list);
        for (auto& item : checks_json(list, group)) checks.push_back(item);
    };

    const AppendixReport app = verify_appendix(p, k_max);
    add(app.checks, "ratio_sequence");
    Json notes;
    notes["x2_product"] = app.x2_product;
    notes["x2_closed_form"] = app.x2_display;
    notes["x2_closed_form_agrees"] = std::abs(app.x2_product - app.x2_display) <= 1e-9 * std::abs(app.x2_product);
    notes["x3_product"] = app.x3_product;
    notes["x3_closed_form"] = app.x3_display;
    j["notes"] = notes;

    // psi'(1) per kernel against the eigenvalues, and its zero in gamma against kappa.
    {
        std::vector<CheckResult> list;
        const RadialDerivative rep = psi_sigma_prime_at_one(p.repulsive(), p.d(), c.tol);
        const RadialDerivative att = psi_sigma_prime_at_one(p.attractive(), p.d(), c.tol);
        for (const auto& [name, rd] : {std::pair{"psi_prime_repulsive", rep}, std::pair{"psi_prime_attractive", att}}) {
            const double dev = std::abs(rd.value - rd.spectral) / std::max(1.0, std::abs(rd.spectral));
            list.push_back(CheckResult{name, dev <= 1e-6, dev,
                                       "finite difference " + format_number(rd.value) + ", spectral " +
                                           format_number(rd.spectral)});
        }
        const double root = -rep.value / att.value;
        const double k = kappa(p);
        const double dev = std::abs(root - k) / k;
        list.push_back(CheckResult{"psi_prime_zero_at_kappa", dev <= 1e-6, dev, "zero at gamma " + format_number(root)});
        add(list, "potential");
    }

    if (d == 2 || d == 3) {
        double worst = 0.0;
        for (const KernelExponent s : {p.repulsive(), p.attractive()}) {
            for (int k = 1; k <= 12; ++k) {
                const double ref = mu_k(s, k, p.d());
                const double fh = mu_k_funk_hecke(s, k, p.d(), 1e-10);
                worst = std::max(worst, std::abs(fh - ref) / std::max(1.0, std::abs(ref)));
            }
        }
        add({CheckResult{"funk_hecke_k_le_12", worst <= 1e-8, worst, {}}}, "oracle");

        const std::vector<double> ts = c.t_list.empty() ? default_t_list() : c.t_list;
        const Thresholds th = compute_thresholds(p);
        Json fug = Json::array();
        for (double g : {8.0 * th.gamma_star, 0.5 * th.gamma_star_star}) {
            const FugledeReport rep = verify_fuglede(p.with_gamma(g), c.degree, ts, FugledeOptions{16, c.tol});
            const std::string group = "fuglede_gamma_" + format_number(g);
            add(rep.checks, group);
            Json fj = fuglede_json(rep);
            fj["gamma"] = g;
            fug.push_back(fj);
        }
        j["fuglede"] = fug;

        const HarmonicCoefficients coeffs = random_band_limited(d, 4, c.seed);
        add({star_identity_check(p, coeffs, 0.05, d == 3 ? 16 : 64, c.tol, c.samples, c.seed)}, "oracle");
    } else {
        j["skipped"] = "sphere-based checks need d in {2,3}";
    }

    j["checks"] = checks;
    j["passed"] = ok;
    return json_emission(j, ok ? exit_code::ok : exit_code::verification_failed);
}

Emission cmd_fuglede(const RunConfig& c) {
    format_of(c, "json");
    const ModelParams p = coupled_params(c);
    const std::vector<double> ts = c.t_list.empty() ? default_t_list() : c.t_list;
    const FugledeReport rep = verify_fuglede(p, c.degree, ts, FugledeOptions{16, c.tol});
    Json j;
    put_model(j, p);
    const Json body = fuglede_json(rep);
    for (auto& [key, value] : body.items()) j[key] = value;
    j["checks"] = checks_json(rep.checks, "fuglede");
    j["passed"] = all_passed(rep.checks);
    return json_emission(j);
}

Emission cmd_counterexample(const RunConfig& c) {
    format_of(c, "json");
    const ModelParams p = coupled_params(c);
    const CounterexampleReport rep =
        find_counterexample(p, default_bump_radii(), CounterexampleOptions{c.tol, c.samples, c.seed});
    Json j;
    put_model(j, p);
    j["verdict"] = rep.verdict() ? Json(true) : Json("inconclusive");
    j["mode"] = to_string(rep.mode);
    Json scan;
    scan["psi_one"] = rep.scan.psi_one;
    scan["max_interior_excess"] = rep.scan.max_interior_excess;
    scan["interior_argmax"] = rep.scan.interior_argmax;
    scan["min_exterior_excess"] = rep.scan.min_exterior_excess;
    scan["exterior_argmin"] = rep.scan.exterior_argmin;
    scan["interior_violation"] = rep.scan.interior_violation;
    scan["exterior_violation"] = rep.scan.exterior_violation;
    scan["holds"] = rep.scan.holds;
    j["scan"] = scan;
    auto trial_json = [](const CounterexampleTrial& t) {
        Json tj;
        tj["delta"] = t.delta;
        tj["donor_center"] = {t.donor_center.x, t.donor_center.y, t.donor_center.z};
        tj["receiver_center"] = {t.receiver_center.x, t.receiver_center.y, t.receiver_center.z};
        tj["delta_f"] = estimate_json(t.delta_f);
        tj["leading_term"] = t.leading_term;
        tj["asymmetry"] = t.asymmetry;
        tj["negative"] = t.negative;
        return tj;
    };
    if (rep.found) {
        const CounterexampleTrial& t = rep.trials[*rep.found];
        j["delta"] = t.delta;
        j["delta_f"] = t.delta_f.value;
        j["delta_f_error"] = t.delta_f.error;
        j["asymmetry"] = t.asymmetry;
    }
    Json trials = Json::array();
    for (const CounterexampleTrial& t : rep.trials) trials.push_back(trial_json(t));
    j["trials"] = trials;
    return json_emission(j);
}

Emission cmd_mass_report(const RunConfig& c) {
    const ModelParams base = base_params(c);
    if (c.gamma && c.mass) throw InvalidParameters("--gamma and --mass are mutually exclusive");
    if (!c.gamma && !c.mass) throw InvalidParameters("mass-report needs --mass or --gamma");
    const double mass = c.mass ? *c.mass : gamma_to_mass(base.with_gamma(*c.gamma).gamma(), base);
    const MassReport r = mass_report(mass, c.d, c.alpha, c.beta);
    Json j;
    j["d"] = c.d;
    j["alpha"] = c.alpha;
    j["beta"] = c.beta;
    j["mass"] = r.mass;
    j["gamma"] = r.gamma;
    j["energy_scale"] = r.energy_scale;
    j["radius"] = r.radius;
    j["m_star"] = r.thresholds.m_star;
    j["m_star_star"] = r.thresholds.m_star_star;
    j["gamma_star"] = r.thresholds.gamma_star;
    j["gamma_star_star"] = r.thresholds.gamma_star_star;
    j["verdict"] = to_string(r.verdict);
    j["at_boundary"] = r.at_boundary;
    if (format_of(c, "json") == "json") return json_emission(j);
    std::ostringstream os;
    os << "d,alpha,beta,mass,gamma,m_star,m_star_star,verdict\n"
       << c.d << ',' << format_number(c.alpha) << ',' << format_number(c.beta) << ',' << format_number(r.mass)
       << ',' << format_number(r.gamma) << ',' << format_number(r.thresholds.m_star) << ','
       << format_number(r.thresholds.m_star_star) << ',' << to_string(r.verdict) << '\n';
    return Emission{os.str(), exit_code::ok, {}};
}

Emission run_command(const RunConfig& config) {
    try {
        const std::string& s = config.subcommand;
        if (s == "thresholds") return cmd_thresholds(config);
        if (s == "spectrum") return cmd_spectrum(config);
        if (s == "potential") return cmd_potential(config);
        if (s == "verify") return cmd_verify(config);
        if (s == "fuglede") return cmd_fuglede(config);
        if (s == "counterexample") return cmd_counterexample(config);
        if (s == "mass-report") return cmd_mass_report(config);
        return Emission{{}, exit_code::invalid, "unknown subcommand '" + s + "'"};
    } catch (const DomainError& e) {
        return Emission{{}, exit_code::invalid, e.what()};
    } catch (const ConvergenceError& e) {
        return Emission{{}, exit_code::no_convergence,
                        std::string(e.what()) + " (estimate " + format_number(e.estimate()) + ", error " +
                            format_number(e.achieved_error()) + ")"};
    } catch (const ComputationError& e) {
        return Emission{{}, exit_code::verification_failed, e.what()};
    }
}

}  // namespace nlstab
