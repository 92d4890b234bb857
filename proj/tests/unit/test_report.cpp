#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlstab/report.hpp"
#include "nlstab/spectral.hpp"

using namespace nlstab;
using nlohmann::json;

namespace {

RunConfig config(const std::string& cmd, int d = 3, double alpha = 1.0, double beta = 4.0) {
    RunConfig c;
    c.subcommand = cmd;
    c.d = d;
    c.alpha = alpha;
    c.beta = beta;
    return c;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST_CASE("thresholds emission") {
    const Emission e = run_command(config("thresholds"));
    REQUIRE(e.exit_code == 0);
    const json j = json::parse(e.text);
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    std::sort(keys.begin(), keys.end());
    CHECK(keys == std::vector<std::string>{"alpha", "beta", "beta_star", "d", "gamma_star", "gamma_star_star",
                                           "kappa", "m_star", "m_star_star", "regime"});
    CHECK(j["gamma_star"].get<double>() == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(j["beta_star"].get<double>() == doctest::Approx(22.0).epsilon(1e-12));
    CHECK(j["regime"] == "beta_below_star");
    // Round trip: re-deriving gamma_* from the emitted parameters.
    const ModelParams p(j["d"].get<int>(), j["alpha"].get<double>(), j["beta"].get<double>());
    CHECK(std::abs(gamma_star(p) - j["gamma_star"].get<double>()) <= 1e-12 * gamma_star(p));

    RunConfig csv = config("thresholds");
    csv.format = "csv";
    const auto rows = parse_csv(run_command(csv).text);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].size() == 10);
    CHECK(std::stod(rows[1][5]) == gamma_star(p));
}

TEST_CASE("invalid parameters exit with 1") {
    const Emission e = run_command(config("thresholds", 3, 2.5, 1.0));
    CHECK(e.exit_code == 1);
    CHECK(e.diagnostics.find("never stable for the functional") != std::string::npos);
    CHECK(run_command(config("thresholds", 3, 1.0, -1.0)).exit_code == 1);
    RunConfig both = config("potential");
    both.gamma = 0.2;
    both.mass = 1.0;
    CHECK(run_command(both).exit_code == 1);
    CHECK(run_command(config("potential")).exit_code == 1);
    CHECK(run_command(config("nonsense")).exit_code == 1);
    RunConfig fmt = config("thresholds");
    fmt.format = "xml";
    CHECK(run_command(fmt).exit_code == 1);
}

TEST_CASE("non-convergence exits with 2") {
    RunConfig c = config("potential");
    c.gamma = 0.2;
    c.tol = 1e-30;
    CHECK(run_command(c).exit_code == 2);
}

TEST_CASE("spectrum emission") {
    RunConfig c = config("spectrum", 3, 1.0, 5.0);
    c.k_max = 40;
    const auto rows = parse_csv(run_command(c).text);
    REQUIRE(rows.size() == 42);
    CHECK(rows[0] == std::vector<std::string>{"k", "mu_rep", "mu_att", "ratio", "x_k"});
    CHECK(rows[1][1] == "0");
    CHECK(rows[1][2] == "0");
    CHECK(rows[1][3].empty());
    CHECK(rows[2][4].empty());
    for (std::size_t i = 4; i < rows.size(); ++i) CHECK(std::stod(rows[i][4]) > std::stod(rows[i - 1][4]));
    CHECK(std::stod(rows.back()[4]) < 1.0);

    RunConfig high = config("spectrum", 3, 1.0, 155.0);
    high.k_max = 40;
    const auto hr = parse_csv(run_command(high).text);
    double best = -1.0;
    int arg = -1;
    for (std::size_t i = 3; i < hr.size(); ++i) {
        const double x = std::stod(hr[i][4]);
        if (x > best) {
            best = x;
            arg = std::stoi(hr[i][0]);
        }
    }
    CHECK(arg == 3);

    // Full precision numbers round-trip.
    const double mu = std::stod(rows[3][1]);
    CHECK(mu == mu_k(KernelExponent(-1.0), 2, Dimension(3)));
}

TEST_CASE("potential emission") {
    RunConfig c = config("potential");
    c.gamma = 1.0 / 7.0;
    const Emission a = run_command(c);
    REQUIRE(a.exit_code == 0);
    const auto rows = parse_csv(a.text);
    CHECK(rows[0] == std::vector<std::string>{"r", "psi", "err"});
    CHECK(rows[1][0] == "0");
    const double w = unit_ball_volume(3);
    CHECK(std::stod(rows[1][1]) == doctest::Approx(3.0 * w / 2.0 + c.gamma.value() * 3.0 * w / 7.0).epsilon(1e-12));
    CHECK(run_command(c).text == a.text);

    RunConfig m = config("potential");
    m.mass = gamma_to_mass(1.0 / 7.0, ModelParams(3, 1.0, 4.0));
    m.format = "json";
    const json j = json::parse(run_command(m).text);
    CHECK(j["gamma"].get<double>() == doctest::Approx(1.0 / 7.0).epsilon(1e-12));
    CHECK(j.contains("mass"));
}

TEST_CASE("mass report emission") {
    RunConfig c = config("mass-report");
    c.mass = mass_thresholds(ModelParams(3, 1.0, 4.0)).m_star;
    const json j = json::parse(run_command(c).text);
    CHECK(j["verdict"] == "stable_minimum");
    CHECK(j["at_boundary"] == true);
    RunConfig g = config("mass-report");
    g.gamma = 1.0 / 48.0;
    const json k = json::parse(run_command(g).text);
    CHECK(k["verdict"] == "stable_maximum");
    CHECK(k["gamma"].get<double>() == doctest::Approx(1.0 / 48.0).epsilon(1e-12));
}

TEST_CASE("counterexample emission") {
    RunConfig c = config("counterexample");
    c.gamma = 1.0 / 7.0;
    const json yes = json::parse(run_command(c).text);
    CHECK(yes["verdict"] == true);
    CHECK(yes["asymmetry"].get<double>() ==
          doctest::Approx(2.0 * unit_ball_volume(3) * std::pow(yes["delta"].get<double>(), 3)).epsilon(1e-14));
    CHECK(yes["delta_f"].get<double>() < 0.0);

    c.gamma = 0.5;
    const Emission e = run_command(c);
    CHECK(e.exit_code == 0);
    CHECK(json::parse(e.text)["verdict"] == "inconclusive");
}

TEST_CASE("fuglede emission") {
    RunConfig c = config("fuglede");
    c.gamma = 1.0;
    c.t_list = {0.02, 0.01};
    const json j = json::parse(run_command(c).text);
    CHECK(j["passed"] == true);
    CHECK(j["rows"].size() == 2);
    CHECK(j["mode"] == "volume_barycenter");
}

TEST_CASE("number formatting") {
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(format_number(22.0) == "22");
}
