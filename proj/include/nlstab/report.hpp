#pragma once

// Command implementations behind the CLI. Each returns the full emission so
// output and exit code can be tested without a process boundary.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nlstab {

struct RunConfig {
    std::string subcommand;
    int d = 3;
    double alpha = 1.0;
    double beta = 4.0;
    std::optional<double> gamma;
    std::optional<double> mass;
    std::optional<int> k_max;
    double tol = 1e-9;
    std::int64_t samples = 1'000'000;
    std::uint64_t seed = 1;
    std::optional<std::string> format;  // json | csv; default depends on the command
    std::optional<std::string> out;
    int degree = 2;
    std::vector<double> t_list;
};

struct Emission {
    std::string text;
    int exit_code = 0;
    std::string diagnostics;  // for standard error
};

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int invalid = 1;
inline constexpr int no_convergence = 2;
inline constexpr int verification_failed = 3;
}  // namespace exit_code

Emission cmd_thresholds(const RunConfig& config);
Emission cmd_spectrum(const RunConfig& config);
Emission cmd_potential(const RunConfig& config);
Emission cmd_verify(const RunConfig& config);
Emission cmd_fuglede(const RunConfig& config);
Emission cmd_counterexample(const RunConfig& config);
Emission cmd_mass_report(const RunConfig& config);

/// Dispatches on config.subcommand and maps exceptions to exit codes:
/// invalid input 1, non-convergence 2, inconsistent computations 3.
Emission run_command(const RunConfig& config);

/// printf("%.17g").
std::string format_number(double x);

}  // namespace nlstab
