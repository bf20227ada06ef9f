#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <iosfwd>
#include <string>
#include <vector>

namespace sheetlab::cli {

enum class Command { Density, Moments, Solve, McCompare, Residual, Equivalence };

struct RunConfig {
    Command command = Command::Solve;

    // Clock and problem shape. beta is kept as text so "1/3" stays an exact nu-path.
    std::string kind = "btbs";
    std::string beta;
    int n = 1;
    int d = 1;
    int j = 1;

    std::string f = "gaussian";
    double f_c = 1.0;
    double f_alpha = 1.0;
    bool bounded_only = false;
    std::string functional = "u";

    // Axis lists: comma-separated axes, each a value or lo:hi:count.
    std::string t = "1";
    std::string x = "0";
    std::string source;  // density only; defaults to the origin

    std::string kernel = "inv-subordinator";

    std::size_t inner = 24;
    std::size_t outer = 64;
    double tolerance = 0.0;  // 0 selects the per-n default
    std::string inner_rule = "gauss-hermite";

    double k = 1.0;
    std::string route = "closed-form";
    std::size_t samples = 100'000;
    std::uint64_t seed = 20240601;

    std::string system = "fourth-order";
    double t_lo = 0.5, t_hi = 2.0, tau = 1e-3;
    double x_lo = -1.0, x_hi = 1.0, h = 1.0 / 16.0;
    std::size_t t_points = 0;
    std::string other_t;  // sets of n-1 times separated by ';', values by ','
    int levels = 1;
    bool per_point = false;

    std::string output;

    void validate() const;
    // Every setting that affects results, one key=value per line in a fixed order.
    std::string canonical() const;
};

const char* to_string(Command command);

struct ConfigError : std::exception {
    explicit ConfigError(std::string m) : message(std::move(m)) {}
    const char* what() const noexcept override { return message.c_str(); }
    std::string message;
};

// Flags override values read from --config <file> (flat key=value lines).
// Throws ConfigError on any parse or validation failure; returns false when
// help was requested and printed.
bool parse_args(int argc, const char* const* argv, RunConfig& config, std::ostream& out);

// Runs the command, writes artifacts, prints a one-line summary to `out`.
void run(const RunConfig& config, std::ostream& out);

// Full front end: parse, validate, run, and map failures to exit status
// (2 for configuration errors, 3 for numerical failures) with an error line on `err`.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

std::vector<std::vector<double>> parse_axes(const std::string& text);

}  // namespace sheetlab::cli
