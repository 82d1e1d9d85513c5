#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace betamix::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_violated = 1,
    exit_bad_input = 2,
    exit_evaluation_failed = 3,
    exit_degenerate = 4,
};

struct RunConfig {
    std::string command;
    std::optional<std::string> input_path;
    std::optional<double> order;
    std::optional<double> ratio;
    std::optional<double> index;
    std::optional<double> n;
    std::optional<double> q;
    std::optional<long long> k;
    std::optional<int> grid_points;
    double eps = 1e-6;
    double tol = 1e-9;
    int quad_panels = 8;
    int quad_nodes = 16;
    std::uint64_t seed = 0;
    std::optional<long long> count;
    std::string format;
    std::optional<std::string> out_path;
    bool debug_negate = false;
};

/// Runs one command line (without the program name). Data goes to `out`
/// unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace betamix::cli
