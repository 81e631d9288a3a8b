#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "otcert/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Certified bounds on repeated target visits for scalar stochastic systems"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string spec_path;
    std::string out_path;
    std::string trajectory_path;
    std::optional<long long> samples;
    std::optional<std::uint64_t> seed;
    std::optional<int> depth;
    std::optional<double> slack;
    double confidence = 0.99;
    std::string variant;

    app.add_option("--spec", spec_path, "run config file (JSON)");
    app.add_option("--out", out_path, "output CSV path (default depends on the command)");
    app.add_option("--samples", samples, "override run.samples");
    app.add_option("--seed", seed, "override run.seed");
    app.add_option("--depth", depth, "override run.depth (max Bernstein subdivision depth)");
    app.add_option("--slack", slack, "override run.slack (certification tolerance)");
    app.add_option("--confidence", confidence, "confidence level for binomial intervals");

    CLI::App* check = app.add_subcommand("check", "verify the certificate drift conditions");
    CLI::App* bound =
        app.add_subcommand("bound", "evaluate certified bounds over the (N, k) grid");
    CLI::App* simulate =
        app.add_subcommand("simulate", "Monte Carlo estimates of the occupation probabilities");
    simulate->add_option("--trajectories", trajectory_path,
                         "also dump sample trajectories to this CSV");
    CLI::App* validate =
        app.add_subcommand("validate", "check certified bounds against Monte Carlo estimates");
    CLI::App* reproduce =
        app.add_subcommand("reproduce", "regenerate the bundled demo bound tables");
    reproduce->add_option("variant", variant, "example1 or example2")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        auto load_config = [&]() {
            if (spec_path.empty()) {
                throw std::invalid_argument("--spec PATH is required for this command");
            }
            otcert::RunConfig cfg = otcert::parse_spec_file(spec_path);
            if (samples) cfg.samples = *samples;
            if (seed) cfg.seed = *seed;
            if (depth) cfg.depth = *depth;
            if (slack) cfg.slack = *slack;
            return cfg;
        };
        if (check->parsed()) {
            return otcert::cmd_check(load_config(), std::cout);
        }
        if (bound->parsed()) {
            return otcert::cmd_bound(load_config(), out_path.empty() ? "bounds.csv" : out_path,
                                     std::cout);
        }
        if (simulate->parsed()) {
            return otcert::cmd_simulate(load_config(), confidence,
                                        out_path.empty() ? "estimates.csv" : out_path,
                                        trajectory_path, std::cout);
        }
        if (validate->parsed()) {
            return otcert::cmd_validate(load_config(), confidence,
                                        out_path.empty() ? "validate.csv" : out_path, std::cout);
        }
        if (reproduce->parsed()) {
            std::string fallback = variant == "example2" ? "table2.csv" : "table1.csv";
            return otcert::cmd_reproduce(variant, out_path.empty() ? fallback : out_path,
                                         std::cout);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return otcert::exit_fail;
    }
    return otcert::exit_fail;
}
