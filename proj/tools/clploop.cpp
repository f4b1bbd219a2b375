#include "clploop/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    using namespace clploop::cli;

    CLI::App app{"clploop: proves non-termination of atomic queries for binary CLP(Q) clauses"};
    app.require_subcommand(1);

    Flags flags;
    std::string file;
    std::string query;

    auto common = [&](CLI::App* sub) {
        sub->add_option("file", file, "program file")->required();
        sub->add_flag("--json", flags.json, "machine-readable report");
        sub->add_flag("--first-only", flags.first_only, "stop at the first passing position set per clause");
        sub->add_option("--verify-steps", flags.verify_steps, "engine steps every witness must survive (0 disables)");
        sub->add_flag("--trace", flags.trace, "print derivation traces");
        sub->add_flag("--explain", flags.explain, "print the outcome of every position subset");
        sub->add_option("--max-dnf", flags.max_dnf, "ceiling on DNF size before aborting");
        sub->add_flag("--no-propagate", flags.no_propagate, "skip loop propagation across clauses");
    };

    auto* analyze = app.add_subcommand("analyze", "search looping queries for every clause");
    common(analyze);

    auto* check = app.add_subcommand("check", "decide whether a query is proved looping");
    common(check);
    check->add_option("--query", query, "query `atom : constraints.`")->required();
    check->add_option("--run", flags.run_steps, "also run the query for K engine steps");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    if (*analyze) return cmd_analyze(file, flags, std::cout, std::cerr);
    return cmd_check(file, query, flags, std::cout, std::cerr);
}
