#include <iostream>

#include "CLI11.hpp"
#include "trg/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Renormalization-group solver for weakly nonlinear ODEs"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", trg::kVersion);

    trg::RunConfig cfg;
    std::optional<double> eps, horizon;
    std::optional<int> k, m;
    std::optional<std::string> policy, equation, out_dir, report_file;
    std::vector<std::string> entries, positional;
    bool all = false;

    app.add_option("--entry", entries, "catalog entry id (repeatable)");
    app.add_option("--equation", equation, "equation spec: a file or inline mini-language text");
    app.add_option("--eps", eps, "perturbation parameter in (0, 1]");
    app.add_option("--order-k", k, "series order K in [1, 3]");
    app.add_option("--order-m", m, "jet order M in [1, 2]");
    app.add_option("--policy", policy, "projection policy")->check(CLI::IsMember({"fundamental", "paper-grouping"}));
    app.add_option("--horizon", horizon, "comparison horizon");
    app.add_option("--rel-tol", cfg.opts.rtol, "oracle relative tolerance")->capture_default_str();
    app.add_option("--abs-tol", cfg.opts.atol, "oracle absolute tolerance")->capture_default_str();
    app.add_option("--out", out_dir, "directory for report.json, report.txt and CSV tables");
    app.add_option("--seed", cfg.opts.seed, "seed for sampled bindings")->capture_default_str();
    app.add_flag("--json", cfg.json, "print the JSON report");
    app.add_flag("--csv", cfg.csv, "emit error tables as CSV");

    auto* run = app.add_subcommand("run", "run the pipeline on an entry or an ad-hoc equation");
    auto* verify = app.add_subcommand("verify", "verify catalog entries (all by default)");
    verify->add_option("ids", positional, "entry ids");
    verify->add_flag("--all", all, "verify every entry");
    app.add_subcommand("list", "print the catalog as JSON");
    auto* report = app.add_subcommand("report", "re-render a saved JSON report");
    report->add_option("file", report_file, "report.json")->required();
    (void)run;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    cfg.command = app.get_subcommands().front()->get_name();
    cfg.entries = entries;
    cfg.entries.insert(cfg.entries.end(), positional.begin(), positional.end());
    if (all) cfg.entries.clear();
    cfg.equation = equation;
    cfg.report_file = report_file;
    cfg.out_dir = out_dir;
    cfg.opts.eps = eps;
    cfg.opts.order_k = k;
    cfg.opts.order_m = m;
    cfg.opts.policy = policy;
    cfg.opts.horizon = horizon;
    return trg::run_command(cfg, std::cout, std::cerr);
}
