// Command-line entry point: every experiment is driven by a JSON config and
// writes its curves, reports, and a reproduction manifest into --out.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>

#include "sburg/config.hpp"
#include "sburg/experiments.hpp"
#include "sburg/parallel.hpp"
#include "sburg/report.hpp"

namespace {

struct CommonArgs {
    std::string config;
    std::string out;
    int threads = sburg::hardware_threads();
    std::uint64_t seed = 0;
    bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config, "JSON experiment config")->required();
    cmd->add_option("--out", args.out, "output directory (defaults to the config's output_dir)");
    cmd->add_option("--threads", args.threads, "realization-level parallelism");
    cmd->add_option("--seed", args.seed, "override the config's master seed")
        ->each([&](const std::string&) { args.seed_set = true; });
}

int run_kind(const std::string& kind, const CommonArgs& args) {
    sburg::ExperimentConfig cfg = sburg::ExperimentConfig::load(args.config);
    if (!kind.empty() && cfg.experiment_kind != kind) {
        std::fprintf(stderr, "config experiment.kind is '%s' but the subcommand expects '%s'\n",
                     cfg.experiment_kind.c_str(), kind.c_str());
        return 2;
    }
    sburg::SuiteOptions opts;
    opts.out_dir = args.out.empty() ? cfg.output_dir : args.out;
    opts.threads = args.threads;
    if (args.seed_set) opts.seed_override = args.seed;
    const sburg::Report rep = sburg::run_suite(cfg, opts);
    for (const auto& a : rep.assertions)
        std::printf("%s %s :: %s (value=%.6g, threshold %s %.6g)\n", a.pass ? "PASS" : "FAIL",
                    rep.suite.c_str(), a.name.c_str(), a.value, a.cmp.c_str(), a.threshold);
    return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stochastic Burgers laboratory"};
    app.require_subcommand(1);

    CommonArgs args;
    auto* simulate = app.add_subcommand("simulate", "run and persist a trajectory");
    add_common(simulate, args);
    auto* covariance = app.add_subcommand("covariance-check", "psi covariance acceptance");
    add_common(covariance, args);
    auto* structure = app.add_subcommand("structure-suite", "exact discrete invariants");
    add_common(structure, args);
    auto* moments = app.add_subcommand("moments-suite", "moment bound and shear audits");
    add_common(moments, args);
    auto* gamma = app.add_subcommand("gamma", "polymer + Cole-Hopf gamma cross-check");
    add_common(gamma, args);
    auto* stability = app.add_subcommand("stability", "basin stability experiment");
    add_common(stability, args);

    std::string report_dir;
    auto* report = app.add_subcommand("report", "aggregate JSON reports into a summary table");
    report->add_option("dir", report_dir, "directory containing *.report.json files")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return run_kind("simulate", args);
        if (covariance->parsed()) return run_kind("covariance", args);
        if (structure->parsed()) return run_kind("structure", args);
        if (moments->parsed()) return run_kind("moments", args);
        if (gamma->parsed()) return run_kind("gamma", args);
        if (stability->parsed()) return run_kind("stability", args);
        if (report->parsed()) {
            const int failures = sburg::aggregate_reports(report_dir);
            std::printf("summary written to %s (failures: %d)\n", report_dir.c_str(), failures);
            return failures == 0 ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
