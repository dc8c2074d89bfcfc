// Acceptance gate: runs every suite on the shipped acceptance configs and
// prints one PASS/FAIL line per criterion. Exit status is nonzero if any
// criterion (or any supporting suite assertion) fails.
//
// Usage: acceptance <configs_dir> <out_dir> [threads]

#include <cstdio>
#include <cstring>
#include <exception>
#include <map>
#include <string>
#include <vector>

#include "sburg/config.hpp"
#include "sburg/experiments.hpp"
#include "sburg/parallel.hpp"

using namespace sburg;

namespace {

struct Criterion {
    int number;
    std::string description;
    std::string suite;
    std::vector<std::string> prefixes;
};

const std::vector<Criterion> kCriteria = {
    {1, "noise law: psi covariance matches the fixed-time formula (5 SE, all lags)",
     "covariance", {"psi covariance"}},
    {2, "exact discrete structure: comparison, L1, conservation, Y_G monotone",
     "structure", {"comparison:", "L1 contraction:", "conservation:", "Y_G"}},
    {3, "moment bounds: Var u <= ||rho||^2, E(du)^2 <= ||rho'||^2, equality at T",
     "moments", {"variance bound", "gradient bound", "gradient identity"}},
    {4, "gamma structure and cross-stack equality (polymer vs heights)",
     "gamma",
     {"polymer gamma", "overlap", "height gamma", "cross-stack", "trapezoid",
      "inner-sample-size"}},
    {5, "crossing-dissipation inequality audit", "structure", {"dissipation audit"}},
    {6, "shear invariance of moment statistics", "moments", {"shear invariance"}},
    {7, "basin stability: sandwich exact, Y_G decay below the frozen factor",
     "stability", {"basin:"}},
    {8, "ordering of equilibrated pairs", "stability", {"ordering:"}},
    {9, "Cole-Hopf ladder mismatch halves under refinement", "gamma", {"ladder"}},
};

bool matches(const Criterion& c, const std::string& suite, const std::string& name) {
    if (suite != c.suite) return false;
    for (const auto& p : c.prefixes)
        if (name.rfind(p, 0) == 0) return true;
    return false;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::fprintf(stderr, "usage: acceptance <configs_dir> <out_dir> [threads]\n");
        return 2;
    }
    const std::filesystem::path configs = argv[1];
    const std::filesystem::path out = argv[2];
    const int threads = argc > 3 ? std::atoi(argv[3]) : hardware_threads();

    const std::vector<std::string> suites = {"covariance", "structure", "moments", "gamma",
                                             "stability"};
    std::vector<std::pair<std::string, Assertion>> all;  // (suite, assertion)
    try {
        for (const auto& name : suites) {
            const auto cfg = ExperimentConfig::load(configs / (name + ".json"));
            SuiteOptions opts;
            opts.out_dir = out / name;
            opts.threads = threads;
            std::printf("[acceptance] running %s suite (threads=%d)...\n", name.c_str(), threads);
            std::fflush(stdout);
            const Report rep = run_suite(cfg, opts);
            for (const auto& a : rep.assertions) all.emplace_back(rep.suite, a);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "acceptance: suite failed to run: %s\n", e.what());
        return 2;
    }

    int failures = 0;
    std::printf("\n==== acceptance criteria ====\n");
    for (const auto& c : kCriteria) {
        bool pass = true;
        int hits = 0;
        for (const auto& [suite, a] : all) {
            if (!matches(c, suite, a.name)) continue;
            ++hits;
            pass = pass && a.pass;
        }
        if (hits == 0) pass = false;
        if (!pass) ++failures;
        std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", c.number,
                    c.description.c_str());
        for (const auto& [suite, a] : all) {
            if (!matches(c, suite, a.name)) continue;
            std::printf("       %s %s (value=%.6g %s %.6g, se=%.3g)\n", a.pass ? "ok  " : "FAIL",
                        a.name.c_str(), a.value, a.cmp.c_str(), a.threshold, a.se);
        }
    }

    std::printf("\n---- supporting checks ----\n");
    for (const auto& [suite, a] : all) {
        bool in_criterion = false;
        for (const auto& c : kCriteria) in_criterion = in_criterion || matches(c, suite, a.name);
        if (in_criterion) continue;
        if (!a.pass) ++failures;
        std::printf("%s %s :: %s (value=%.6g %s %.6g, se=%.3g)\n", a.pass ? "PASS" : "FAIL",
                    suite.c_str(), a.name.c_str(), a.value, a.cmp.c_str(), a.threshold, a.se);
    }

    std::printf("\n%s (%d failing)\n", failures == 0 ? "ALL CRITERIA PASS" : "FAILURES PRESENT",
                failures);
    return failures == 0 ? 0 : 1;
}
