#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace sburg {

/// One checked assertion: `value` compared against `threshold` with `cmp`
/// ("<=", ">=", "abs<="); `se` is the Monte Carlo standard error when the
/// check is statistical (0 for exact checks).
struct Assertion {
    std::string name;
    double value = 0.0;
    double se = 0.0;
    double threshold = 0.0;
    std::string cmp = "<=";
    bool pass = false;
};

Assertion check_le(const std::string& name, double value, double threshold, double se = 0.0);
Assertion check_ge(const std::string& name, double value, double threshold, double se = 0.0);
/// |value| <= threshold
Assertion check_abs_le(const std::string& name, double value, double threshold, double se = 0.0);
Assertion check_true(const std::string& name, bool ok);

struct Report {
    std::string suite;
    std::vector<Assertion> assertions;

    bool all_pass() const;
    Assertion& add(Assertion a);
};

void write_report_json(const Report& rep, const std::filesystem::path& file);
Report read_report_json(const std::filesystem::path& file);

/// Aggregates every *.report.json under `dir` into summary.csv and
/// summary.txt; returns the number of failing assertions.
int aggregate_reports(const std::filesystem::path& dir);

/// Run manifest: config hash, code version, seeds, and output file hashes --
/// enough to reproduce the run bit-exactly and to fingerprint its outputs.
struct Manifest {
    std::string config_hash;
    std::string code_version;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> files;  // (name, hash)
    std::string content_hash() const;
};

void write_manifest(const Manifest& m, const std::filesystem::path& file);

extern const char* kCodeVersion;

}  // namespace sburg
