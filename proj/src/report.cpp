#include "sburg/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "sburg/field_io.hpp"

namespace sburg {

const char* kCodeVersion = "0.1.0";

Assertion check_le(const std::string& name, double value, double threshold, double se) {
    return {name, value, se, threshold, "<=", value <= threshold};
}

Assertion check_ge(const std::string& name, double value, double threshold, double se) {
    return {name, value, se, threshold, ">=", value >= threshold};
}

Assertion check_abs_le(const std::string& name, double value, double threshold, double se) {
    return {name, value, se, threshold, "abs<=", std::fabs(value) <= threshold};
}

Assertion check_true(const std::string& name, bool ok) {
    return {name, ok ? 1.0 : 0.0, 0.0, 1.0, "==", ok};
}

bool Report::all_pass() const {
    return std::all_of(assertions.begin(), assertions.end(),
                       [](const Assertion& a) { return a.pass; });
}

Assertion& Report::add(Assertion a) {
    assertions.push_back(std::move(a));
    return assertions.back();
}

void write_report_json(const Report& rep, const std::filesystem::path& file) {
    nlohmann::json j;
    j["suite"] = rep.suite;
    j["all_pass"] = rep.all_pass();
    j["assertions"] = nlohmann::json::array();
    for (const auto& a : rep.assertions) {
        j["assertions"].push_back({{"name", a.name},
                                   {"value", a.value},
                                   {"se", a.se},
                                   {"threshold", a.threshold},
                                   {"cmp", a.cmp},
                                   {"pass", a.pass}});
    }
    std::ofstream os(file);
    if (!os) throw std::runtime_error("report: cannot open " + file.string());
    os << j.dump(2) << "\n";
}

Report read_report_json(const std::filesystem::path& file) {
    std::ifstream is(file);
    if (!is) throw std::runtime_error("report: cannot open " + file.string());
    nlohmann::json j;
    is >> j;
    Report rep;
    rep.suite = j.value("suite", "");
    for (const auto& a : j["assertions"]) {
        rep.assertions.push_back({a.at("name").get<std::string>(), a.at("value").get<double>(),
                                  a.at("se").get<double>(), a.at("threshold").get<double>(),
                                  a.at("cmp").get<std::string>(), a.at("pass").get<bool>()});
    }
    return rep;
}

int aggregate_reports(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::recursive_directory_iterator(dir))
        if (e.is_regular_file() && e.path().string().ends_with(".report.json"))
            files.push_back(e.path());
    std::sort(files.begin(), files.end());

    std::ofstream csv(dir / "summary.csv");
    std::ofstream txt(dir / "summary.txt");
    csv << "suite,assertion,value,se,threshold,cmp,pass\n" << std::setprecision(17);
    int failures = 0;
    for (const auto& f : files) {
        const Report rep = read_report_json(f);
        for (const auto& a : rep.assertions) {
            csv << rep.suite << "," << a.name << "," << a.value << "," << a.se << ","
                << a.threshold << "," << a.cmp << "," << (a.pass ? 1 : 0) << "\n";
            txt << (a.pass ? "PASS " : "FAIL ") << rep.suite << " :: " << a.name
                << " (value=" << std::setprecision(6) << a.value << ", threshold " << a.cmp
                << " " << a.threshold << ")\n";
            if (!a.pass) ++failures;
        }
    }
    return failures;
}

std::string Manifest::content_hash() const {
    std::ostringstream ss;
    ss << config_hash << "|" << code_version << "|" << seed;
    for (const auto& [name, hash] : files) ss << "|" << name << ":" << hash;
    return fnv1a_hex(ss.str());
}

void write_manifest(const Manifest& m, const std::filesystem::path& file) {
    nlohmann::json j;
    j["config_hash"] = m.config_hash;
    j["code_version"] = m.code_version;
    j["seed"] = m.seed;
    j["files"] = nlohmann::json::array();
    for (const auto& [name, hash] : m.files) j["files"].push_back({{"name", name}, {"hash", hash}});
    j["content_hash"] = m.content_hash();
    std::ofstream os(file);
    if (!os) throw std::runtime_error("manifest: cannot open " + file.string());
    os << j.dump(2) << "\n";
}

}  // namespace sburg
