#pragma once

#include <string>
#include <utility>
#include <vector>

namespace meanly {

// One verified inequality: lhs <= rhs (or a boolean fact), with the margin
// rhs - lhs recorded in whatever domain the caller worked in (log domain for
// weight inequalities, plain reals for quadrature bounds).
struct CheckEntry {
    std::string name;
    bool passed = false;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    std::string note;  // formula or anchor string this entry certifies
};

// A pass/fail certificate bundle. `config` echoes every parameter the result
// depends on so a report is reproducible from its own JSON; insertion order
// is preserved to keep serialized output byte-identical across runs.
struct CheckReport {
    std::string title;
    std::vector<std::pair<std::string, std::string>> config;
    std::vector<CheckEntry> entries;
    std::vector<std::string> notices;

    bool all_passed() const {
        for (const CheckEntry& e : entries)
            if (!e.passed) return false;
        return true;
    }

    CheckEntry& add(const std::string& name, bool passed, double lhs,
                    double rhs, double margin, const std::string& note = "") {
        entries.push_back({name, passed, lhs, rhs, margin, note});
        return entries.back();
    }

    void set_config(const std::string& key, const std::string& value) {
        for (auto& kv : config) {
            if (kv.first == key) {
                kv.second = value;
                return;
            }
        }
        config.emplace_back(key, value);
    }

    void notice(const std::string& msg) { notices.push_back(msg); }
};

// Deterministic JSON rendering (stable key order, fixed float formatting).
std::string report_to_json(const CheckReport& report, int indent = 2);

}  // namespace meanly
