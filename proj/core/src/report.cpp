#include "meanly/report.hpp"

#include <json.hpp>

namespace meanly {

std::string report_to_json(const CheckReport& report, int indent) {
    nlohmann::ordered_json j;
    j["title"] = report.title;
    nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
    for (const auto& kv : report.config) cfg[kv.first] = kv.second;
    j["config"] = cfg;
    j["all_passed"] = report.all_passed();
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    for (const CheckEntry& e : report.entries) {
        nlohmann::ordered_json je;
        je["name"] = e.name;
        je["passed"] = e.passed;
        je["lhs"] = e.lhs;
        je["rhs"] = e.rhs;
        je["margin"] = e.margin;
        if (!e.note.empty()) je["note"] = e.note;
        entries.push_back(je);
    }
    j["checks"] = entries;
    if (!report.notices.empty()) j["notices"] = report.notices;
    return j.dump(indent);
}

}  // namespace meanly
