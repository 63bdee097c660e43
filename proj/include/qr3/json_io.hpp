#pragma once

// JSON adapters for reports and survey results (nlohmann/json).

#include <string>

#include <json.hpp>

#include "qr3/report.hpp"
#include "qr3/verify.hpp"

namespace qr3 {

using json = nlohmann::json;

inline json to_json(const CheckResult& c) {
    return json{{"name", c.name},     {"measured", c.measured}, {"expected", c.expected},
                {"tol", c.tol},       {"mode", c.mode},         {"pass", c.pass}};
}

inline json to_json(const VerificationReport& r) {
    json checks = json::array();
    for (const auto& c : r.checks) checks.push_back(to_json(c));
    return json{{"suite", r.suite}, {"passed", r.all_passed()}, {"checks", checks}};
}

inline json to_json(const SurveyReport& s) {
    return json{{"region", s.region},      {"accepted", s.accepted},
                {"excluded", s.excluded},  {"degenerate", s.degenerate},
                {"negative_det", s.negative_det},
                {"KO_sup", s.KO_sup},      {"KI_sup", s.KI_sup},
                {"K_sup", s.K_sup},        {"K_q50", s.K_q50},
                {"K_q90", s.K_q90},        {"K_q99", s.K_q99}};
}

} // namespace qr3
