#pragma once

// Structured pass/fail results.  Log-space comparisons use a scaled
// tolerance |a - b| <= tol * max(1, |expected|), since the log values
// themselves reach ~1e6 where absolute doubles carry ~1e-10 of noise.

#include <cmath>
#include <string>
#include <vector>

namespace qr3 {

struct CheckResult {
    std::string name;
    double measured = 0.0;
    double expected = 0.0;
    double tol = 0.0;
    std::string mode; // "log-scaled", "abs", "rel", "bool", "upper-bound"
    bool pass = false;
};

struct VerificationReport {
    std::string suite;
    std::vector<CheckResult> checks;

    VerificationReport() = default;
    explicit VerificationReport(std::string name) : suite(std::move(name)) {}

    bool check_log(const std::string& name, double measured, double expected, double tol) {
        const bool ok = std::fabs(measured - expected) <= tol * std::max(1.0, std::fabs(expected));
        checks.push_back({name, measured, expected, tol, "log-scaled", ok});
        return ok;
    }
    bool check_abs(const std::string& name, double measured, double expected, double tol) {
        const bool ok = std::fabs(measured - expected) <= tol;
        checks.push_back({name, measured, expected, tol, "abs", ok});
        return ok;
    }
    bool check_rel(const std::string& name, double measured, double expected, double tol) {
        const bool ok = std::fabs(measured - expected) <= tol * std::fabs(expected);
        checks.push_back({name, measured, expected, tol, "rel", ok});
        return ok;
    }
    bool check_upper(const std::string& name, double measured, double bound) {
        const bool ok = measured <= bound;
        checks.push_back({name, measured, bound, 0.0, "upper-bound", ok});
        return ok;
    }
    bool check_true(const std::string& name, bool ok) {
        checks.push_back({name, ok ? 1.0 : 0.0, 1.0, 0.0, "bool", ok});
        return ok;
    }
    void merge(const VerificationReport& other) {
        for (const auto& c : other.checks) {
            CheckResult copy = c;
            copy.name = other.suite + ": " + c.name;
            checks.push_back(copy);
        }
    }
    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    std::size_t failures() const {
        std::size_t n = 0;
        for (const auto& c : checks)
            if (!c.pass) ++n;
        return n;
    }
};

} // namespace qr3
