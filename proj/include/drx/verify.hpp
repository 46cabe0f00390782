// Named machine-checks over every module, grouped into suites, with
// golden-file comparison for regression pinning.
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "drx/model.hpp"

namespace drx {

enum class CheckStatus { pass, fail, not_applicable };
const char* check_status_name(CheckStatus s);

struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::fail;
    std::string detail;
};

inline ModelSpec default_verify_model() {
    ModelSpec s;
    s.p = Rational(1, 5);
    return s;
}

struct VerifyOptions {
    ModelSpec spec = default_verify_model();
    uint64_t seed = 20250814;
    size_t samples = 100000;
    int N = 8;                      // exact orbit depth where a depth applies
};

std::vector<std::string> verify_suites();
std::vector<CheckResult> run_verify_suite(const std::string& suite,
                                          const VerifyOptions& opt);

bool all_passed(const std::vector<CheckResult>& results);
std::string results_to_json(const std::vector<CheckResult>& results);

// Compares against a golden JSON document {"check name": "pass"|"fail"|"n/a"}.
// Returns human-readable mismatch descriptions (empty means agreement).
std::vector<std::string> compare_golden(const std::vector<CheckResult>& results,
                                        const std::string& golden_json_text);

} // namespace drx
