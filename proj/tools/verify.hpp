#pragma once

// The twelve acceptance criteria, each run with fixed seeds and the
// intervals of thresholds.hpp.

#include <string>
#include <utility>
#include <vector>

#include "growth/thresholds.hpp"
#include "json.hpp"

namespace growth::verify {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::vector<std::pair<std::string, double>> estimates;
    std::vector<std::pair<std::string, double>> std_errors;
    std::string detail;
    double seconds = 0.0;
    double limit_seconds = 0.0;
};

inline constexpr int kCriteria = 12;

// "full" (1..12), "deterministic" (8, 9) or "statistical" (the rest).
std::vector<int> suite_criteria(const std::string& suite);

// Runs one criterion; the pass flag also requires the runtime limit.
CriterionResult run_criterion(int id, const Thresholds& th, unsigned threads = 0);

// "[PASS] 1 corner growth shape: mean=3.95 ... (12.3 s)".
std::string format_line(const CriterionResult& r);
nlohmann::json to_json(const CriterionResult& r);

}  // namespace growth::verify
