#pragma once

// The acceptance battery: one self-contained check per shipped guarantee,
// each printing a single PASS/FAIL line with its measured numbers.  All
// tolerances live in acceptance.cpp next to the checks.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace wkz {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double seconds = 0.0;
    std::string detail;
};

// Runs criteria (all, or just `only`); returns results and appends the
// canonical report text to `report`.  seed drives every random draw.
std::vector<CriterionResult> run_acceptance(uint64_t seed, std::optional<int> only,
                                            std::string& report);

std::string format_acceptance_line(const CriterionResult& r);

} // namespace wkz
