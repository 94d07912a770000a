#pragma once

#include <functional>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "cl3/family.hpp"
#include "cl3/rank3.hpp"

namespace cl3 {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

struct AcceptanceOptions {
    unsigned threads = 1;
    /// Scratch directory for the cache round-trip; a temp dir when empty.
    std::string work_dir;
};

/// Family texts every admissible-family check runs over.
const std::vector<std::string>& family_corpus();

/// Names accepted by run_suite: "acceptance" (all), "core" (1, 2, 11), "stats" (3-6),
/// "witness" (7-10), or a single criterion "c1" .. "c11".
std::vector<std::string> suite_names();

/// Runs the suite, printing one line per criterion as it finishes.
/// Throws std::invalid_argument for an unknown suite name.
std::vector<CriterionResult> run_suite(const std::string& suite, const AcceptanceOptions& opts, std::ostream& out);

std::string format_result(const CriterionResult& r);

}  // namespace cl3
