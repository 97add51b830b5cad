#pragma once

#include <functional>
#include <string>
#include <vector>

namespace hhj {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    std::vector<int> only;  // criterion ids to run, empty for all
    unsigned seed = 20240611;
};

using CriterionCallback = std::function<void(const CriterionResult&)>;

// Runs the acceptance criteria in order; the callback sees each result as it
// completes. A criterion that throws is reported as failed with the message.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {},
                                            const CriterionCallback& on_result = {});

// One line: "PASS  3 three_leaf_rows  detail  (12.3 s)".
std::string format_result(const CriterionResult& result);

int acceptance_criterion_count();

}  // namespace hhj
