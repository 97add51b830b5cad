// Prints one PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
// Arguments: optional criterion ids, e.g. "acceptance 3 4".

#include "hhj/acceptance.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>

int main(int argc, char** argv)
{
    hhj::AcceptanceOptions options;
    for (int i = 1; i < argc; ++i) options.only.push_back(std::atoi(argv[i]));
    int failed = 0;
    const auto results = hhj::run_acceptance(options, [&failed](const hhj::CriterionResult& r) {
        std::printf("%s\n", hhj::format_result(r).c_str());
        std::fflush(stdout);
        failed += r.passed ? 0 : 1;
    });
    std::printf("%zu of %d criteria run, %d failed\n", results.size(), hhj::acceptance_criterion_count(), failed);
    return failed == 0 && !results.empty() ? 0 : 1;
}
