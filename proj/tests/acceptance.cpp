// One line per criterion; exits nonzero if any criterion fails.
#include <cstdio>
#include <iostream>

#include "hodgelab/selftest.hpp"

int main() {
    using namespace hodgelab;
    SelftestOptions opt;
    int failed = 0;
    run_acceptance(opt, [&](const CriterionResult& r) {
        std::printf("[%s] criterion %2d  %-40s %6ld ms\n", r.pass ? "PASS" : "FAIL", r.index, r.title.c_str(), r.elapsed_ms);
        for (auto& c : r.checks)
            if (c.verdict != Verdict::Pass)
                std::printf("        %-4s %s: %s  (%s)\n", verdict_str(c.verdict).c_str(), c.id.c_str(),
                            c.result.is_string() ? c.result.get<std::string>().c_str() : c.result.dump().c_str(),
                            c.claim.c_str());
        std::fflush(stdout);
        failed += !r.pass;
    });
    std::printf("%d of 11 criteria failed\n", failed);
    return failed ? 1 : 0;
}
