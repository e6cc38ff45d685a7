// SPDX-License-Identifier: Apache-2.0
// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.
#include <cstdio>

#include "radialborn/selftest.hpp"

int main() {
    auto results = rb::selftest::run_acceptance();
    std::fputs(rb::selftest::format_table(results).c_str(), stdout);
    bool all = true;
    for (const auto& r : results) all = all && r.pass;
    std::printf("%s\n", all ? "ACCEPTANCE: all criteria passed" : "ACCEPTANCE: FAILURES present");
    return all ? 0 : 1;
}
