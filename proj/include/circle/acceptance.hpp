// The acceptance gate: ten checked claims about the toolkit, each scored
// pass/fail against a tolerance pinned in the implementation.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace circle {

struct CriterionOutcome {
    int id = 0;
    std::string name;
    bool pass = false;
    double seconds = 0.0;
    std::string detail;  // worst residual, witness, or failure reason
};

// Runs all ten criteria in order, printing one line per criterion plus a
// summary to `out` as it goes.  Criteria are independent: a failure in one
// never stops the others.
std::vector<CriterionOutcome> run_acceptance(std::ostream& out);

}  // namespace circle
