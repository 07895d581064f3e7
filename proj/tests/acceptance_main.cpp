// Dedicated acceptance runner: one line per criterion, exit code equal to
// the number of failed criteria.
#include <iostream>

#include "circle/acceptance.hpp"

int main() {
    auto results = circle::run_acceptance(std::cout);
    int fails = 0;
    for (const auto& r : results) fails += !r.pass;
    return fails;
}
