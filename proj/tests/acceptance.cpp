// Runs the twelve acceptance criteria and prints one line per criterion.
// Optional arguments restrict the run to the listed criterion ids.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "verify.hpp"

int main(int argc, char** argv) {
    using namespace growth;
    std::vector<int> ids;
    for (int k = 1; k < argc; ++k) ids.push_back(std::stoi(argv[k]));
    if (ids.empty()) ids = verify::suite_criteria("full");

    const Thresholds th;
    int failed = 0;
    for (int id : ids) {
        const auto r = verify::run_criterion(id, th);
        std::cout << verify::format_line(r) << std::endl;
        failed += !r.pass;
    }
    std::cout << (ids.size() - static_cast<std::size_t>(failed)) << "/" << ids.size() << " criteria passed"
              << std::endl;
    return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
