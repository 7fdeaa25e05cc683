#include "wr/verify.hpp"

#include <iostream>

int main(int argc, char** argv) {
    const std::string filter = argc > 1 ? argv[1] : "";
    const auto results = wr::run_acceptance(filter);
    std::cout << wr::acceptance_summary(results);
    return wr::all_passed(results) ? 0 : 1;
}
