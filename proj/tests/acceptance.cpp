// One line per acceptance criterion; exit status 0 iff all pass.
#include <iostream>

#include "samd/verify.hpp"

int main() {
    const auto checks = samd::run_verify("acceptance");
    const bool ok = samd::print_checks(std::cout, checks);
    int passed = 0;
    for (const auto& c : checks) passed += c.passed ? 1 : 0;
    std::cout << passed << "/" << checks.size() << " criteria pass\n";
    return ok ? 0 : 1;
}
