// Runs every acceptance criterion and prints one pass/fail line per criterion.
// Exit status 0 iff all pass.

#include <iostream>

#include "critsob/acceptance.hpp"
#include "critsob/parallel.hpp"

int main() {
    critsob::AcceptanceOptions opt;
    opt.threads = critsob::default_threads();
    opt.pin_missing = false;
    const critsob::AcceptanceReport rep = critsob::run_acceptance(opt);
    for (const auto& r : rep.criteria)
        std::cout << "criterion " << r.id << ": " << (r.passed ? "PASS" : "FAIL") << "  " << r.name << "  ("
                  << r.detail << ")\n";
    std::cout << (rep.passed() ? "acceptance: all criteria passed" : "acceptance: FAILED") << std::endl;
    return rep.passed() ? 0 : 1;
}
