#pragma once

// Fast built-in consistency checks, run by `mmrx selftest`.

#include <string>
#include <vector>

namespace mmrx {

struct SelfCheck {
    std::string name;
    bool ok = false;
    std::string detail;
};

std::vector<SelfCheck> run_selftest();

}  // namespace mmrx
