#pragma once

#include <string>
#include <vector>

namespace stochlab::cli {

struct Outcome {
    int exit_code = 0;  // 0 all checks pass, 1 a check failed, 2 usage error
    std::string out;    // run record when no --json path was given
    std::string err;    // verdict line or usage message
};

// args exclude the program name
Outcome run(const std::vector<std::string>& args);

}  // namespace stochlab::cli
