#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace stressmat::cli {

/// Runs one command; `args` excludes the program name. Results go to `out`
/// unless -o is given, errors go to `err` as a JSON object. Returns the
/// exit status: 0 success, 1 invalid input, 2 failed verification,
/// 3 exhausted budget or construction.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stressmat::cli
