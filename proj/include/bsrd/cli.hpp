#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bsrd {

/// Entry point of the `bsrd` command. `args` excludes the program name.
/// Returns the process exit code: 0 success, 1 validation/parse, 2 runtime or
/// blow-up, 3 verification failure. Errors go to `err` as a single line
/// starting with "ERROR:<category>:".
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bsrd
