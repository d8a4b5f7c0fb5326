#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rboot {

/// Entry point of the rboot tool. args excludes the program name.
/// Returns the process exit code: 0 on success, 2 on a pipeline error
/// (an error.json is then written to --out), 1 on a usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rboot
