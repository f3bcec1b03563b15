#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lmnet {

/// Parses and dispatches one command invocation. `args` excludes the program
/// name. Returns the process exit code: 0 ok, 1 I/O or model-load failure,
/// 2 bad data or configuration, 3 numeric divergence.
int run_cli(std::vector<std::string> args, std::istream& in, std::ostream& out, std::ostream& err);

/// argv wrapper over the stream variant, bound to the standard streams.
int run_cli(int argc, char** argv);

}  // namespace lmnet
