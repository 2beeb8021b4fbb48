#ifndef SENSORNET_CLI_HPP
#define SENSORNET_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace sensornet::cli {

/// Runs one CLI command (fuse, topo, entropy, simulate, extremal).
/// `args` excludes the program name. Returns 0 on success, 1 on a module
/// error (after printing a one-line named diagnostic to `err`), 2 on a
/// usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sensornet::cli

#endif
