#ifndef DECNET_CLI_HPP
#define DECNET_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace decnet {

// The command-line interface, wired to explicit streams so it can be
// driven from tests. `args` excludes the program name.
//
// Exit codes: 0 success, 1 usage, 2 parse/validation, 3 impossible
// evidence, 4 sampler failed to separate or accept.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace decnet

#endif  // DECNET_CLI_HPP
