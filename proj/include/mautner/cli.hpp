// Command-line frontend. Exit codes: 0 pass, 1 check failure, 2 usage or
// configuration error.
#ifndef MAUTNER_CLI_HPP
#define MAUTNER_CLI_HPP

#include <string>
#include <vector>

namespace mautner {

int run_cli(const std::vector<std::string>& args);

} // namespace mautner

#endif
