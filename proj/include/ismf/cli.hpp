// Copyright 2026 ISMF Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef ISMF_CLI_HPP_
#define ISMF_CLI_HPP_

#include <string>
#include <vector>

namespace ismf::cli {

/// Entry point behind main(); args excludes the program name.
/// Exit codes: 0 success, 2 configuration error, 3 runtime error.
int run(const std::vector<std::string>& args);

}  // namespace ismf::cli

#endif  // ISMF_CLI_HPP_
