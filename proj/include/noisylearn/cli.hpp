#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace noisylearn {

// Command-line front end. Subcommands: generate, learn, distance,
// eld-check, experiment, reproduce-table. Returns 0 on success, 1 on a
// usage error, 2 on a runtime error (bad files, failed runs).
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace noisylearn
