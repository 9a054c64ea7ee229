#pragma once

#include <iosfwd>
#include <string>

#include "iscat/grid.hpp"
#include "json.hpp"

namespace iscat {

// Exit codes of the command-line front end.
enum ExitCode { kExitOk = 0, kExitFailure = 1, kExitUsage = 2, kExitMissingFile = 3, kExitModuleError = 4 };

struct PotentialParams {
  std::string kind = "gaussian";  // gaussian | sech | sech2 | modulated
  double amplitude = 1.0;
  double carrier = 1.0;  // modulated: amplitude e^{i carrier x} e^{-x^2}
  double width = 1.0;    // profile argument x / width
  double center = 0.0;
};

// gaussian: A e^{-x^2}; sech: A sech x; sech2: A sech^2 x; modulated: A e^{ikx} e^{-x^2}
GridFunction generate_potential(const PotentialParams& p, const Grid& g);

// Runs one invocation; JSON goes to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Compact JSON with every floating value written to 17 significant digits.
std::string dump_json(const nlohmann::json& j);

}  // namespace iscat
