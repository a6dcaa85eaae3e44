#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "fermibag/model.hpp"
#include "fermibag/transitions.hpp"

namespace fermibag::cli {

inline constexpr const char* kVersion = "0.1.0";

using Json = nlohmann::json;

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kOk = 0,
  kFailure = 1,          ///< I/O and anything unexpected
  kValidationError = 2,  ///< bad flags, unreadable or invalid config
  kNumericalError = 3,   ///< norm drift, quadrature non-convergence, ...
};

/// Built-in defaults. Every scenario document is a subset of this layout,
/// except for state objects (keys depend on "kind") and the optional
/// "multibag" section.
Json default_scenario();

/// Applies one `--set` assignment `dotted.path=value`. The value is parsed as
/// JSON when possible and kept as a string otherwise. Throws InvalidArgument.
void apply_override(Json& doc, const std::string& assignment);

/// Rejects unknown keys and wrongly typed values. Throws InvalidArgument
/// naming the offending path.
void validate_scenario(const Json& doc);

/// Defaults merged with the file, then the overrides, then validated.
Json load_scenario(const std::filesystem::path& path, const std::vector<std::string>& overrides);

CavityConfig cavity_from(const Json& doc);
DriveSpec drive_from(const Json& doc);
BosonState state_from(const Json& state);
TransitionSpec transition_from(const Json& doc);
MultiBagConfig multibag_from(const Json& doc);
std::vector<double> phonon_grid_from(const Json& doc);
std::vector<double> time_grid_from(const Json& doc);

/// Scientific notation with 17 significant digits.
std::string format_double(double value);

/// Runs one command on a resolved scenario and writes its files into
/// `out_dir`. Returns the paths written, in emission order.
std::vector<std::filesystem::path> execute(const std::string& command, const Json& scenario,
                                           const std::filesystem::path& out_dir,
                                           std::ostream& log);

/// Entry point of the `fermibag` executable; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fermibag::cli
