#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "fadr/harness.hpp"

namespace fadr {

// Flat key=value text: '#' starts a comment, blank lines are skipped,
// a later assignment to the same key wins. Throws std::invalid_argument
// on lines without '='.
std::map<std::string, std::string> parse_key_values(std::string_view text);
std::map<std::string, std::string> load_key_values(const std::filesystem::path& path);

// Applies one option to the experiment. Shared by config files and
// command-line flags so both surfaces accept the same names (see
// option_help()). Throws std::invalid_argument for unknown keys or
// unparseable values.
void apply_option(ExperimentSpec& spec, const std::string& key, const std::string& value);
void apply_options(ExperimentSpec& spec, const std::map<std::string, std::string>& options);

// One line per option: "name  <value form>  description".
std::string option_help();

// Reference cell for the command-line tool and the comparison study:
// a 190 m dense-building cell (every node reaches the gateway at any
// SF/TP combination), 30 m near-mast gain clamp, ten channels, two
// hour horizon, five seeds, 20 m distance bins. Library type defaults
// are more generic; this preset pins the tool's reproducible setup.
ExperimentSpec desk_preset();

} // namespace fadr
