#pragma once

#include <string>
#include <vector>

namespace snv {

/// Names of the bundled run recipes (also shipped as files under presets/).
std::vector<std::string> preset_names();

/// Embedded config text for a preset, or nullptr when the name is unknown.
const char* preset_config(const std::string& name);

} // namespace snv
