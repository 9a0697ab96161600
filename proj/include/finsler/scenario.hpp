#pragma once

// Scenario file loading: JSON documents describing the family parameters,
// structure fields, domain, sampling plan, tolerance overrides and check
// selection. Validation is strict: unknown keys are rejected. All failures
// raise ConfigError.

#include <string>

#include "finsler/verify.hpp"

namespace finsler {

Scenario load_scenario(const std::string& json_text);
Scenario load_scenario_file(const std::string& path);

} // namespace finsler
