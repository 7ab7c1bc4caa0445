#pragma once

#include <string>

#include "pcblint/rules.hpp"

namespace pcblint {

// Registers the built-in rule catalog: style rules (S*, quick warnings) and
// correctness rules (F*, full check).
void register_catalog(RuleRegistry& registry);

// JSON text of the default lab course configuration (labs H2/H3/H4).
std::string builtin_config_json();

} // namespace pcblint
