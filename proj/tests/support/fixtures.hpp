#pragma once

#include <random>
#include <string>

#include "support/eagle_writer.hpp"

namespace testsupport {

// The blinky fixture pair: MCU + series resistor + LED + reset pull-up +
// decoupling cap. Clean against the whole rule catalog; the documented
// single mutations below each trip exactly one rule.
SchSpec blinky_sch();
BrdSpec blinky_brd();
LbrSpec resistor_lbr();

// schematic mutations
SchSpec with_led_polarity_swapped(SchSpec spec);
SchSpec with_series_resistor_removed(SchSpec spec);
SchSpec with_reset_grounded(SchSpec spec);
SchSpec with_reset_network_removed(SchSpec spec);
SchSpec with_decoupling_cap_removed(SchSpec spec);
SchSpec with_power_short(SchSpec spec);
SchSpec with_value_removed(SchSpec spec, const std::string& part);
SchSpec with_tnames_literal(SchSpec spec);
SchSpec with_pin_detached(SchSpec spec); // C1 pin 1 off VCC

// board mutations
BrdSpec with_oversized_outline(BrdSpec spec);  // 120 x 80
BrdSpec with_element_outside(BrdSpec spec);    // C1 at (200, 200)
BrdSpec with_inner_layer_wire(BrdSpec spec);   // GND wire on layer 3

// Deterministic desk-scale schematic: one MCU plus enough LED chains and
// decoupling to reach 150+ pin connections while staying clean under the
// full catalog.
SchSpec reference_sch();

// Random small schematic for the netlist/pattern oracle suites: up to 8
// parts, 12 nets, 2 sheets. Pin membership is random but structurally valid.
SchSpec random_sch(std::mt19937& rng);

// Random pattern text with up to `max_hops` net traversals. When
// `seed_from_path` is set the pattern is derived from a real path through
// `spec`'s connectivity so that matches are likely.
std::string random_pattern(std::mt19937& rng, const SchSpec& spec, int max_hops,
                           bool seed_from_path);

// Reads a committed fixture file (directory from $PCBLINT_FIXTURES).
std::string fixtures_dir();
std::string read_fixture(const std::string& name);

} // namespace testsupport
