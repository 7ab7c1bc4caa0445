#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "pcblint/eagle_model.hpp"
#include "pcblint/netlist.hpp"

namespace pcblint {

// Declarative netlist path patterns of the form
//
//   part(name=U1) pin(PB5) net(*) pin(*) part(deviceset=RESISTOR*) ...
//
// A pattern alternates part, pin, net, pin, part, ... steps; it begins and
// ends with a part step and traverses at least one net. Traversing "through"
// a two-pin passive is written as pin(entry) part(...) pin(exit) between two
// net steps.

struct PartStep {
    std::optional<std::string> name_glob;
    std::optional<std::string> deviceset_glob;
    std::optional<std::string> value_glob;
    std::vector<std::pair<std::string, std::string>> attr_globs;

    bool matches(const Part& part) const;
};

struct PathPattern {
    std::vector<PartStep> part_steps;      // hops + 1
    std::vector<std::string> pin_globs;    // 2 * hops
    std::vector<std::string> net_globs;    // hops

    size_t hops() const { return net_globs.size(); }
};

// One concrete match: the bound parts, the pin instances entering/leaving
// each net, and the traversed nets. Bound parts are pairwise distinct and
// consecutive nets differ.
struct PatternBinding {
    std::vector<std::string> parts;
    std::vector<PinInstance> pins;
    std::vector<std::string> nets;

    auto operator<=>(const PatternBinding&) const = default;

    std::string to_string() const;
};

// Grammar: whitespace-separated steps `part(k=v[,k=v...])` | `part(*)` |
// `pin(glob)` | `net(glob)`; keys are name, deviceset, value, attr.NAME.
// Throws PatternSyntax (lexical) or PatternShape (bad step ordering).
PathPattern compile_pattern(const std::string& text);

// All bindings, deduplicated, sorted lexicographically by bound part names
// then pin names. Output order is a pure function of the inputs.
std::vector<PatternBinding> match_pattern(const Netlist& nl, const SchematicDoc& sch,
                                          const PathPattern& pat);

} // namespace pcblint
