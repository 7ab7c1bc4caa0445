#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pcblint/eagle_model.hpp"

namespace pcblint {

// One (part, gate, pin) attachment point in the schematic.
struct PinInstance {
    std::string part;
    std::string gate;
    std::string pin;

    auto operator<=>(const PinInstance&) const = default;

    std::string to_string() const { return part + "." + gate + "." + pin; }
};

struct ElectricalNet {
    std::string name;
    std::set<PinInstance> members;
};

// Pin-level electrical connectivity derived from a schematic. Same-named
// nets on different sheets are one electrical net. Immutable after build.
struct Netlist {
    std::map<std::string, ElectricalNet> nets;
    std::map<PinInstance, std::string> pin_index;
    std::set<PinInstance> unconnected_pins; // placed-instance pins on no net

    size_t pinref_count() const {
        size_t n = 0;
        for (const auto& [name, net] : nets)
            n += net.members.size();
        return n;
    }
};

Netlist build_netlist(const SchematicDoc& sch);

// Containing net name, or nullopt for a placed-but-unconnected pin.
// Throws UnknownPin when the triple is not part of the drawn design.
std::optional<std::string> net_of(const Netlist& nl, const PinInstance& pin);

// Members of the named net; empty set for an unknown net name.
std::set<PinInstance> pins_of(const Netlist& nl, const std::string& net_name);

struct Inconsistency {
    enum class Kind { MissingElement, ExtraElement, SignalMismatch, ExtraSignal };
    Kind kind;
    std::string subject; // the object in question: "C1", "R1:2", "VCC"
    std::string message;
};

// Cross-checks a schematic against a board: parts vs. elements, schematic
// pin-to-pad connections vs. board signal membership, and signal names.
// Empty result means the pair is consistent.
std::vector<Inconsistency> check_board_consistency(const SchematicDoc& sch, const BoardDoc& brd);

} // namespace pcblint
