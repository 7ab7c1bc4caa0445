#include "pcblint/netlist.hpp"

#include <algorithm>

#include "pcblint/errors.hpp"

namespace pcblint {

Netlist build_netlist(const SchematicDoc& sch) {
    Netlist nl;
    for (const auto& sheet : sch.sheets) {
        for (const auto& net : sheet.nets) {
            for (const auto& seg : net.segments) {
                for (const auto& pr : seg.pinrefs) {
                    PinInstance pin{pr.part, pr.gate, pr.pin};
                    // A pin belongs to exactly one electrical net. Eagle never
                    // attaches one pin to two net names; if a hand-edited file
                    // does, the first attachment in document order wins.
                    auto [it, inserted] = nl.pin_index.emplace(pin, net.name);
                    if (!inserted && it->second != net.name)
                        continue;
                    auto& enet = nl.nets[net.name];
                    enet.name = net.name;
                    enet.members.insert(pin);
                }
            }
        }
    }
    // Every pin of every placed gate that ended up on no net is unconnected.
    for (const auto& sheet : sch.sheets) {
        for (const auto& inst : sheet.instances) {
            const Part* part = sch.part(inst.part);
            const Symbol& sym = sch.symbol_of(*part, inst.gate);
            for (const auto& pin : sym.pins) {
                PinInstance pi{inst.part, inst.gate, pin.name};
                if (!nl.pin_index.count(pi))
                    nl.unconnected_pins.insert(pi);
            }
        }
    }
    return nl;
}

std::optional<std::string> net_of(const Netlist& nl, const PinInstance& pin) {
    auto it = nl.pin_index.find(pin);
    if (it != nl.pin_index.end())
        return it->second;
    if (nl.unconnected_pins.count(pin))
        return std::nullopt;
    throw UnknownPin("no placed pin " + pin.to_string() + " in the design");
}

std::set<PinInstance> pins_of(const Netlist& nl, const std::string& net_name) {
    auto it = nl.nets.find(net_name);
    if (it == nl.nets.end())
        return {};
    return it->second.members;
}

namespace {

// Resolves a schematic pin to its board pad name via the part device's
// connect table; nullopt when the pin maps to no pad.
std::optional<std::string> pad_of_pin(const SchematicDoc& sch, const PinRef& pr) {
    const Part* part = sch.part(pr.part);
    const Device& dev = sch.device_of(*part);
    for (const auto& con : dev.connects)
        if (con.gate == pr.gate && con.pin == pr.pin)
            return con.pad;
    return std::nullopt;
}

} // namespace

std::vector<Inconsistency> check_board_consistency(const SchematicDoc& sch, const BoardDoc& brd) {
    std::vector<Inconsistency> out;

    // (a) parts vs. elements, both directions. Parts whose device has no
    // package (virtual parts) have no board footprint and are skipped.
    for (const auto& part : sch.parts) {
        const Device& dev = sch.device_of(part);
        if (dev.package.empty())
            continue;
        if (!brd.element(part.name))
            out.push_back({Inconsistency::Kind::MissingElement, part.name,
                           "part " + part.name + " has no board element"});
    }
    for (const auto& el : brd.elements) {
        if (!sch.part(el.name))
            out.push_back({Inconsistency::Kind::ExtraElement, el.name,
                           "board element " + el.name + " has no schematic part"});
    }

    // pad -> signal index for (b)
    std::map<std::pair<std::string, std::string>, std::string> pad_signal;
    for (const auto& sig : brd.signals)
        for (const auto& cr : sig.contactrefs)
            pad_signal[{cr.element, cr.pad}] = sig.name;

    // (b) every schematic pin-to-pad connection must land in the same-named
    // board signal, when the pad is in a signal at all.
    for (const auto& sheet : sch.sheets) {
        for (const auto& net : sheet.nets) {
            for (const auto& seg : net.segments) {
                for (const auto& pr : seg.pinrefs) {
                    auto pad = pad_of_pin(sch, pr);
                    if (!pad)
                        continue;
                    auto it = pad_signal.find({pr.part, *pad});
                    if (it != pad_signal.end() && it->second != net.name) {
                        out.push_back({Inconsistency::Kind::SignalMismatch,
                                       pr.part + ":" + *pad,
                                       "pad " + pr.part + ":" + *pad + " is in board signal "
                                           + it->second + " but schematic net " + net.name});
                    }
                }
            }
        }
    }

    // (c) board signals whose name exists in no schematic net
    std::set<std::string> net_names;
    for (const auto& sheet : sch.sheets)
        for (const auto& net : sheet.nets)
            net_names.insert(net.name);
    for (const auto& sig : brd.signals) {
        if (!net_names.count(sig.name))
            out.push_back({Inconsistency::Kind::ExtraSignal, sig.name,
                           "board signal " + sig.name + " does not exist in the schematic"});
    }

    std::sort(out.begin(), out.end(), [](const Inconsistency& a, const Inconsistency& b) {
        if (a.kind != b.kind)
            return a.kind < b.kind;
        if (a.subject != b.subject)
            return a.subject < b.subject;
        return a.message < b.message;
    });
    return out;
}

} // namespace pcblint
