#include "pcblint/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "pcblint/errors.hpp"
#include "pcblint/glob.hpp"
#include "pcblint/pattern.hpp"
#include "pcblint/query.hpp"

namespace pcblint {

namespace {

constexpr double kGridTolerance = 1e-6;  // mm
constexpr double kGeomTolerance = 1e-9;  // mm, for boundary comparisons

Finding make_finding(const std::string& rule_id, Severity severity, std::string locator,
                     std::string message) {
    Finding f;
    f.rule_id = rule_id;
    f.severity = severity;
    f.locator = std::move(locator);
    f.message = std::move(message);
    return f;
}

// All libraries visible to a rule: standalone library inputs plus the
// schematic's embedded libraries.
std::vector<const LibraryDoc*> visible_libraries(const RuleContext& ctx) {
    std::vector<const LibraryDoc*> libs = ctx.docs.libs;
    if (ctx.docs.sch)
        for (const auto& [name, lib] : ctx.docs.sch->libraries)
            libs.push_back(&lib);
    return libs;
}

// ---- S1: the tNames layer of a package must contain only ">NAME" ----

std::vector<Finding> check_tnames_literal(const RuleContext& ctx) {
    std::vector<Finding> out;
    for (const LibraryDoc* lib : visible_libraries(ctx)) {
        for (const auto& [pkg_name, pkg] : lib->packages) {
            for (size_t i = 0; i < pkg.texts.size(); ++i) {
                const TextItem& t = pkg.texts[i];
                if (t.layer == 25 && t.content != ">NAME")
                    out.push_back(make_finding(
                        "S1-tnames-literal", Severity::Warning,
                        locator::package_text(pkg_name, i),
                        "text \"" + t.content + "\" on tNames in package " + pkg_name
                            + " of library " + lib->name + "; only \">NAME\" belongs there"));
            }
        }
    }
    // stray sheet text on the tNames layer is the same mistake
    if (ctx.docs.sch) {
        for (size_t si = 0; si < ctx.docs.sch->sheets.size(); ++si) {
            const auto& texts = ctx.docs.sch->sheets[si].texts;
            for (size_t i = 0; i < texts.size(); ++i) {
                if (texts[i].layer == 25 && texts[i].content != ">NAME")
                    out.push_back(make_finding(
                        "S1-tnames-literal", Severity::Warning,
                        "sheet:" + std::to_string(si) + "/text:" + std::to_string(i),
                        "text \"" + texts[i].content + "\" on tNames in sheet "
                            + std::to_string(si) + "; only \">NAME\" belongs there"));
            }
        }
    }
    return out;
}

// ---- S2: parts with a user-settable value must have one ----

std::vector<Finding> check_missing_value(const RuleContext& ctx) {
    std::vector<Finding> out;
    const SchematicDoc& sch = *ctx.docs.sch;
    auto missing = query::Selection::from(sch).parts().matching([&](const query::Item& item) {
        const Part* p = std::get<const Part*>(item);
        return sch.deviceset_of(*p).uservalue && (!p->value || p->value->empty());
    });
    for (const auto& item : missing.collect()) {
        const Part* p = std::get<const Part*>(item);
        out.push_back(make_finding("S2-missing-value", Severity::Warning, locator::part(p->name),
                                   "part " + p->name + " (" + p->deviceset + ") has no value"));
    }
    return out;
}

// ---- S3: placed pins should be connected unless marked nc ----

std::vector<Finding> check_dangling_pin(const RuleContext& ctx) {
    std::vector<Finding> out;
    const SchematicDoc& sch = *ctx.docs.sch;
    for (const PinInstance& pi : ctx.netlist->unconnected_pins) {
        const Pin* pin = sch.find_pin(pi.part, pi.gate, pi.pin);
        if (pin && pin->direction == "nc")
            continue;
        out.push_back(make_finding("S3-dangling-pin", Severity::Warning, locator::pin(pi),
                                   "pin " + pi.to_string() + " is connected to nothing"));
    }
    return out;
}

// ---- S4: instances should sit on the placement grid ----

bool on_grid(double v, double grid) {
    double steps = std::round(v / grid);
    return std::fabs(v - steps * grid) <= kGridTolerance;
}

std::vector<Finding> check_off_grid(const RuleContext& ctx) {
    std::vector<Finding> out;
    double grid = param_number(ctx.params, "placement_grid", 2.54);
    const SchematicDoc& sch = *ctx.docs.sch;
    for (size_t si = 0; si < sch.sheets.size(); ++si) {
        for (const Instance& inst : sch.sheets[si].instances) {
            if (!on_grid(inst.x, grid) || !on_grid(inst.y, grid))
                out.push_back(make_finding(
                    "S4-off-grid", Severity::Warning, locator::instance(si, inst),
                    "instance " + inst.part + "." + inst.gate + " is off the "
                        + std::to_string(grid) + " mm grid"));
        }
    }
    return out;
}

// ---- shared helpers for the netlist-pattern rules ----

const Part* find_mcu(const RuleContext& ctx, const std::string& mcu_glob) {
    for (const auto& part : ctx.docs.sch->parts)
        if (glob_match(mcu_glob, part.deviceset))
            return &part;
    return nullptr;
}

bool pattern_matches(const RuleContext& ctx, const std::string& pattern_text) {
    PathPattern pat = compile_pattern(pattern_text);
    return !match_pattern(*ctx.netlist, *ctx.docs.sch, pat).empty();
}

// ---- F1: MCU drives the status LED through a resistor to ground ----

std::vector<Finding> check_status_led(const RuleContext& ctx) {
    std::string mcu_glob = param_text(ctx.params, "mcu", "ATMEGA*");
    std::string pattern_text = param_text(ctx.params, "pattern", "");
    if (pattern_text.empty())
        throw ConfigError("F1-status-led needs a \"pattern\" parameter");
    if (pattern_matches(ctx, pattern_text))
        return {};
    const Part* mcu = find_mcu(ctx, mcu_glob);
    std::string loc = mcu ? locator::part(mcu->name) : locator::design();
    std::string message =
        mcu ? "no status-LED path from " + mcu->name
                  + " through a series resistor to an LED anode with its cathode on ground"
            : "no part matches the MCU deviceset glob \"" + mcu_glob + "\"";
    return {make_finding("F1-status-led", Severity::Error, loc, message)};
}

// ---- F2: RESET pulled up to VCC through a resistor ----

std::vector<Finding> check_reset_wiring(const RuleContext& ctx) {
    std::string mcu_glob = param_text(ctx.params, "mcu", "ATMEGA*");
    std::string reset_pin = param_text(ctx.params, "reset_pin", "RST");
    std::string pattern_text = param_text(ctx.params, "pattern", "");
    std::string pullup_net = param_text(ctx.params, "pullup_net", "VCC");
    if (pattern_text.empty())
        throw ConfigError("F2-reset-wiring needs a \"pattern\" parameter");

    const Part* mcu = find_mcu(ctx, mcu_glob);
    if (!mcu)
        return {make_finding("F2-reset-wiring", Severity::Error, locator::design(),
                             "no part matches the MCU deviceset glob \"" + mcu_glob + "\"")};

    // Reset pins among the MCU's placed instances.
    std::vector<PinInstance> reset_pins;
    bool connected = false;
    for (const auto& sheet : ctx.docs.sch->sheets) {
        for (const auto& inst : sheet.instances) {
            if (inst.part != mcu->name)
                continue;
            const Symbol& sym = ctx.docs.sch->symbol_of(*mcu, inst.gate);
            if (sym.pin(reset_pin)) {
                PinInstance pi{inst.part, inst.gate, reset_pin};
                reset_pins.push_back(pi);
                if (ctx.netlist->pin_index.count(pi))
                    connected = true;
            }
        }
    }
    PinInstance loc_pin = reset_pins.empty()
                              ? PinInstance{mcu->name, "G$1", reset_pin}
                              : reset_pins.front();
    if (!connected)
        return {make_finding("F2-reset-wiring", Severity::Warning, locator::pin(loc_pin),
                             "reset pin " + loc_pin.to_string()
                                 + " is not connected; the MCU needs a reset pull-up")};

    // The pattern leads from the reset pin to the pull-up resistor; the
    // resistor's far side must then sit on the pull-up net.
    PathPattern pat = compile_pattern(pattern_text);
    for (const auto& binding : match_pattern(*ctx.netlist, *ctx.docs.sch, pat)) {
        const std::string& resistor = binding.parts.back();
        const PinInstance& entry = binding.pins.back();
        for (const auto& [pi, net_name] : ctx.netlist->pin_index) {
            if (pi.part != resistor || pi == entry)
                continue;
            if (glob_match(pullup_net, net_name))
                return {};
        }
    }
    return {make_finding("F2-reset-wiring", Severity::Error, locator::pin(loc_pin),
                         "reset pin " + loc_pin.to_string()
                             + " is wired, but not through a pull-up resistor to "
                             + pullup_net)};
}

// ---- F3: no net may short two power rails together ----

std::vector<Finding> check_power_short(const RuleContext& ctx) {
    std::vector<Finding> out;
    auto power_nets = param_text_list(ctx.params, "power_nets", {"VCC", "GND", "3V3"});
    std::set<std::string> power(power_nets.begin(), power_nets.end());
    const SchematicDoc& sch = *ctx.docs.sch;

    for (const auto& [net_name, net] : ctx.netlist->nets) {
        // Power-direction pins named after a configured rail expect that rail.
        std::set<std::string> expected;
        for (const PinInstance& pi : net.members) {
            const Pin* pin = sch.find_pin(pi.part, pi.gate, pi.pin);
            if (pin && pin->direction == "pwr" && power.count(pin->name))
                expected.insert(pin->name);
        }
        if (expected.size() > 1) {
            std::string rails;
            for (const auto& r : expected)
                rails += (rails.empty() ? "" : ", ") + r;
            out.push_back(make_finding("F3-power-short", Severity::Error,
                                       locator::net(net_name),
                                       "net " + net_name + " connects pins of different power"
                                           + " rails (" + rails + ") together"));
        }
    }
    return out;
}

// ---- F4: every powered IC pin needs a decoupling capacitor to ground ----

std::vector<Finding> check_decoupling(const RuleContext& ctx) {
    std::vector<Finding> out;
    std::string ic_glob = param_text(ctx.params, "ic", "ATMEGA*");
    std::string cap_glob = param_text(ctx.params, "capacitor", "C*");
    std::string ground = param_text(ctx.params, "ground_net", "GND");
    auto power_nets = param_text_list(ctx.params, "power_nets", {"VCC", "GND", "3V3"});
    std::set<std::string> power(power_nets.begin(), power_nets.end());
    const SchematicDoc& sch = *ctx.docs.sch;

    // Nets bridged to ground by some capacitor part.
    std::set<std::string> decoupled;
    for (const auto& part : sch.parts) {
        if (!glob_match(cap_glob, part.deviceset))
            continue;
        std::set<std::string> cap_nets;
        for (const auto& [pi, net_name] : ctx.netlist->pin_index)
            if (pi.part == part.name)
                cap_nets.insert(net_name);
        if (cap_nets.count(ground))
            for (const auto& n : cap_nets)
                if (n != ground)
                    decoupled.insert(n);
    }

    for (const auto& [pi, net_name] : ctx.netlist->pin_index) {
        if (net_name == ground || !power.count(net_name))
            continue;
        const Part* part = sch.part(pi.part);
        if (!part || !glob_match(ic_glob, part->deviceset))
            continue;
        const Pin* pin = sch.find_pin(pi.part, pi.gate, pi.pin);
        if (!pin || pin->direction != "pwr")
            continue;
        if (!decoupled.count(net_name))
            out.push_back(make_finding("F4-decoupling", Severity::Error, locator::pin(pi),
                                       "power pin " + pi.to_string() + " on net " + net_name
                                           + " has no decoupling capacitor to " + ground));
    }
    return out;
}

// ---- F5: schematic and board must describe the same design ----

std::vector<Finding> check_board_sch_agree(const RuleContext& ctx) {
    std::vector<Finding> out;
    auto inconsistencies = check_board_consistency(*ctx.docs.sch, *ctx.docs.brd);
    for (const auto& inc : inconsistencies) {
        std::string loc;
        switch (inc.kind) {
        case Inconsistency::Kind::MissingElement:
            loc = locator::part(inc.subject);
            break;
        case Inconsistency::Kind::ExtraElement:
            loc = locator::element(inc.subject);
            break;
        case Inconsistency::Kind::SignalMismatch: {
            auto colon = inc.subject.find(':');
            loc = locator::element_pad(inc.subject.substr(0, colon),
                                       inc.subject.substr(colon + 1));
            break;
        }
        case Inconsistency::Kind::ExtraSignal:
            loc = locator::signal(inc.subject);
            break;
        }
        out.push_back(make_finding("F5-board-sch-agree", Severity::Error, loc, inc.message));
    }
    return out;
}

// ---- F6: board outline must exist and fit the size budget ----

struct Bbox {
    double min_x = std::numeric_limits<double>::infinity();
    double min_y = std::numeric_limits<double>::infinity();
    double max_x = -std::numeric_limits<double>::infinity();
    double max_y = -std::numeric_limits<double>::infinity();

    void add(double x, double y) {
        min_x = std::min(min_x, x);
        min_y = std::min(min_y, y);
        max_x = std::max(max_x, x);
        max_y = std::max(max_y, y);
    }
    bool contains(double x, double y) const {
        return x >= min_x - kGeomTolerance && x <= max_x + kGeomTolerance
               && y >= min_y - kGeomTolerance && y <= max_y + kGeomTolerance;
    }
    double width() const { return max_x - min_x; }
    double height() const { return max_y - min_y; }
};

std::optional<Bbox> outline_bbox(const BoardDoc& brd) {
    auto wires = brd.outline_wires();
    if (wires.empty())
        return std::nullopt;
    Bbox box;
    for (const auto& w : wires) {
        box.add(w.x1, w.y1);
        box.add(w.x2, w.y2);
    }
    return box;
}

std::string mm(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::vector<Finding> check_board_extent(const RuleContext& ctx) {
    double max_extent = param_number(ctx.params, "board_max_extent", 100.0);
    auto box = outline_bbox(*ctx.docs.brd);
    if (!box)
        return {make_finding("F6-board-extent", Severity::Error, locator::board(),
                             "board has no outline on layer 20 (Dimension)")};
    if (box->width() > max_extent + kGeomTolerance || box->height() > max_extent + kGeomTolerance)
        return {make_finding("F6-board-extent", Severity::Error, locator::board(),
                             "board outline is " + mm(box->width()) + " x " + mm(box->height())
                                 + " mm; each side must stay within " + mm(max_extent) + " mm")};
    return {};
}

// ---- F7: every element must sit inside the board outline ----

std::vector<Finding> check_elements_inside(const RuleContext& ctx) {
    std::vector<Finding> out;
    auto box = outline_bbox(*ctx.docs.brd);
    if (!box)
        return out; // F6 reports the missing outline
    for (const auto& el : ctx.docs.brd->elements) {
        if (!box->contains(el.x, el.y))
            out.push_back(make_finding("F7-elements-inside", Severity::Error,
                                       locator::element(el.name),
                                       "element " + el.name + " at (" + mm(el.x) + ", " + mm(el.y)
                                           + ") lies outside the board outline"));
    }
    return out;
}

// ---- F8: copper stays on the configured stack-up layers ----

std::vector<Finding> check_copper_layers(const RuleContext& ctx) {
    std::vector<Finding> out;
    auto layer_list = param_number_list(ctx.params, "copper_layers", {1, 2, 15, 16});
    std::set<int> allowed;
    for (double l : layer_list)
        allowed.insert(static_cast<int>(l));

    for (const auto& sig : ctx.docs.brd->signals) {
        for (size_t i = 0; i < sig.wires.size(); ++i) {
            int layer = sig.wires[i].layer;
            if (layer >= 1 && layer <= 16 && !allowed.count(layer))
                out.push_back(make_finding(
                    "F8-copper-layers", Severity::Error,
                    locator::signal(sig.name) + "/wire:" + std::to_string(i),
                    "signal " + sig.name + " routes on copper layer " + std::to_string(layer)
                        + ", which is not part of the board stack-up"));
        }
        for (size_t i = 0; i < sig.vias.size(); ++i) {
            const Via& via = sig.vias[i];
            for (int end : {via.layer_from, via.layer_to}) {
                if (!allowed.count(end)) {
                    out.push_back(make_finding(
                        "F8-copper-layers", Severity::Error,
                        locator::signal(sig.name) + "/via:" + std::to_string(i),
                        "signal " + sig.name + " has a via spanning layer " + std::to_string(end)
                            + ", which is not part of the board stack-up"));
                    break;
                }
            }
        }
    }
    return out;
}

Rule make_rule(std::string id, std::string title, Severity severity, Phase phase,
               unsigned applies_to, std::vector<Finding> (*check)(const RuleContext&)) {
    Rule r;
    r.id = std::move(id);
    r.title = std::move(title);
    r.severity = severity;
    r.phase = phase;
    r.applies_to = applies_to;
    r.check = check;
    return r;
}

} // namespace

void register_catalog(RuleRegistry& registry) {
    registry.add(make_rule("S1-tnames-literal", "tNames layer carries only >NAME",
                           Severity::Warning, Phase::Quick, AppliesSchematic | AppliesLibrary,
                           check_tnames_literal));
    registry.add(make_rule("S2-missing-value", "user-value parts carry a value",
                           Severity::Warning, Phase::Quick, AppliesSchematic,
                           check_missing_value));
    registry.add(make_rule("S3-dangling-pin", "placed pins are connected", Severity::Warning,
                           Phase::Quick, AppliesSchematic, check_dangling_pin));
    registry.add(make_rule("S4-off-grid", "instances sit on the placement grid",
                           Severity::Warning, Phase::Quick, AppliesSchematic, check_off_grid));
    registry.add(make_rule("F1-status-led", "status LED is driven through a series resistor",
                           Severity::Error, Phase::Full, AppliesSchematic, check_status_led));
    registry.add(make_rule("F2-reset-wiring", "reset is pulled up to VCC", Severity::Error,
                           Phase::Full, AppliesSchematic, check_reset_wiring));
    registry.add(make_rule("F3-power-short", "power rails are not shorted", Severity::Error,
                           Phase::Full, AppliesSchematic, check_power_short));
    registry.add(make_rule("F4-decoupling", "powered ICs have decoupling capacitors",
                           Severity::Error, Phase::Full, AppliesSchematic, check_decoupling));
    registry.add(make_rule("F5-board-sch-agree", "board matches the schematic", Severity::Error,
                           Phase::Full, AppliesPair, check_board_sch_agree));
    registry.add(make_rule("F6-board-extent", "board fits the size budget", Severity::Error,
                           Phase::Full, AppliesBoard, check_board_extent));
    registry.add(make_rule("F7-elements-inside", "elements sit inside the outline",
                           Severity::Error, Phase::Full, AppliesBoard, check_elements_inside));
    registry.add(make_rule("F8-copper-layers", "copper stays on stack-up layers",
                           Severity::Error, Phase::Full, AppliesBoard, check_copper_layers));
}

const RuleRegistry& RuleRegistry::catalog() {
    static const RuleRegistry registry = [] {
        RuleRegistry r;
        register_catalog(r);
        return r;
    }();
    return registry;
}

RuleSetConfig RuleSetConfig::builtin() {
    return RuleSetConfig::load_json(builtin_config_json(), RuleRegistry::catalog());
}

std::string builtin_config_json() {
    return R"json({
  "defaults": {
    "placement_grid": 2.54,
    "board_max_extent": 100.0,
    "copper_layers": [1, 2, 15, 16],
    "power_nets": ["VCC", "GND", "3V3"],
    "ground_net": "GND"
  },
  "rules": {
    "F1-status-led": {
      "mcu": "ATMEGA*",
      "pattern": "part(deviceset=ATMEGA*) pin(PB5) net(*) pin(*) part(deviceset=RESISTOR*) pin(*) net(*) pin(A) part(deviceset=LED*) pin(C) net(GND) pin(*) part(*)"
    },
    "F2-reset-wiring": {
      "mcu": "ATMEGA*",
      "reset_pin": "RST",
      "pattern": "part(deviceset=ATMEGA*) pin(RST) net(*) pin(*) part(deviceset=RESISTOR*)",
      "pullup_net": "VCC"
    },
    "F4-decoupling": {
      "ic": "ATMEGA*",
      "capacitor": "C*"
    }
  },
  "labs": {
    "H2": {
      "inputs": ["library"],
      "enable": ["S1-tnames-literal"]
    },
    "H3": {
      "inputs": ["schematic"],
      "enable": [
        "S1-tnames-literal", "S2-missing-value", "S3-dangling-pin", "S4-off-grid",
        "F1-status-led", "F2-reset-wiring", "F3-power-short", "F4-decoupling"
      ]
    },
    "H4": {
      "inputs": ["schematic", "board"],
      "enable": [
        "S1-tnames-literal", "S2-missing-value", "S3-dangling-pin", "S4-off-grid",
        "F1-status-led", "F2-reset-wiring", "F3-power-short", "F4-decoupling",
        "F5-board-sch-agree", "F6-board-extent", "F7-elements-inside", "F8-copper-layers"
      ]
    }
  }
})json";
}

} // namespace pcblint
