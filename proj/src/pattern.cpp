#include "pcblint/pattern.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "pcblint/errors.hpp"
#include "pcblint/glob.hpp"

namespace pcblint {

bool PartStep::matches(const Part& part) const {
    if (name_glob && !glob_match(*name_glob, part.name))
        return false;
    if (deviceset_glob && !glob_match(*deviceset_glob, part.deviceset))
        return false;
    if (value_glob && !glob_match(*value_glob, part.value.value_or("")))
        return false;
    for (const auto& [attr, glob] : attr_globs) {
        auto it = part.attributes.find(attr);
        if (it == part.attributes.end() || !glob_match(glob, it->second))
            return false;
    }
    return true;
}

std::string PatternBinding::to_string() const {
    std::ostringstream out;
    for (size_t h = 0; h < nets.size(); ++h) {
        out << parts[h] << " -" << pins[2 * h].pin << "- " << nets[h] << " -"
            << pins[2 * h + 1].pin << "- ";
    }
    out << parts.back();
    return out.str();
}

namespace {

struct RawStep {
    std::string head;  // part | pin | net
    std::string body;  // inside the parentheses
    size_t position;
};

std::vector<RawStep> tokenize(const std::string& text) {
    std::vector<RawStep> steps;
    size_t i = 0;
    while (i < text.size()) {
        if (std::isspace(static_cast<unsigned char>(text[i]))) {
            ++i;
            continue;
        }
        RawStep step;
        step.position = i;
        size_t open = text.find('(', i);
        if (open == std::string::npos)
            throw PatternSyntax("expected '(' after step keyword", i);
        step.head = text.substr(i, open - i);
        size_t close = text.find(')', open);
        if (close == std::string::npos)
            throw PatternSyntax("unterminated '('", open);
        step.body = text.substr(open + 1, close - open - 1);
        if (step.head != "part" && step.head != "pin" && step.head != "net")
            throw PatternSyntax("unknown step \"" + step.head + "\" (expected part, pin, or net)",
                                i);
        for (char c : step.head)
            if (std::isspace(static_cast<unsigned char>(c)))
                throw PatternSyntax("whitespace inside step keyword", i);
        steps.push_back(std::move(step));
        i = close + 1;
    }
    return steps;
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos)
        return "";
    size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

PartStep parse_part_step(const RawStep& raw) {
    PartStep step;
    std::string body = trim(raw.body);
    if (body.empty())
        throw PatternSyntax("empty part() predicate; use part(*) to match any part",
                            raw.position);
    if (body == "*")
        return step;
    size_t start = 0;
    while (start <= body.size()) {
        size_t comma = body.find(',', start);
        std::string clause = trim(body.substr(start, comma == std::string::npos
                                                         ? std::string::npos
                                                         : comma - start));
        size_t eq = clause.find('=');
        if (eq == std::string::npos)
            throw PatternSyntax("part() predicate \"" + clause + "\" is not key=glob",
                                raw.position);
        std::string key = trim(clause.substr(0, eq));
        std::string glob = trim(clause.substr(eq + 1));
        if (glob.empty())
            throw PatternSyntax("empty glob for key \"" + key + "\"", raw.position);
        if (key == "name")
            step.name_glob = glob;
        else if (key == "deviceset")
            step.deviceset_glob = glob;
        else if (key == "value")
            step.value_glob = glob;
        else if (key.rfind("attr.", 0) == 0 && key.size() > 5)
            step.attr_globs.emplace_back(key.substr(5), glob);
        else
            throw PatternSyntax("unknown part() key \"" + key + "\"", raw.position);
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    return step;
}

} // namespace

PathPattern compile_pattern(const std::string& text) {
    auto raw = tokenize(text);
    if (raw.empty())
        throw PatternShape("empty pattern");

    // expected shape: part (pin net pin part)+
    PathPattern pat;
    static const char* cycle[] = {"part", "pin", "net", "pin"};
    for (size_t i = 0; i < raw.size(); ++i) {
        const std::string& expected = cycle[i % 4];
        if (raw[i].head != expected)
            throw PatternShape("step " + std::to_string(i + 1) + " must be " + expected + "(), got "
                               + raw[i].head + "()");
        if (expected == "part") {
            pat.part_steps.push_back(parse_part_step(raw[i]));
        } else {
            std::string glob = trim(raw[i].body);
            if (glob.empty())
                throw PatternSyntax("empty " + raw[i].head + "() glob", raw[i].position);
            if (raw[i].head == "pin")
                pat.pin_globs.push_back(glob);
            else
                pat.net_globs.push_back(glob);
        }
    }
    if (raw.size() % 4 != 1)
        throw PatternShape("pattern ends on a " + raw.back().head
                           + "() step; patterns must end with part()");
    if (raw.size() < 5)
        throw PatternShape("pattern must traverse at least one net "
                           "(part pin net pin part)");
    return pat;
}

namespace {

struct MatchState {
    const Netlist& nl;
    const SchematicDoc& sch;
    const PathPattern& pat;
    std::map<std::string, std::vector<PinInstance>> connected_pins_by_part;
    PatternBinding current;
    std::vector<PatternBinding> out;

    bool part_bound(const std::string& name) const {
        return std::find(current.parts.begin(), current.parts.end(), name)
               != current.parts.end();
    }

    // Called with `hop` nets already traversed and parts[hop] bound last.
    void extend(size_t hop) {
        if (hop == pat.hops()) {
            out.push_back(current);
            return;
        }
        const std::string& from_part = current.parts.back();
        auto it = connected_pins_by_part.find(from_part);
        if (it == connected_pins_by_part.end())
            return;
        for (const PinInstance& exit_pin : it->second) {
            if (!glob_match(pat.pin_globs[2 * hop], exit_pin.pin))
                continue;
            const std::string& net_name = nl.pin_index.at(exit_pin);
            if (!glob_match(pat.net_globs[hop], net_name))
                continue;
            if (hop > 0 && current.nets.back() == net_name)
                continue; // no zero-progress hop back onto the previous net
            const ElectricalNet& net = nl.nets.at(net_name);
            for (const PinInstance& entry_pin : net.members) {
                if (entry_pin == exit_pin)
                    continue;
                if (!glob_match(pat.pin_globs[2 * hop + 1], entry_pin.pin))
                    continue;
                if (part_bound(entry_pin.part))
                    continue;
                const Part* next = sch.part(entry_pin.part);
                if (!next || !pat.part_steps[hop + 1].matches(*next))
                    continue;
                current.pins.push_back(exit_pin);
                current.nets.push_back(net_name);
                current.pins.push_back(entry_pin);
                current.parts.push_back(entry_pin.part);
                extend(hop + 1);
                current.parts.pop_back();
                current.pins.pop_back();
                current.nets.pop_back();
                current.pins.pop_back();
            }
        }
    }
};

} // namespace

std::vector<PatternBinding> match_pattern(const Netlist& nl, const SchematicDoc& sch,
                                          const PathPattern& pat) {
    MatchState state{nl, sch, pat, {}, {}, {}};
    for (const auto& [pin, net] : nl.pin_index)
        state.connected_pins_by_part[pin.part].push_back(pin);

    for (const auto& part : sch.parts) {
        if (!pat.part_steps.front().matches(part))
            continue;
        state.current.parts.push_back(part.name);
        state.extend(0);
        state.current.parts.pop_back();
    }
    std::sort(state.out.begin(), state.out.end());
    state.out.erase(std::unique(state.out.begin(), state.out.end()), state.out.end());
    return state.out;
}

} // namespace pcblint
