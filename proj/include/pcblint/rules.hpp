#pragma once

#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "pcblint/eagle_model.hpp"
#include "pcblint/netlist.hpp"

namespace pcblint {

enum class Severity { Warning, Error };
enum class Phase { Quick, Full };

std::string to_string(Severity s);
std::string to_string(Phase p);

// One violation instance. The locator is a stable text path identifying the
// violating object; it survives re-parses of the same bytes and is the key
// that waivers match against.
struct Finding {
    std::string rule_id;
    Severity severity = Severity::Warning;
    std::string locator;
    std::string message;
    bool waivable = true;
};

// Which documents a rule reads. A rule may accept several targets (e.g.
// tNames style applies to libraries and to schematics' embedded libraries).
enum Applies : unsigned {
    AppliesSchematic = 1u << 0,
    AppliesBoard = 1u << 1,
    AppliesLibrary = 1u << 2,
    AppliesPair = 1u << 3, // needs schematic and board together
};

using ParamValue = std::variant<double, std::string, std::vector<std::string>,
                                std::vector<double>>;
using ParamMap = std::map<std::string, ParamValue>;

double param_number(const ParamMap& params, const std::string& key, double fallback);
std::string param_text(const ParamMap& params, const std::string& key,
                       const std::string& fallback);
std::vector<std::string> param_text_list(const ParamMap& params, const std::string& key,
                                         std::vector<std::string> fallback);
std::vector<double> param_number_list(const ParamMap& params, const std::string& key,
                                      std::vector<double> fallback);

struct DocSet {
    const SchematicDoc* sch = nullptr;
    const BoardDoc* brd = nullptr;
    std::vector<const LibraryDoc*> libs;
};

struct RuleContext {
    const DocSet& docs;
    const Netlist* netlist; // present whenever docs.sch is
    const ParamMap& params;
};

struct Rule {
    std::string id;
    std::string title;
    Severity severity = Severity::Warning; // default; Full rules may vary per finding
    Phase phase = Phase::Quick;
    unsigned applies_to = 0;
    bool waivable = true;
    std::function<std::vector<Finding>(const RuleContext&)> check;
};

class RuleRegistry {
public:
    void add(Rule rule);
    const Rule* find(const std::string& id) const;
    std::vector<std::string> ids() const;

    // The built-in rule catalog (checks module).
    static const RuleRegistry& catalog();

private:
    std::map<std::string, Rule> rules_;
};

// Per-lab rule enablement with resolved parameters. Loaded from a JSON file
// ({"defaults": {...}, "rules": {id: {...}}, "labs": {lab: {"inputs": [...],
// "enable": [...], "overrides": {id: {...}}}}) and fully validated against
// the registry at load time.
class RuleSetConfig {
public:
    struct LabConfig {
        std::vector<std::string> inputs;   // of "schematic", "board", "library"
        std::vector<std::string> rule_ids; // enabled, in config order
        std::map<std::string, ParamMap> rule_params; // resolved per rule
    };

    static RuleSetConfig load_json(const std::string& text, const RuleRegistry& registry);
    static RuleSetConfig builtin(); // the default lab course configuration

    const LabConfig& lab(const std::string& lab_id) const; // throws UnknownLab
    std::vector<std::string> lab_ids() const;

private:
    std::map<std::string, LabConfig> labs_;
};

// Reserved rule id for engine-internal findings (a rule that raised).
inline constexpr const char* kInternalRuleId = "X0-internal";

// Runs all enabled rules of the requested phase for the lab. A Full request
// runs Quick rules too. Findings are sorted by (rule_id, locator) and
// deduplicated; a rule that throws is reported as an X0-internal finding.
// `jobs` > 1 evaluates rules concurrently; output is identical either way.
std::vector<Finding> run_rules(const DocSet& docs, const Netlist* netlist,
                               const RuleSetConfig& config, const std::string& lab,
                               Phase phase, int jobs = 1,
                               const RuleRegistry& registry = RuleRegistry::catalog());

// Stable locator builders shared by the rule catalog.
namespace locator {
std::string part(const std::string& name);
std::string package_text(const std::string& package, size_t text_index);
std::string pinref(size_t sheet_index, const std::string& net, const PinRef& pr);
std::string instance(size_t sheet_index, const Instance& inst);
std::string pin(const PinInstance& pi);
std::string net(const std::string& name);
std::string signal(const std::string& name);
std::string element(const std::string& name);
std::string element_pad(const std::string& element, const std::string& pad);
std::string board();
std::string design();
} // namespace locator

} // namespace pcblint
