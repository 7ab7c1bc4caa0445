#include "pcblint/rules.hpp"

#include <algorithm>
#include <future>

#include <json.hpp>

#include "pcblint/errors.hpp"

namespace pcblint {

std::string to_string(Severity s) {
    return s == Severity::Warning ? "warning" : "error";
}

std::string to_string(Phase p) {
    return p == Phase::Quick ? "quick" : "full";
}

double param_number(const ParamMap& params, const std::string& key, double fallback) {
    auto it = params.find(key);
    if (it == params.end())
        return fallback;
    if (const double* v = std::get_if<double>(&it->second))
        return *v;
    throw ConfigError("parameter \"" + key + "\" must be a number");
}

std::string param_text(const ParamMap& params, const std::string& key,
                       const std::string& fallback) {
    auto it = params.find(key);
    if (it == params.end())
        return fallback;
    if (const std::string* v = std::get_if<std::string>(&it->second))
        return *v;
    throw ConfigError("parameter \"" + key + "\" must be a string");
}

std::vector<std::string> param_text_list(const ParamMap& params, const std::string& key,
                                         std::vector<std::string> fallback) {
    auto it = params.find(key);
    if (it == params.end())
        return fallback;
    if (const auto* v = std::get_if<std::vector<std::string>>(&it->second))
        return *v;
    throw ConfigError("parameter \"" + key + "\" must be a list of strings");
}

std::vector<double> param_number_list(const ParamMap& params, const std::string& key,
                                      std::vector<double> fallback) {
    auto it = params.find(key);
    if (it == params.end())
        return fallback;
    if (const auto* v = std::get_if<std::vector<double>>(&it->second))
        return *v;
    throw ConfigError("parameter \"" + key + "\" must be a list of numbers");
}

void RuleRegistry::add(Rule rule) {
    auto id = rule.id;
    if (id.empty() || id[0] == 'X')
        throw ConfigError("rule id \"" + id + "\" is invalid; the X prefix is reserved for "
                          "engine-internal findings");
    if (!rules_.emplace(id, std::move(rule)).second)
        throw ConfigError("duplicate rule id \"" + id + "\" in registry");
}

const Rule* RuleRegistry::find(const std::string& id) const {
    auto it = rules_.find(id);
    return it == rules_.end() ? nullptr : &it->second;
}

std::vector<std::string> RuleRegistry::ids() const {
    std::vector<std::string> out;
    for (const auto& [id, rule] : rules_)
        out.push_back(id);
    return out;
}

namespace {

using nlohmann::json;

ParamValue param_from_json(const std::string& key, const json& v) {
    if (v.is_number())
        return v.get<double>();
    if (v.is_string())
        return v.get<std::string>();
    if (v.is_array()) {
        if (!v.empty() && v.front().is_number()) {
            std::vector<double> nums;
            for (const auto& e : v) {
                if (!e.is_number())
                    throw ConfigError("parameter \"" + key + "\": mixed-type array");
                nums.push_back(e.get<double>());
            }
            return nums;
        }
        std::vector<std::string> strs;
        for (const auto& e : v) {
            if (!e.is_string())
                throw ConfigError("parameter \"" + key + "\": mixed-type array");
            strs.push_back(e.get<std::string>());
        }
        return strs;
    }
    throw ConfigError("parameter \"" + key + "\" has unsupported type");
}

ParamMap params_from_json(const json& obj) {
    ParamMap out;
    for (auto it = obj.begin(); it != obj.end(); ++it)
        out[it.key()] = param_from_json(it.key(), it.value());
    return out;
}

void merge_params(ParamMap& into, const ParamMap& overlay) {
    for (const auto& [k, v] : overlay)
        into[k] = v;
}

unsigned input_mask(const std::vector<std::string>& inputs) {
    unsigned mask = 0;
    for (const auto& in : inputs) {
        if (in == "schematic")
            mask |= AppliesSchematic;
        else if (in == "board")
            mask |= AppliesBoard;
        else if (in == "library")
            mask |= AppliesLibrary;
        else
            throw ConfigError("unknown lab input kind \"" + in + "\"");
    }
    if ((mask & AppliesSchematic) && (mask & AppliesBoard))
        mask |= AppliesPair;
    return mask;
}

} // namespace

RuleSetConfig RuleSetConfig::load_json(const std::string& text, const RuleRegistry& registry) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("rule-set configuration is not valid JSON: ") + e.what());
    }
    if (!root.is_object())
        throw ConfigError("rule-set configuration must be a JSON object");

    ParamMap defaults;
    if (root.contains("defaults"))
        defaults = params_from_json(root.at("defaults"));

    std::map<std::string, ParamMap> rule_defaults;
    if (root.contains("rules"))
        for (auto it = root.at("rules").begin(); it != root.at("rules").end(); ++it) {
            if (!registry.find(it.key()))
                throw ConfigError("rules section names unknown rule \"" + it.key() + "\"");
            rule_defaults[it.key()] = params_from_json(it.value());
        }

    RuleSetConfig config;
    if (!root.contains("labs") || !root.at("labs").is_object())
        throw ConfigError("rule-set configuration has no \"labs\" object");
    for (auto lab_it = root.at("labs").begin(); lab_it != root.at("labs").end(); ++lab_it) {
        const json& lab_json = lab_it.value();
        LabConfig lab;
        for (const auto& in : lab_json.value("inputs", json::array()))
            lab.inputs.push_back(in.get<std::string>());
        unsigned mask = input_mask(lab.inputs);

        std::map<std::string, ParamMap> overrides;
        if (lab_json.contains("overrides"))
            for (auto o = lab_json.at("overrides").begin(); o != lab_json.at("overrides").end();
                 ++o)
                overrides[o.key()] = params_from_json(o.value());

        for (const auto& id_json : lab_json.value("enable", json::array())) {
            std::string id = id_json.get<std::string>();
            const Rule* rule = registry.find(id);
            if (!rule)
                throw ConfigError("lab " + lab_it.key() + " enables unknown rule \"" + id + "\"");
            if ((rule->applies_to & mask) == 0)
                throw ConfigError("lab " + lab_it.key() + " enables rule " + id
                                  + " but provides no document kind it applies to");
            ParamMap params = defaults;
            if (auto rd = rule_defaults.find(id); rd != rule_defaults.end())
                merge_params(params, rd->second);
            if (auto ov = overrides.find(id); ov != overrides.end())
                merge_params(params, ov->second);
            lab.rule_params[id] = std::move(params);
            lab.rule_ids.push_back(std::move(id));
        }
        for (const auto& [id, ignored] : overrides)
            if (!lab.rule_params.count(id))
                throw ConfigError("lab " + lab_it.key() + " overrides rule " + id
                                  + " that it does not enable");
        config.labs_.emplace(lab_it.key(), std::move(lab));
    }
    return config;
}

const RuleSetConfig::LabConfig& RuleSetConfig::lab(const std::string& lab_id) const {
    auto it = labs_.find(lab_id);
    if (it == labs_.end())
        throw UnknownLab(lab_id);
    return it->second;
}

std::vector<std::string> RuleSetConfig::lab_ids() const {
    std::vector<std::string> out;
    for (const auto& [id, lab] : labs_)
        out.push_back(id);
    return out;
}

std::vector<Finding> run_rules(const DocSet& docs, const Netlist* netlist,
                               const RuleSetConfig& config, const std::string& lab_id,
                               Phase phase, int jobs, const RuleRegistry& registry) {
    const auto& lab = config.lab(lab_id);
    for (const auto& input : lab.inputs) {
        if (input == "schematic" && !docs.sch)
            throw ConfigError("lab " + lab_id + " requires a schematic input");
        if (input == "board" && !docs.brd)
            throw ConfigError("lab " + lab_id + " requires a board input");
        if (input == "library" && docs.libs.empty())
            throw ConfigError("lab " + lab_id + " requires a library input");
    }

    std::vector<const Rule*> selected;
    std::vector<const ParamMap*> selected_params;
    for (const auto& id : lab.rule_ids) {
        const Rule* rule = registry.find(id);
        if (!rule)
            throw ConfigError("configuration enables rule \"" + id
                              + "\" missing from the registry");
        if (phase == Phase::Quick && rule->phase != Phase::Quick)
            continue;
        selected.push_back(rule);
        selected_params.push_back(&lab.rule_params.at(id));
    }

    auto evaluate = [&](size_t i) -> std::vector<Finding> {
        const Rule& rule = *selected[i];
        RuleContext ctx{docs, netlist, *selected_params[i]};
        try {
            return rule.check(ctx);
        } catch (const std::exception& e) {
            Finding f;
            f.rule_id = kInternalRuleId;
            f.severity = Severity::Error;
            f.locator = "rule:" + rule.id;
            f.message = std::string("rule ") + rule.id + " failed: " + e.what();
            f.waivable = false;
            return {f};
        }
    };

    std::vector<std::vector<Finding>> results(selected.size());
    if (jobs > 1 && selected.size() > 1) {
        std::vector<std::future<std::vector<Finding>>> futures;
        futures.reserve(selected.size());
        for (size_t i = 0; i < selected.size(); ++i)
            futures.push_back(std::async(std::launch::async, evaluate, i));
        for (size_t i = 0; i < selected.size(); ++i)
            results[i] = futures[i].get();
    } else {
        for (size_t i = 0; i < selected.size(); ++i)
            results[i] = evaluate(i);
    }

    std::vector<Finding> findings;
    for (auto& batch : results)
        for (auto& f : batch)
            findings.push_back(std::move(f));

    std::sort(findings.begin(), findings.end(), [](const Finding& a, const Finding& b) {
        if (a.rule_id != b.rule_id)
            return a.rule_id < b.rule_id;
        if (a.locator != b.locator)
            return a.locator < b.locator;
        if (a.severity != b.severity)
            return a.severity < b.severity;
        return a.message < b.message;
    });
    findings.erase(std::unique(findings.begin(), findings.end(),
                               [](const Finding& a, const Finding& b) {
                                   return a.rule_id == b.rule_id && a.locator == b.locator;
                               }),
                   findings.end());
    return findings;
}

namespace locator {

std::string part(const std::string& name) {
    return "part:" + name;
}

std::string package_text(const std::string& package, size_t text_index) {
    return "package:" + package + "/text:" + std::to_string(text_index);
}

std::string pinref(size_t sheet_index, const std::string& net, const PinRef& pr) {
    return "sheet:" + std::to_string(sheet_index) + "/net:" + net + "/pinref:" + pr.part + "."
           + pr.gate + "." + pr.pin;
}

std::string instance(size_t sheet_index, const Instance& inst) {
    return "sheet:" + std::to_string(sheet_index) + "/instance:" + inst.part + "." + inst.gate;
}

std::string pin(const PinInstance& pi) {
    return "pin:" + pi.to_string();
}

std::string net(const std::string& name) {
    return "net:" + name;
}

std::string signal(const std::string& name) {
    return "signal:" + name;
}

std::string element(const std::string& name) {
    return "element:" + name;
}

std::string element_pad(const std::string& element_name, const std::string& pad) {
    return "element:" + element_name + "/pad:" + pad;
}

std::string board() {
    return "board";
}

std::string design() {
    return "design";
}

} // namespace locator

} // namespace pcblint
