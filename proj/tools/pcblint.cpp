#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pcblint/bom.hpp"
#include "pcblint/checks.hpp"
#include "pcblint/eagle_model.hpp"
#include "pcblint/errors.hpp"
#include "pcblint/netlist.hpp"
#include "pcblint/report.hpp"
#include "pcblint/rules.hpp"
#include "pcblint/scoring.hpp"
#include "pcblint/waivers.hpp"

namespace {

using namespace pcblint;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

RuleSetConfig load_config(const std::string& config_path) {
    std::string path = config_path;
    if (path.empty())
        if (const char* env = std::getenv("PCBLINT_CONFIG"))
            path = env;
    if (path.empty())
        return RuleSetConfig::builtin();
    return RuleSetConfig::load_json(read_file(path), RuleRegistry::catalog());
}

int rule_jobs() {
    if (const char* env = std::getenv("PCBLINT_JOBS"))
        return std::max(1, std::atoi(env));
    return 1;
}

struct LoadedDesigns {
    std::vector<ParsedDesign> storage;
    DocSet docs;
    std::vector<Report::Input> inputs;
};

LoadedDesigns load_designs(const std::vector<std::string>& files) {
    LoadedDesigns loaded;
    loaded.storage.reserve(files.size());
    for (const auto& path : files) {
        std::string bytes = read_file(path);
        loaded.storage.push_back(parse_design(bytes));
        Report::Input input;
        input.path = path;
        input.sha256 = sha256_hex(bytes);
        if (std::holds_alternative<SchematicDoc>(loaded.storage.back()))
            input.kind = "schematic";
        else if (std::holds_alternative<BoardDoc>(loaded.storage.back()))
            input.kind = "board";
        else
            input.kind = "library";
        loaded.inputs.push_back(std::move(input));
    }
    for (const auto& design : loaded.storage) {
        if (const auto* sch = std::get_if<SchematicDoc>(&design)) {
            if (loaded.docs.sch)
                throw ConfigError("more than one schematic input given");
            loaded.docs.sch = sch;
        } else if (const auto* brd = std::get_if<BoardDoc>(&design)) {
            if (loaded.docs.brd)
                throw ConfigError("more than one board input given");
            loaded.docs.brd = brd;
        } else {
            loaded.docs.libs.push_back(&std::get<LibraryDoc>(design));
        }
    }
    return loaded;
}

// Runs a quick or full check and prints the report. Returns the exit code.
int run_check(const std::vector<std::string>& files, const std::string& lab,
              const std::string& config_path, const std::string& format,
              const std::string& waivers_path, const std::string& ledger_path, Phase phase) {
    RuleSetConfig config = load_config(config_path);
    LoadedDesigns loaded = load_designs(files);

    Netlist netlist;
    const Netlist* nl = nullptr;
    if (loaded.docs.sch) {
        netlist = build_netlist(*loaded.docs.sch);
        nl = &netlist;
    }

    std::vector<Waiver> waivers;
    if (!waivers_path.empty())
        waivers = load_waiver_file(waivers_path);

    auto findings = run_rules(loaded.docs, nl, config, lab, phase, rule_jobs());

    Report report;
    report.lab = lab;
    report.phase = phase;
    report.inputs = std::move(loaded.inputs);
    if (nl) {
        report.net_count = netlist.nets.size();
        report.pinref_count = netlist.pinref_count();
    }
    report.findings = reconcile(findings, waivers);

    bool clean = report.findings.ready_for_review();
    if (phase == Phase::Full && !ledger_path.empty()) {
        ReviewLedger ledger = load_ledger_file(ledger_path, lab);
        record_event(ledger, ReviewKind::FullCheck,
                     clean ? ReviewOutcome::Passed : ReviewOutcome::Failed, now_utc_iso8601());
        save_ledger_file(ledger_path, ledger);
    }

    std::cout << (format == "json" ? report.render_json() : report.render_text());
    return clean ? 0 : 1;
}

int run_review(const std::string& waivers_path, const std::string& rule_id,
               const std::string& locator, const std::string& decision, const std::string& note,
               const std::string& ledger_path, const std::string& charge) {
    auto waivers = load_waiver_file(waivers_path);
    WaiverState state = decision == "approve" ? WaiverState::Approved : WaiverState::Rejected;
    review(waivers, rule_id, locator, state, note);
    save_waiver_file(waivers_path, waivers);
    std::cout << "waiver " << rule_id << " at " << locator << ": " << to_string(state) << "\n";

    if (!charge.empty()) {
        if (ledger_path.empty())
            throw ConfigError("--charge needs --ledger");
        ReviewLedger ledger = load_ledger_file(ledger_path, "");
        record_event(ledger, ReviewKind::HumanReview,
                     charge == "passed" ? ReviewOutcome::Passed : ReviewOutcome::Failed,
                     now_utc_iso8601());
        save_ledger_file(ledger_path, ledger);
        std::cout << "charged one human review (" << charge << ")\n";
    }
    return 0;
}

int run_score(const std::string& ledger_path, const std::string& format) {
    std::string bytes = read_file(ledger_path);
    ReviewLedger ledger = parse_ledger(bytes);
    LabScore score = compute_score(ledger);

    if (format == "json") {
        nlohmann::json out = {{"lab", ledger.lab},
                              {"events", ledger.events.size()},
                              {"complete", score.complete}};
        if (score.complete)
            out["score"] = *score.score;
        std::cout << out.dump(2) << "\n";
        return 0;
    }

    std::cout << "lab: " << ledger.lab << "\n";
    std::cout << "events: " << ledger.events.size() << "\n";
    if (score.complete) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.1f", *score.score);
        std::cout << "score: " << buf << " / " << static_cast<int>(ReviewLedger::kBaseWorth)
                  << "\n";
    } else {
        std::cout << "score: incomplete (needs a passed full check and a passed human review)\n";
    }
    return 0;
}

int run_bom(const std::vector<std::string>& files, const std::string& out_path) {
    std::vector<SchematicDoc> docs;
    docs.reserve(files.size());
    std::vector<std::pair<std::string, const SchematicDoc*>> designs;
    for (const auto& path : files)
        docs.push_back(parse_schematic(read_file(path)));
    for (size_t i = 0; i < files.size(); ++i)
        designs.emplace_back(std::filesystem::path(files[i]).stem().string(), &docs[i]);

    std::string csv = render_bom_csv(generate_bom(designs));
    if (out_path.empty()) {
        std::cout << csv;
    } else {
        std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot write " + out_path);
        out << csv;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pcblint: design-rule checks for Eagle schematics and boards"};
    app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
    app.require_subcommand(1);

    std::vector<std::string> files;
    std::string lab, config_path, format = "text", waivers_path, ledger_path;
    std::string rule_id, locator_arg, decision, note, charge, out_path;

    auto add_check_options = [&](CLI::App* cmd, bool full) {
        cmd->add_option("files", files, "design files (.sch/.brd/.lbr)")->required();
        cmd->add_option("--lab", lab, "lab id from the rule-set configuration")->required();
        cmd->add_option("--config", config_path,
                        "rule-set configuration JSON (default: $PCBLINT_CONFIG or built-in)");
        cmd->add_option("--format", format, "report format")
            ->check(CLI::IsMember({"text", "json"}));
        if (full) {
            cmd->add_option("--waivers", waivers_path, "waiver file to reconcile against");
            cmd->add_option("--ledger", ledger_path, "review ledger to charge this full check to");
        }
    };

    CLI::App* quick = app.add_subcommand("quick", "style warnings; free to run any time");
    add_check_options(quick, false);

    CLI::App* full = app.add_subcommand("full", "correctness check; costs 0.5 points when "
                                                "charged to a ledger");
    add_check_options(full, true);

    CLI::App* rev = app.add_subcommand("review", "approve or reject a proposed waiver");
    rev->add_option("--waivers", waivers_path, "waiver file")->required();
    rev->add_option("rule_id", rule_id, "rule id of the waiver")->required();
    rev->add_option("locator", locator_arg, "locator of the waiver")->required();
    rev->add_option("decision", decision, "approve or reject")
        ->required()
        ->check(CLI::IsMember({"approve", "reject"}));
    rev->add_option("--note", note, "written feedback for the students");
    rev->add_option("--ledger", ledger_path, "review ledger");
    rev->add_option("--charge", charge, "also record a human review with this outcome")
        ->check(CLI::IsMember({"passed", "failed"}));

    CLI::App* score = app.add_subcommand("score", "compute the lab score from a ledger");
    score->add_option("--ledger", ledger_path, "review ledger")->required();
    score->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "json"}));

    CLI::App* bom = app.add_subcommand("bom", "combined bill of materials for schematics");
    bom->add_option("files", files, "schematic files")->required();
    bom->add_option("--out", out_path, "output CSV path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        // CLI11 returns 0 for --help/--version; everything else is an
        // operational error.
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(quick))
            return run_check(files, lab, config_path, format, "", "", Phase::Quick);
        if (app.got_subcommand(full))
            return run_check(files, lab, config_path, format, waivers_path, ledger_path,
                             Phase::Full);
        if (app.got_subcommand(rev))
            return run_review(waivers_path, rule_id, locator_arg, decision, note, ledger_path,
                              charge);
        if (app.got_subcommand(score))
            return run_score(ledger_path, format);
        if (app.got_subcommand(bom))
            return run_bom(files, out_path);
    } catch (const Error& e) {
        std::cerr << "pcblint: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "pcblint: internal error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
