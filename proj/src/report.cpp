#include "pcblint/report.hpp"

#include <sstream>

#include <openssl/evp.h>

#include <json.hpp>

#include "pcblint/errors.hpp"

namespace pcblint {

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr))
        throw IoError("sha256 digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

namespace {

struct Counts {
    size_t errors = 0;
    size_t warnings = 0;
};

Counts active_counts(const ReconciledReport& rec) {
    Counts c;
    for (const auto& af : rec.active) {
        if (af.finding.severity == Severity::Error)
            ++c.errors;
        else
            ++c.warnings;
    }
    return c;
}

} // namespace

std::string Report::render_text() const {
    std::ostringstream out;
    out << kToolName << " " << kToolVersion << "\n";
    out << "phase: " << to_string(phase) << "\n";
    out << "lab: " << lab << "\n";
    for (const auto& in : inputs)
        out << "input: " << in.path << " (" << in.kind << ") sha256=" << in.sha256 << "\n";
    if (net_count)
        out << "netlist: " << *net_count << " nets, " << *pinref_count << " pin connections\n";

    Counts c = active_counts(findings);
    out << "active findings: " << findings.active.size() << " (" << c.errors << " errors, "
        << c.warnings << " warnings)\n";
    for (const auto& af : findings.active) {
        out << "  [" << to_string(af.finding.severity) << "] " << af.finding.rule_id << " "
            << af.finding.locator << ": " << af.finding.message
            << (af.finding.waivable ? "" : " (not waivable)") << "\n";
        if (af.rejected_waiver)
            out << "    waiver rejected: " << af.rejected_waiver->reviewer_note << "\n";
    }
    out << "waived: " << findings.waived.size() << "\n";
    for (const auto& [f, w] : findings.waived)
        out << "  [" << to_string(f.severity) << "] " << f.rule_id << " " << f.locator
            << ": approved: " << w.explanation << "\n";
    out << "proposed: " << findings.proposed.size() << "\n";
    for (const auto& [f, w] : findings.proposed)
        out << "  [" << to_string(f.severity) << "] " << f.rule_id << " " << f.locator
            << ": awaiting review: " << w.explanation << "\n";
    out << "stale waivers: " << findings.stale.size() << "\n";
    for (const auto& w : findings.stale)
        out << "  " << w.rule_id << " " << w.locator << " (" << to_string(w.state)
            << "): matches no current finding\n";
    out << "ready for human review: " << (findings.ready_for_review() ? "yes" : "no") << "\n";
    return out.str();
}

std::string Report::render_json() const {
    using nlohmann::json;
    json root;
    root["schema"] = kReportSchemaVersion;
    root["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
    root["lab"] = lab;
    root["phase"] = to_string(phase);
    json inputs_json = json::array();
    for (const auto& in : inputs)
        inputs_json.push_back({{"path", in.path}, {"kind", in.kind}, {"sha256", in.sha256}});
    root["inputs"] = inputs_json;
    if (net_count)
        root["netlist"] = {{"nets", *net_count}, {"pinrefs", *pinref_count}};
    else
        root["netlist"] = nullptr;

    auto finding_json = [](const Finding& f) {
        return json{{"rule", f.rule_id},
                    {"severity", to_string(f.severity)},
                    {"locator", f.locator},
                    {"message", f.message},
                    {"waivable", f.waivable}};
    };
    json active = json::array();
    for (const auto& af : findings.active) {
        json f = finding_json(af.finding);
        if (af.rejected_waiver)
            f["rejected_note"] = af.rejected_waiver->reviewer_note;
        active.push_back(f);
    }
    json waived = json::array();
    for (const auto& [f, w] : findings.waived) {
        json e = finding_json(f);
        e["explanation"] = w.explanation;
        e["note"] = w.reviewer_note;
        waived.push_back(e);
    }
    json proposed = json::array();
    for (const auto& [f, w] : findings.proposed) {
        json e = finding_json(f);
        e["explanation"] = w.explanation;
        proposed.push_back(e);
    }
    json stale = json::array();
    for (const auto& w : findings.stale)
        stale.push_back({{"rule", w.rule_id},
                         {"locator", w.locator},
                         {"state", to_string(w.state)},
                         {"explanation", w.explanation}});
    root["findings"] = {{"active", active},
                        {"waived", waived},
                        {"proposed", proposed},
                        {"stale", stale}};

    Counts c = active_counts(findings);
    root["summary"] = {{"active", findings.active.size()},
                       {"errors", c.errors},
                       {"warnings", c.warnings},
                       {"waived", findings.waived.size()},
                       {"proposed", findings.proposed.size()},
                       {"stale", findings.stale.size()},
                       {"ready_for_review", findings.ready_for_review()}};
    return root.dump(2) + "\n";
}

} // namespace pcblint
