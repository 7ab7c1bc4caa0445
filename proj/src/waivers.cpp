#include "pcblint/waivers.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "pcblint/errors.hpp"

namespace pcblint {

std::string to_string(WaiverState s) {
    switch (s) {
    case WaiverState::Proposed: return "proposed";
    case WaiverState::Approved: return "approved";
    case WaiverState::Rejected: return "rejected";
    }
    return "?";
}

namespace {

std::optional<WaiverState> state_from(const std::string& s) {
    if (s == "proposed")
        return WaiverState::Proposed;
    if (s == "approved")
        return WaiverState::Approved;
    if (s == "rejected")
        return WaiverState::Rejected;
    return std::nullopt;
}

// Splits a record on unescaped `|`, unescaping `\|` and `\\` in fields.
std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '\\' && i + 1 < line.size()
            && (line[i + 1] == '|' || line[i + 1] == '\\')) {
            field += line[i + 1];
            ++i;
        } else if (line[i] == '|') {
            fields.push_back(field);
            field.clear();
        } else {
            field += line[i];
        }
    }
    fields.push_back(field);
    return fields;
}

std::string escape_field(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '|' || c == '\\')
            out += '\\';
        out += c;
    }
    return out;
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace

std::vector<Waiver> load_waivers(const std::string& bytes) {
    std::vector<Waiver> out;
    std::set<std::pair<std::string, std::string>> seen;
    std::istringstream in(bytes);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#')
            continue;
        auto fields = split_fields(stripped);
        if (fields.size() != 5)
            throw WaiverSyntax("expected 5 |-separated fields, got "
                                   + std::to_string(fields.size()),
                               lineno);
        Waiver w;
        w.rule_id = trim(fields[0]);
        w.locator = trim(fields[1]);
        auto state = state_from(trim(fields[2]));
        w.explanation = trim(fields[3]);
        w.reviewer_note = trim(fields[4]);
        if (w.rule_id.empty())
            throw WaiverSyntax("empty rule id", lineno);
        if (w.locator.empty())
            throw WaiverSyntax("empty locator", lineno);
        if (!state)
            throw WaiverSyntax("state must be proposed, approved, or rejected", lineno);
        w.state = *state;
        if (w.explanation.empty())
            throw WaiverSyntax("waivers need a nonempty explanation", lineno);
        if (!seen.insert({w.rule_id, w.locator}).second)
            throw DuplicateWaiver("duplicate waiver for " + w.rule_id + " at " + w.locator);
        out.push_back(std::move(w));
    }
    return out;
}

std::string render_waivers(const std::vector<Waiver>& waivers) {
    std::ostringstream out;
    out << "# pcblint waivers: rule_id | locator | state | explanation | reviewer_note\n";
    for (const auto& w : waivers) {
        out << escape_field(w.rule_id) << " | " << escape_field(w.locator) << " | "
            << to_string(w.state) << " | " << escape_field(w.explanation) << " | "
            << escape_field(w.reviewer_note) << "\n";
    }
    return out.str();
}

std::vector<Waiver> load_waiver_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot read waiver file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_waivers(buf.str());
}

void save_waiver_file(const std::string& path, const std::vector<Waiver>& waivers) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot write " + tmp);
        out << render_waivers(waivers);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw IoError("cannot replace " + path + ": " + ec.message());
}

ReconciledReport reconcile(const std::vector<Finding>& findings,
                           const std::vector<Waiver>& waivers) {
    ReconciledReport report;
    std::map<std::pair<std::string, std::string>, const Waiver*> by_key;
    for (const auto& w : waivers)
        by_key[{w.rule_id, w.locator}] = &w;

    std::set<const Waiver*> used;
    for (const auto& f : findings) {
        auto it = by_key.find({f.rule_id, f.locator});
        const Waiver* w = it == by_key.end() ? nullptr : it->second;
        if (!w) {
            report.active.push_back({f, std::nullopt});
            continue;
        }
        if (!f.waivable) {
            // Non-waivable findings stay active; their waiver is left stale.
            report.active.push_back({f, std::nullopt});
            continue;
        }
        used.insert(w);
        switch (w->state) {
        case WaiverState::Approved:
            report.waived.emplace_back(f, *w);
            break;
        case WaiverState::Proposed:
            report.proposed.emplace_back(f, *w);
            break;
        case WaiverState::Rejected:
            report.active.push_back({f, *w});
            break;
        }
    }
    for (const auto& w : waivers)
        if (!used.count(&w))
            report.stale.push_back(w);
    return report;
}

void review(std::vector<Waiver>& waivers, const std::string& rule_id, const std::string& loc,
            WaiverState decision, const std::string& note) {
    if (decision == WaiverState::Proposed)
        throw ConfigError("a review decision must be approved or rejected");
    for (auto& w : waivers) {
        if (w.rule_id == rule_id && w.locator == loc) {
            if (w.state != WaiverState::Proposed)
                throw AlreadyDecided("waiver for " + rule_id + " at " + loc + " is already "
                                     + to_string(w.state));
            w.state = decision;
            w.reviewer_note = note;
            return;
        }
    }
    throw NoSuchWaiver("no waiver for " + rule_id + " at " + loc);
}

} // namespace pcblint
