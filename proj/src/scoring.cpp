#include "pcblint/scoring.hpp"

#include <algorithm>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pcblint/errors.hpp"

namespace pcblint {

std::string to_string(ReviewKind k) {
    return k == ReviewKind::FullCheck ? "full_check" : "human_review";
}

std::string to_string(ReviewOutcome o) {
    return o == ReviewOutcome::Passed ? "passed" : "failed";
}

void record_event(ReviewLedger& ledger, ReviewKind kind, ReviewOutcome outcome,
                  const std::string& timestamp) {
    ledger.events.push_back({timestamp, kind, outcome});
}

LabScore compute_score(const ReviewLedger& ledger) {
    bool full_passed = false;
    bool human_passed = false;
    for (const auto& e : ledger.events) {
        if (e.outcome != ReviewOutcome::Passed)
            continue;
        if (e.kind == ReviewKind::FullCheck)
            full_passed = true;
        else
            human_passed = true;
    }
    LabScore score;
    score.complete = full_passed && human_passed;
    if (score.complete) {
        double raw = ReviewLedger::kStartingBalance
                     - ReviewLedger::kCostPerReview * static_cast<double>(ledger.events.size());
        score.score = std::max(0.0, raw);
    }
    return score;
}

std::string render_ledger(const ReviewLedger& ledger) {
    nlohmann::json events = nlohmann::json::array();
    for (const auto& e : ledger.events) {
        events.push_back({{"t", e.timestamp},
                          {"kind", to_string(e.kind)},
                          {"outcome", to_string(e.outcome)}});
    }
    nlohmann::json root = {{"lab", ledger.lab}, {"events", events}};
    return root.dump(2) + "\n";
}

ReviewLedger parse_ledger(const std::string& bytes) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
        throw IoError(std::string("ledger is not valid JSON: ") + e.what());
    }
    ReviewLedger ledger;
    ledger.lab = root.value("lab", "");
    for (const auto& e : root.value("events", nlohmann::json::array())) {
        ReviewEvent ev;
        ev.timestamp = e.value("t", "");
        std::string kind = e.value("kind", "");
        std::string outcome = e.value("outcome", "");
        if (kind == "full_check")
            ev.kind = ReviewKind::FullCheck;
        else if (kind == "human_review")
            ev.kind = ReviewKind::HumanReview;
        else
            throw IoError("ledger event has unknown kind \"" + kind + "\"");
        if (outcome == "passed")
            ev.outcome = ReviewOutcome::Passed;
        else if (outcome == "failed")
            ev.outcome = ReviewOutcome::Failed;
        else
            throw IoError("ledger event has unknown outcome \"" + outcome + "\"");
        ledger.events.push_back(std::move(ev));
    }
    return ledger;
}

ReviewLedger load_ledger_file(const std::string& path, const std::string& lab_fallback) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        ReviewLedger fresh;
        fresh.lab = lab_fallback;
        return fresh;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    ReviewLedger ledger = parse_ledger(buf.str());
    if (ledger.lab.empty())
        ledger.lab = lab_fallback;
    return ledger;
}

void save_ledger_file(const std::string& path, const ReviewLedger& ledger) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot write " + tmp);
        out << render_ledger(ledger);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw IoError("cannot replace " + path + ": " + ec.message());
}

std::string now_utc_iso8601() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace pcblint
