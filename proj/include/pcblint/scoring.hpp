#pragma once

#include <optional>
#include <string>
#include <vector>

namespace pcblint {

// Pay-for-review lab scoring: labs are worth 10 points, teams start with a
// 12-point balance, and every full check or human review they request costs
// 0.5 points, passed or failed. Completing a lab takes one passed full check
// and one passed human review, so the best possible score is 11 out of 10.

enum class ReviewKind { FullCheck, HumanReview };
enum class ReviewOutcome { Passed, Failed };

std::string to_string(ReviewKind k);
std::string to_string(ReviewOutcome o);

struct ReviewEvent {
    std::string timestamp; // ISO-8601 UTC, e.g. "2026-08-10T17:03:00Z"
    ReviewKind kind = ReviewKind::FullCheck;
    ReviewOutcome outcome = ReviewOutcome::Failed;
};

struct ReviewLedger {
    static constexpr double kBaseWorth = 10.0;
    static constexpr double kStartingBalance = 12.0;
    static constexpr double kCostPerReview = 0.5;

    std::string lab;
    std::vector<ReviewEvent> events; // append-only, insertion order
};

struct LabScore {
    bool complete = false;
    std::optional<double> score; // set only when complete
};

void record_event(ReviewLedger& ledger, ReviewKind kind, ReviewOutcome outcome,
                  const std::string& timestamp);

// complete := at least one passed full check and one passed human review;
// when complete, score = max(0, 12 - 0.5 * total events).
LabScore compute_score(const ReviewLedger& ledger);

// JSON persistence: {"lab": ..., "events": [{"t": ..., "kind": ..., "outcome": ...}]}
std::string render_ledger(const ReviewLedger& ledger);
ReviewLedger parse_ledger(const std::string& bytes);

// Loads the ledger at `path` (an empty ledger when the file does not exist),
// or rewrites it atomically.
ReviewLedger load_ledger_file(const std::string& path, const std::string& lab_fallback);
void save_ledger_file(const std::string& path, const ReviewLedger& ledger);

// Current wall-clock time formatted for the ledger.
std::string now_utc_iso8601();

} // namespace pcblint
