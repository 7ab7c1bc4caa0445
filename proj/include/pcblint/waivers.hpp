#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pcblint/rules.hpp"

namespace pcblint {

enum class WaiverState { Proposed, Approved, Rejected };

std::string to_string(WaiverState s);

// A student's recorded explanation that one finding is unjustified, keyed by
// (rule_id, locator), plus the staff decision on it.
struct Waiver {
    std::string rule_id;
    std::string locator;
    WaiverState state = WaiverState::Proposed;
    std::string explanation;
    std::string reviewer_note;
};

// Line-oriented waiver file: one record per line,
//   rule_id | locator | state | explanation | reviewer_note
// `|` inside a field is escaped as `\|`; lines starting with `#` are comments.
std::vector<Waiver> load_waivers(const std::string& bytes);
std::string render_waivers(const std::vector<Waiver>& waivers);

// Reads, updates, and atomically rewrites a waiver file (write-new-then-rename).
std::vector<Waiver> load_waiver_file(const std::string& path);
void save_waiver_file(const std::string& path, const std::vector<Waiver>& waivers);

// Findings and waivers reconciled into the four report buckets.
struct ReconciledReport {
    struct ActiveFinding {
        Finding finding;
        std::optional<Waiver> rejected_waiver; // present when a rejection made it active
    };

    std::vector<ActiveFinding> active;                  // unwaived or rejected
    std::vector<std::pair<Finding, Waiver>> waived;     // approved
    std::vector<std::pair<Finding, Waiver>> proposed;   // awaiting staff review
    std::vector<Waiver> stale;                          // matching no current finding

    // A design is submittable for human review once everything is fixed or
    // explained: no active findings remain.
    bool ready_for_review() const { return active.empty(); }
};

ReconciledReport reconcile(const std::vector<Finding>& findings,
                           const std::vector<Waiver>& waivers);

// Applies a staff decision to a Proposed waiver. Throws NoSuchWaiver /
// AlreadyDecided.
void review(std::vector<Waiver>& waivers, const std::string& rule_id, const std::string& loc,
            WaiverState decision, const std::string& note);

} // namespace pcblint
