#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pcblint/rules.hpp"
#include "pcblint/waivers.hpp"

namespace pcblint {

inline constexpr const char* kToolName = "pcblint";
inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kReportSchemaVersion = 1;

std::string sha256_hex(std::string_view bytes);

// Everything a check run reports. Rendering is a pure function of the
// content; the text and JSON forms carry identical information.
struct Report {
    struct Input {
        std::string path;
        std::string kind; // schematic | board | library
        std::string sha256;
    };

    std::string lab;
    Phase phase = Phase::Quick;
    std::vector<Input> inputs;
    std::optional<size_t> net_count;    // set when a schematic was netlisted
    std::optional<size_t> pinref_count;
    ReconciledReport findings;

    std::string render_text() const;
    std::string render_json() const;
};

} // namespace pcblint
