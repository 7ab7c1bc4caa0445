#pragma once

#include <string>
#include <tuple>
#include <vector>

#include "pcblint/eagle_model.hpp"

namespace pcblint {

// One line of a combined bill of materials. Parts aggregate by the full
// (library, deviceset, device, value) quadruple: a 330R and a 10k resistor
// are different orders.
struct BomLine {
    std::string library;
    std::string deviceset;
    std::string device;
    std::string value;
    std::vector<std::pair<std::string, std::string>> refs; // (design, part), sorted

    size_t quantity() const { return refs.size(); }

    auto key() const { return std::tie(library, deviceset, device, value); }
};

// Combined BOM across designs, one line per distinct key, sorted by key.
std::vector<BomLine> generate_bom(
    const std::vector<std::pair<std::string, const SchematicDoc*>>& designs);

// CSV rendering: header `library,deviceset,device,value,qty,refs`, refs
// joined with `;` as design/part, LF line endings.
std::string render_bom_csv(const std::vector<BomLine>& bom);

} // namespace pcblint
