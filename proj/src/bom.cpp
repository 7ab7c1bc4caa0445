#include "pcblint/bom.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace pcblint {

std::vector<BomLine> generate_bom(
    const std::vector<std::pair<std::string, const SchematicDoc*>>& designs) {
    std::map<std::tuple<std::string, std::string, std::string, std::string>, BomLine> lines;
    for (const auto& [design_name, sch] : designs) {
        for (const auto& part : sch->parts) {
            std::string value = part.value.value_or("");
            auto key = std::make_tuple(part.library, part.deviceset, part.device, value);
            auto [it, inserted] = lines.try_emplace(key);
            if (inserted) {
                it->second.library = part.library;
                it->second.deviceset = part.deviceset;
                it->second.device = part.device;
                it->second.value = value;
            }
            it->second.refs.emplace_back(design_name, part.name);
        }
    }
    std::vector<BomLine> out;
    for (auto& [key, line] : lines) {
        std::sort(line.refs.begin(), line.refs.end());
        out.push_back(std::move(line));
    }
    return out; // map iteration is already sorted by key
}

namespace {

// RFC 4180 quoting, applied only when the field needs it.
std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

} // namespace

std::string render_bom_csv(const std::vector<BomLine>& bom) {
    std::ostringstream out;
    out << "library,deviceset,device,value,qty,refs\n";
    for (const auto& line : bom) {
        std::string refs;
        for (const auto& [design, part] : line.refs) {
            if (!refs.empty())
                refs += ';';
            refs += design + "/" + part;
        }
        out << csv_field(line.library) << ',' << csv_field(line.deviceset) << ','
            << csv_field(line.device) << ',' << csv_field(line.value) << ','
            << line.quantity() << ',' << csv_field(refs) << '\n';
    }
    return out.str();
}

} // namespace pcblint
