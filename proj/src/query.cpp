#include "pcblint/query.hpp"

#include <map>

#include "pcblint/errors.hpp"
#include "pcblint/glob.hpp"

namespace pcblint::query {

std::string kind_name(Kind k) {
    switch (k) {
    case Kind::Document: return "document";
    case Kind::Sheet: return "sheet";
    case Kind::Part: return "part";
    case Kind::Instance: return "instance";
    case Kind::Net: return "net";
    case Kind::Text: return "text";
    case Kind::Pin: return "pin";
    case Kind::Package: return "package";
    case Kind::Element: return "element";
    case Kind::Signal: return "signal";
    }
    return "?";
}

int layer_number(const std::string& name_or_number) {
    if (!name_or_number.empty()
        && name_or_number.find_first_not_of("0123456789") == std::string::npos)
        return std::stoi(name_or_number);
    static const std::map<std::string, int> table = {
        {"Top", 1},      {"Route2", 2},   {"Route15", 15}, {"Bottom", 16},  {"Pads", 17},
        {"Vias", 18},    {"Unrouted", 19},{"Dimension", 20},{"tPlace", 21}, {"bPlace", 22},
        {"tOrigins", 23},{"bOrigins", 24},{"tNames", 25},  {"bNames", 26},  {"tValues", 27},
        {"bValues", 28}, {"tStop", 29},   {"bStop", 30},   {"tCream", 31},  {"bCream", 32},
        {"tKeepout", 39},{"bKeepout", 40},{"tDocu", 51},   {"bDocu", 52},   {"Nets", 91},
        {"Busses", 92},  {"Pins", 93},    {"Symbols", 94}, {"Names", 95},   {"Values", 96},
        {"Info", 97},    {"Guide", 98},
    };
    auto it = table.find(name_or_number);
    if (it == table.end())
        throw KindMismatch("unknown layer name \"" + name_or_number + "\"");
    return it->second;
}

Selection Selection::from(const SchematicDoc& doc) {
    return Selection(Kind::Document, {Item{&doc}}, &doc);
}

Selection Selection::from(const BoardDoc& doc) {
    return Selection(Kind::Document, {Item{&doc}}, &doc);
}

Selection Selection::from(const LibraryDoc& doc) {
    return Selection(Kind::Document, {Item{&doc}}, &doc);
}

void Selection::mismatch(const std::string& step) const {
    throw KindMismatch("step " + step + "() is undefined for a selection of "
                       + kind_name(kind_));
}

const SchematicDoc* Selection::sch() const {
    if (auto* const* d = std::get_if<const SchematicDoc*>(&source_))
        return *d;
    return nullptr;
}

Selection Selection::sheets() const {
    if (kind_ != Kind::Document || !sch())
        mismatch("sheets");
    std::vector<Item> out;
    for (const auto& s : sch()->sheets)
        out.push_back(&s);
    return Selection(Kind::Sheet, std::move(out), source_);
}

Selection Selection::parts() const {
    if (kind_ != Kind::Document || !sch())
        mismatch("parts");
    std::vector<Item> out;
    for (const auto& p : sch()->parts)
        out.push_back(&p);
    return Selection(Kind::Part, std::move(out), source_);
}

Selection Selection::instances() const {
    if (kind_ != Kind::Sheet)
        mismatch("instances");
    std::vector<Item> out;
    for (const auto& item : items_)
        for (const auto& i : std::get<const Sheet*>(item)->instances)
            out.push_back(&i);
    return Selection(Kind::Instance, std::move(out), source_);
}

Selection Selection::nets() const {
    if (kind_ != Kind::Sheet)
        mismatch("nets");
    std::vector<Item> out;
    for (const auto& item : items_)
        for (const auto& n : std::get<const Sheet*>(item)->nets)
            out.push_back(&n);
    return Selection(Kind::Net, std::move(out), source_);
}

Selection Selection::texts() const {
    std::vector<Item> out;
    if (kind_ == Kind::Sheet) {
        for (const auto& item : items_)
            for (const auto& t : std::get<const Sheet*>(item)->texts)
                out.push_back(&t);
    } else if (kind_ == Kind::Package) {
        for (const auto& item : items_)
            for (const auto& t : std::get<const Package*>(item)->texts)
                out.push_back(&t);
    } else {
        mismatch("texts");
    }
    return Selection(Kind::Text, std::move(out), source_);
}

Selection Selection::pins() const {
    if (kind_ != Kind::Instance || !sch())
        mismatch("pins");
    std::vector<Item> out;
    for (const auto& item : items_) {
        const Instance* inst = std::get<const Instance*>(item);
        const Part* part = sch()->part(inst->part);
        const Symbol& sym = sch()->symbol_of(*part, inst->gate);
        for (const auto& pin : sym.pins)
            out.push_back(&pin);
    }
    return Selection(Kind::Pin, std::move(out), source_);
}

Selection Selection::packages() const {
    if (kind_ != Kind::Document)
        mismatch("packages");
    const std::map<std::string, LibraryDoc>* libs = nullptr;
    std::vector<Item> out;
    if (auto* const* d = std::get_if<const SchematicDoc*>(&source_))
        libs = &(*d)->libraries;
    else if (auto* const* b = std::get_if<const BoardDoc*>(&source_))
        libs = &(*b)->libraries;
    if (libs) {
        for (const auto& [name, lib] : *libs)
            for (const auto& [pname, pkg] : lib.packages)
                out.push_back(&pkg);
    } else {
        const auto* lib = std::get<const LibraryDoc*>(source_);
        for (const auto& [pname, pkg] : lib->packages)
            out.push_back(&pkg);
    }
    return Selection(Kind::Package, std::move(out), source_);
}

Selection Selection::elements() const {
    auto* const* brd = std::get_if<const BoardDoc*>(&source_);
    if (kind_ != Kind::Document || !brd)
        mismatch("elements");
    std::vector<Item> out;
    for (const auto& e : (*brd)->elements)
        out.push_back(&e);
    return Selection(Kind::Element, std::move(out), source_);
}

Selection Selection::signals() const {
    auto* const* brd = std::get_if<const BoardDoc*>(&source_);
    if (kind_ != Kind::Document || !brd)
        mismatch("signals");
    std::vector<Item> out;
    for (const auto& s : (*brd)->signals)
        out.push_back(&s);
    return Selection(Kind::Signal, std::move(out), source_);
}

Selection Selection::with_layer(int layer) const {
    if (kind_ != Kind::Text)
        mismatch("with_layer");
    std::vector<Item> out;
    for (const auto& item : items_)
        if (std::get<const TextItem*>(item)->layer == layer)
            out.push_back(item);
    return Selection(kind_, std::move(out), source_);
}

Selection Selection::with_layer(const std::string& layer_name) const {
    return with_layer(layer_number(layer_name));
}

Selection Selection::without_text(const std::string& glob) const {
    if (kind_ != Kind::Text)
        mismatch("without_text");
    std::vector<Item> out;
    for (const auto& item : items_)
        if (!glob_match(glob, std::get<const TextItem*>(item)->content))
            out.push_back(item);
    return Selection(kind_, std::move(out), source_);
}

Selection Selection::with_name(const std::string& glob) const {
    auto name_of = [&](const Item& item) -> const std::string& {
        switch (kind_) {
        case Kind::Part: return std::get<const Part*>(item)->name;
        case Kind::Instance: return std::get<const Instance*>(item)->part;
        case Kind::Net: return std::get<const Net*>(item)->name;
        case Kind::Pin: return std::get<const Pin*>(item)->name;
        case Kind::Package: return std::get<const Package*>(item)->name;
        case Kind::Element: return std::get<const BoardElement*>(item)->name;
        default: return std::get<const Signal*>(item)->name;
        }
    };
    switch (kind_) {
    case Kind::Part: case Kind::Instance: case Kind::Net: case Kind::Pin:
    case Kind::Package: case Kind::Element: case Kind::Signal:
        break;
    default:
        mismatch("with_name");
    }
    std::vector<Item> out;
    for (const auto& item : items_)
        if (glob_match(glob, name_of(item)))
            out.push_back(item);
    return Selection(kind_, std::move(out), source_);
}

Selection Selection::with_value(const std::string& glob) const {
    std::vector<Item> out;
    if (kind_ == Kind::Part) {
        for (const auto& item : items_) {
            const Part* p = std::get<const Part*>(item);
            if (p->value && glob_match(glob, *p->value))
                out.push_back(item);
        }
    } else if (kind_ == Kind::Element) {
        for (const auto& item : items_) {
            const BoardElement* e = std::get<const BoardElement*>(item);
            if (e->value && glob_match(glob, *e->value))
                out.push_back(item);
        }
    } else {
        mismatch("with_value");
    }
    return Selection(kind_, std::move(out), source_);
}

Selection Selection::with_deviceset(const std::string& glob) const {
    if (kind_ != Kind::Part)
        mismatch("with_deviceset");
    std::vector<Item> out;
    for (const auto& item : items_)
        if (glob_match(glob, std::get<const Part*>(item)->deviceset))
            out.push_back(item);
    return Selection(kind_, std::move(out), source_);
}

Selection Selection::with_attribute(const std::string& name, const std::string& glob) const {
    if (kind_ != Kind::Part)
        mismatch("with_attribute");
    std::vector<Item> out;
    for (const auto& item : items_) {
        const Part* p = std::get<const Part*>(item);
        auto it = p->attributes.find(name);
        if (it != p->attributes.end() && glob_match(glob, it->second))
            out.push_back(item);
    }
    return Selection(kind_, std::move(out), source_);
}

Selection Selection::matching(const std::function<bool(const Item&)>& predicate) const {
    std::vector<Item> out;
    for (const auto& item : items_)
        if (predicate(item))
            out.push_back(item);
    return Selection(kind_, std::move(out), source_);
}

std::optional<Item> Selection::first() const {
    if (items_.empty())
        return std::nullopt;
    return items_.front();
}

} // namespace pcblint::query
