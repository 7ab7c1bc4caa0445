#include "pcblint/eagle_model.hpp"

#include <cstdlib>
#include <sstream>
#include <algorithm>
#include <set>

#include "pcblint/errors.hpp"
#include "pcblint/xml.hpp"

namespace pcblint {

namespace {

double to_mm(const std::string& s) {
    if (s.empty())
        return 0.0;
    return std::strtod(s.c_str(), nullptr);
}

int to_layer(const std::string& s) {
    if (s.empty())
        return 0;
    return static_cast<int>(std::strtol(s.c_str(), nullptr, 10));
}

TextItem parse_text(const xml::Element& e) {
    TextItem t;
    t.content = e.text;
    t.layer = to_layer(e.attr("layer"));
    t.x = to_mm(e.attr("x"));
    t.y = to_mm(e.attr("y"));
    return t;
}

WireSegment parse_wire(const xml::Element& e) {
    WireSegment w;
    w.x1 = to_mm(e.attr("x1"));
    w.y1 = to_mm(e.attr("y1"));
    w.x2 = to_mm(e.attr("x2"));
    w.y2 = to_mm(e.attr("y2"));
    w.width = to_mm(e.attr("width"));
    w.layer = to_layer(e.attr("layer"));
    return w;
}

Package parse_package(const xml::Element& e) {
    Package pkg;
    pkg.name = e.attr("name");
    for (const auto& c : e.children) {
        if (c->name == "smd") {
            Smd s;
            s.name = c->attr("name");
            s.x = to_mm(c->attr("x"));
            s.y = to_mm(c->attr("y"));
            s.dx = to_mm(c->attr("dx"));
            s.dy = to_mm(c->attr("dy"));
            s.layer = to_layer(c->attr("layer"));
            pkg.smds.push_back(std::move(s));
        } else if (c->name == "pad") {
            ThruPad p;
            p.name = c->attr("name");
            p.x = to_mm(c->attr("x"));
            p.y = to_mm(c->attr("y"));
            p.drill = to_mm(c->attr("drill"));
            pkg.pads.push_back(std::move(p));
        } else if (c->name == "text") {
            pkg.texts.push_back(parse_text(*c));
        } else if (c->name == "wire") {
            pkg.wires.push_back(parse_wire(*c));
        }
        // holes, circles, polygons etc. are ignored
    }
    return pkg;
}

Symbol parse_symbol(const xml::Element& e) {
    Symbol sym;
    sym.name = e.attr("name");
    for (const auto* p : e.children_named("pin")) {
        Pin pin;
        pin.name = p->attr("name");
        pin.x = to_mm(p->attr("x"));
        pin.y = to_mm(p->attr("y"));
        pin.direction = p->attr("direction", "io");
        pin.visible = p->attr("visible", "both") != "off";
        sym.pins.push_back(std::move(pin));
    }
    return sym;
}

DeviceSet parse_deviceset(const xml::Element& e) {
    DeviceSet ds;
    ds.name = e.attr("name");
    ds.prefix = e.attr("prefix");
    ds.uservalue = e.attr("uservalue") == "yes";
    if (const auto* gates = e.child("gates")) {
        for (const auto* g : gates->children_named("gate")) {
            Gate gate;
            gate.name = g->attr("name");
            gate.symbol = g->attr("symbol");
            gate.x = to_mm(g->attr("x"));
            gate.y = to_mm(g->attr("y"));
            ds.gates.push_back(std::move(gate));
        }
    }
    if (const auto* devices = e.child("devices")) {
        for (const auto* d : devices->children_named("device")) {
            Device dev;
            dev.name = d->attr("name");
            dev.package = d->attr("package");
            if (const auto* connects = d->child("connects")) {
                for (const auto* c : connects->children_named("connect")) {
                    dev.connects.push_back({c->attr("gate"), c->attr("pin"), c->attr("pad")});
                }
            }
            ds.devices.push_back(std::move(dev));
        }
    }
    return ds;
}

template <typename T>
void check_unique_names(const std::vector<T>& items, const std::string& what,
                        const std::string& scope) {
    std::set<std::string> seen;
    for (const auto& item : items) {
        if (!seen.insert(item.name).second)
            throw BrokenReference(item.name, "duplicate " + what + " name in " + scope);
    }
}

void validate_library(const LibraryDoc& lib) {
    for (const auto& [pname, pkg] : lib.packages) {
        std::set<std::string> seen;
        for (const auto& s : pkg.smds)
            if (!seen.insert(s.name).second)
                throw BrokenReference(s.name, "duplicate pad name in package " + pname);
        for (const auto& p : pkg.pads)
            if (!seen.insert(p.name).second)
                throw BrokenReference(p.name, "duplicate pad name in package " + pname);
    }
    for (const auto& [sname, sym] : lib.symbols) {
        std::set<std::string> seen;
        for (const auto& p : sym.pins)
            if (!seen.insert(p.name).second)
                throw BrokenReference(p.name, "duplicate pin name in symbol " + sname);
    }
    for (const auto& [dname, ds] : lib.devicesets) {
        check_unique_names(ds.gates, "gate", "deviceset " + dname);
        check_unique_names(ds.devices, "device", "deviceset " + dname);
        for (const auto& g : ds.gates) {
            if (!lib.symbols.count(g.symbol))
                throw BrokenReference(g.symbol, "gate " + g.name + " of deviceset " + dname
                                                    + " references unknown symbol");
        }
        for (const auto& dev : ds.devices) {
            const Package* pkg = nullptr;
            if (!dev.package.empty()) {
                auto it = lib.packages.find(dev.package);
                if (it == lib.packages.end())
                    throw BrokenReference(dev.package, "device " + dev.name + " of deviceset "
                                                           + dname + " references unknown package");
                pkg = &it->second;
            }
            for (const auto& con : dev.connects) {
                const Gate* gate = ds.gate(con.gate);
                if (!gate)
                    throw BrokenReference(con.gate, "connect in deviceset " + dname
                                                        + " references unknown gate");
                const Symbol& sym = lib.symbols.at(gate->symbol);
                if (!sym.pin(con.pin))
                    throw BrokenReference(con.pin, "connect in deviceset " + dname
                                                       + " references unknown pin of symbol "
                                                       + sym.name);
                if (!pkg || !pkg->has_pad(con.pad))
                    throw BrokenReference(con.pad, "connect in deviceset " + dname
                                                       + " references unknown pad of package "
                                                       + dev.package);
            }
        }
    }
}

LibraryDoc parse_library_element(const xml::Element& e) {
    LibraryDoc lib;
    lib.name = e.attr("name", "library");
    if (const auto* packages = e.child("packages"))
        for (const auto* p : packages->children_named("package"))
            lib.packages.emplace(p->attr("name"), parse_package(*p));
    if (const auto* symbols = e.child("symbols"))
        for (const auto* s : symbols->children_named("symbol"))
            lib.symbols.emplace(s->attr("name"), parse_symbol(*s));
    if (const auto* devicesets = e.child("devicesets"))
        for (const auto* d : devicesets->children_named("deviceset"))
            lib.devicesets.emplace(d->attr("name"), parse_deviceset(*d));
    validate_library(lib);
    return lib;
}

std::map<std::string, LibraryDoc> parse_libraries(const xml::Element* libraries) {
    std::map<std::string, LibraryDoc> out;
    if (libraries)
        for (const auto* l : libraries->children_named("library"))
            out.emplace(l->attr("name"), parse_library_element(*l));
    return out;
}

Sheet parse_sheet(const xml::Element& e) {
    Sheet sheet;
    if (const auto* plain = e.child("plain")) {
        for (const auto& c : plain->children) {
            if (c->name == "text")
                sheet.texts.push_back(parse_text(*c));
            else if (c->name == "wire")
                sheet.plain_wires.push_back(parse_wire(*c));
        }
    }
    if (const auto* instances = e.child("instances")) {
        for (const auto* i : instances->children_named("instance")) {
            Instance inst;
            inst.part = i->attr("part");
            inst.gate = i->attr("gate");
            inst.x = to_mm(i->attr("x"));
            inst.y = to_mm(i->attr("y"));
            inst.rot = parse_rotation(i->attr("rot"));
            sheet.instances.push_back(std::move(inst));
        }
    }
    if (const auto* nets = e.child("nets")) {
        for (const auto* n : nets->children_named("net")) {
            Net net;
            net.name = n->attr("name");
            net.net_class = to_layer(n->attr("class"));
            for (const auto* s : n->children_named("segment")) {
                Segment seg;
                for (const auto& c : s->children) {
                    if (c->name == "pinref")
                        seg.pinrefs.push_back({c->attr("part"), c->attr("gate"), c->attr("pin")});
                    else if (c->name == "wire")
                        seg.wires.push_back(parse_wire(*c));
                    else if (c->name == "label")
                        seg.labels.push_back(
                            {to_mm(c->attr("x")), to_mm(c->attr("y")), to_layer(c->attr("layer"))});
                }
                net.segments.push_back(std::move(seg));
            }
            sheet.nets.push_back(std::move(net));
        }
    }
    return sheet;
}

// Locates drawing/<section> under the eagle root; nullptr when absent.
const xml::Element* design_section(const xml::Element& root, std::string_view section) {
    if (root.name != "eagle")
        return nullptr;
    const auto* drawing = root.child("drawing");
    if (!drawing)
        return nullptr;
    return drawing->child(std::string(section));
}

std::string describe_content(const xml::Element& root) {
    if (root.name != "eagle")
        return "root element is <" + root.name + ">, not <eagle>";
    const auto* drawing = root.child("drawing");
    if (!drawing)
        return "<eagle> has no <drawing> section";
    for (const char* kind : {"schematic", "board", "library"})
        if (drawing->child(kind))
            return std::string("file contains a ") + kind;
    return "<drawing> contains no schematic, board, or library section";
}

} // namespace

Rotation parse_rotation(std::string_view text) {
    Rotation r;
    size_t i = 0;
    for (; i < text.size() && (text[i] == 'M' || text[i] == 'S'); ++i)
        if (text[i] == 'M')
            r.mirrored = true;
    if (i < text.size() && text[i] == 'R')
        r.degrees = std::strtod(std::string(text.substr(i + 1)).c_str(), nullptr);
    return r;
}

const Pin* Symbol::pin(std::string_view pin_name) const {
    for (const auto& p : pins)
        if (p.name == pin_name)
            return &p;
    return nullptr;
}

bool Package::has_pad(std::string_view pad_name) const {
    for (const auto& s : smds)
        if (s.name == pad_name)
            return true;
    for (const auto& p : pads)
        if (p.name == pad_name)
            return true;
    return false;
}

const Gate* DeviceSet::gate(std::string_view gate_name) const {
    for (const auto& g : gates)
        if (g.name == gate_name)
            return &g;
    return nullptr;
}

const Device* DeviceSet::device(std::string_view device_name) const {
    for (const auto& d : devices)
        if (d.name == device_name)
            return &d;
    return nullptr;
}

const Part* SchematicDoc::part(std::string_view name) const {
    for (const auto& p : parts)
        if (p.name == name)
            return &p;
    return nullptr;
}

const LibraryDoc& SchematicDoc::library_of(const Part& p) const {
    auto it = libraries.find(p.library);
    if (it == libraries.end())
        throw BrokenReference(p.library, "part " + p.name + " references unknown library");
    return it->second;
}

const DeviceSet& SchematicDoc::deviceset_of(const Part& p) const {
    const LibraryDoc& lib = library_of(p);
    auto it = lib.devicesets.find(p.deviceset);
    if (it == lib.devicesets.end())
        throw BrokenReference(p.deviceset, "part " + p.name + " references unknown deviceset");
    return it->second;
}

const Device& SchematicDoc::device_of(const Part& p) const {
    const DeviceSet& ds = deviceset_of(p);
    const Device* dev = ds.device(p.device);
    if (!dev)
        throw BrokenReference(p.device, "part " + p.name + " references unknown device");
    return *dev;
}

const Symbol& SchematicDoc::symbol_of(const Part& p, std::string_view gate) const {
    const LibraryDoc& lib = library_of(p);
    const DeviceSet& ds = deviceset_of(p);
    const Gate* g = ds.gate(gate);
    if (!g)
        throw BrokenReference(std::string(gate), "part " + p.name + " has no such gate");
    return lib.symbols.at(g->symbol);
}

const Pin* SchematicDoc::find_pin(std::string_view part_name, std::string_view gate,
                                  std::string_view pin) const {
    const Part* p = part(part_name);
    if (!p)
        return nullptr;
    auto lib_it = libraries.find(p->library);
    if (lib_it == libraries.end())
        return nullptr;
    auto ds_it = lib_it->second.devicesets.find(p->deviceset);
    if (ds_it == lib_it->second.devicesets.end())
        return nullptr;
    const Gate* g = ds_it->second.gate(gate);
    if (!g)
        return nullptr;
    auto sym_it = lib_it->second.symbols.find(g->symbol);
    if (sym_it == lib_it->second.symbols.end())
        return nullptr;
    return sym_it->second.pin(pin);
}

std::string SchematicDoc::summary() const {
    std::vector<std::string> lines;
    for (const auto& p : parts)
        lines.push_back("part " + p.name);
    for (const auto& sheet : sheets) {
        for (const auto& net : sheet.nets) {
            lines.push_back("net " + net.name);
            for (const auto& seg : net.segments)
                for (const auto& pr : seg.pinrefs)
                    lines.push_back("pinref " + net.name + " " + pr.part + "." + pr.gate + "."
                                    + pr.pin);
        }
    }
    std::sort(lines.begin(), lines.end());
    std::ostringstream out;
    for (const auto& l : lines)
        out << l << "\n";
    return out.str();
}

const BoardElement* BoardDoc::element(std::string_view name) const {
    for (const auto& e : elements)
        if (e.name == name)
            return &e;
    return nullptr;
}

const Package* BoardDoc::package_of(const BoardElement& e) const {
    auto lib_it = libraries.find(e.library);
    if (lib_it == libraries.end())
        return nullptr;
    auto pkg_it = lib_it->second.packages.find(e.package);
    if (pkg_it == lib_it->second.packages.end())
        return nullptr;
    return &pkg_it->second;
}

std::vector<WireSegment> BoardDoc::outline_wires() const {
    std::vector<WireSegment> out;
    for (const auto& w : plain_wires)
        if (w.layer == 20)
            out.push_back(w);
    return out;
}

std::string BoardDoc::summary() const {
    std::vector<std::string> lines;
    for (const auto& e : elements)
        lines.push_back("element " + e.name);
    for (const auto& s : signals) {
        lines.push_back("signal " + s.name);
        for (const auto& cr : s.contactrefs)
            lines.push_back("contactref " + s.name + " " + cr.element + ":" + cr.pad);
    }
    std::sort(lines.begin(), lines.end());
    std::ostringstream out;
    for (const auto& l : lines)
        out << l << "\n";
    return out.str();
}

SchematicDoc parse_schematic(std::string_view bytes) {
    auto root = xml::parse(bytes);
    const auto* sch = design_section(*root, "schematic");
    if (!sch)
        throw NotASchematic("not an Eagle schematic: " + describe_content(*root));

    SchematicDoc doc;
    doc.version = root->attr("version");
    doc.libraries = parse_libraries(sch->child("libraries"));

    if (const auto* parts = sch->child("parts")) {
        for (const auto* p : parts->children_named("part")) {
            Part part;
            part.name = p->attr("name");
            part.library = p->attr("library");
            part.deviceset = p->attr("deviceset");
            part.device = p->attr("device");
            if (p->has_attr("value"))
                part.value = p->attr("value");
            for (const auto* a : p->children_named("attribute"))
                part.attributes[a->attr("name")] = a->attr("value");
            doc.parts.push_back(std::move(part));
        }
    }
    if (const auto* sheets = sch->child("sheets"))
        for (const auto* s : sheets->children_named("sheet"))
            doc.sheets.push_back(parse_sheet(*s));

    // cross-reference validation
    check_unique_names(doc.parts, "part", "schematic");
    for (const auto& part : doc.parts) {
        if (part.name.empty())
            throw BrokenReference("(unnamed)", "part with empty name");
        doc.device_of(part); // resolves library, deviceset, and device
    }
    for (size_t si = 0; si < doc.sheets.size(); ++si) {
        const Sheet& sheet = doc.sheets[si];
        for (const auto& inst : sheet.instances) {
            const Part* p = doc.part(inst.part);
            if (!p)
                throw BrokenReference(inst.part, "instance references unknown part");
            const DeviceSet& ds = doc.deviceset_of(*p);
            if (!ds.gate(inst.gate))
                throw BrokenReference(inst.part + "." + inst.gate,
                                      "instance references unknown gate");
        }
        for (const auto& net : sheet.nets) {
            for (const auto& seg : net.segments) {
                for (const auto& pr : seg.pinrefs) {
                    const Part* p = doc.part(pr.part);
                    if (!p)
                        throw BrokenReference(pr.part, "pinref in net " + net.name
                                                           + " references unknown part");
                    const DeviceSet& ds = doc.deviceset_of(*p);
                    if (!ds.gate(pr.gate))
                        throw BrokenReference(pr.part + "." + pr.gate,
                                              "pinref in net " + net.name
                                                  + " references unknown gate");
                    if (!doc.find_pin(pr.part, pr.gate, pr.pin))
                        throw BrokenReference(pr.part + "." + pr.gate + "." + pr.pin,
                                              "pinref in net " + net.name
                                                  + " references unknown pin");
                }
            }
        }
    }
    return doc;
}

BoardDoc parse_board(std::string_view bytes) {
    auto root = xml::parse(bytes);
    const auto* brd = design_section(*root, "board");
    if (!brd)
        throw NotABoard("not an Eagle board: " + describe_content(*root));

    BoardDoc doc;
    doc.version = root->attr("version");
    doc.libraries = parse_libraries(brd->child("libraries"));

    if (const auto* plain = brd->child("plain")) {
        for (const auto& c : plain->children) {
            if (c->name == "wire")
                doc.plain_wires.push_back(parse_wire(*c));
            else if (c->name == "text")
                doc.plain_texts.push_back(parse_text(*c));
        }
    }
    if (const auto* elements = brd->child("elements")) {
        for (const auto* e : elements->children_named("element")) {
            BoardElement el;
            el.name = e->attr("name");
            el.library = e->attr("library");
            el.package = e->attr("package");
            if (e->has_attr("value"))
                el.value = e->attr("value");
            el.x = to_mm(e->attr("x"));
            el.y = to_mm(e->attr("y"));
            el.rot = parse_rotation(e->attr("rot"));
            doc.elements.push_back(std::move(el));
        }
    }
    if (const auto* signals = brd->child("signals")) {
        for (const auto* s : signals->children_named("signal")) {
            Signal sig;
            sig.name = s->attr("name");
            for (const auto& c : s->children) {
                if (c->name == "contactref") {
                    sig.contactrefs.push_back({c->attr("element"), c->attr("pad")});
                } else if (c->name == "wire") {
                    TrackWire w;
                    w.layer = to_layer(c->attr("layer"));
                    w.width = to_mm(c->attr("width"));
                    w.x1 = to_mm(c->attr("x1"));
                    w.y1 = to_mm(c->attr("y1"));
                    w.x2 = to_mm(c->attr("x2"));
                    w.y2 = to_mm(c->attr("y2"));
                    sig.wires.push_back(w);
                } else if (c->name == "via") {
                    Via v;
                    v.x = to_mm(c->attr("x"));
                    v.y = to_mm(c->attr("y"));
                    v.drill = to_mm(c->attr("drill"));
                    std::string extent = c->attr("extent", "1-16");
                    auto dash = extent.find('-');
                    if (dash != std::string::npos) {
                        v.layer_from = to_layer(extent.substr(0, dash));
                        v.layer_to = to_layer(extent.substr(dash + 1));
                    }
                    sig.vias.push_back(v);
                }
            }
            doc.signals.push_back(std::move(sig));
        }
    }

    check_unique_names(doc.elements, "element", "board");
    for (const auto& el : doc.elements) {
        auto lib_it = doc.libraries.find(el.library);
        if (lib_it == doc.libraries.end())
            throw BrokenReference(el.library, "element " + el.name + " references unknown library");
        if (!lib_it->second.packages.count(el.package))
            throw BrokenReference(el.package, "element " + el.name + " references unknown package");
    }
    for (const auto& sig : doc.signals) {
        for (const auto& cr : sig.contactrefs) {
            const BoardElement* el = doc.element(cr.element);
            if (!el)
                throw BrokenReference(cr.element, "contactref in signal " + sig.name
                                                      + " references unknown element");
            const Package* pkg = doc.package_of(*el);
            if (!pkg || !pkg->has_pad(cr.pad))
                throw BrokenReference(cr.element + ":" + cr.pad,
                                      "contactref in signal " + sig.name
                                          + " references unknown pad");
        }
    }
    return doc;
}

LibraryDoc parse_library(std::string_view bytes) {
    auto root = xml::parse(bytes);
    const auto* lib = design_section(*root, "library");
    if (!lib)
        throw NotALibrary("not an Eagle library: " + describe_content(*root));
    LibraryDoc doc = parse_library_element(*lib);
    doc.version = root->attr("version");
    return doc;
}

ParsedDesign parse_design(std::string_view bytes) {
    auto root = xml::parse(bytes);
    if (design_section(*root, "schematic"))
        return parse_schematic(bytes);
    if (design_section(*root, "board"))
        return parse_board(bytes);
    if (design_section(*root, "library"))
        return parse_library(bytes);
    throw NotASchematic("unrecognized Eagle file: " + describe_content(*root));
}

} // namespace pcblint
