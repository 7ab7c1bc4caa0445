#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pcblint {

// Typed in-memory model of Eagle 6+ XML design files (.sch/.brd/.lbr).
// Documents are immutable after parsing; all analysis downstream is
// read-only. Coordinates are millimetres, name matching is case-sensitive.

struct Rotation {
    double degrees = 0.0;
    bool mirrored = false;
};

// Parses Eagle's textual rotation form ("R90", "MR180", "SR270").
Rotation parse_rotation(std::string_view text);

struct TextItem {
    std::string content;
    int layer = 0;
    double x = 0.0;
    double y = 0.0;
};

struct WireSegment {
    double x1 = 0.0, y1 = 0.0, x2 = 0.0, y2 = 0.0;
    double width = 0.0;
    int layer = 0;
};

// -------- library content --------

struct Pin {
    std::string name;
    double x = 0.0, y = 0.0;
    std::string direction = "io"; // pas|in|out|io|pwr|sup|nc|oc|hiz (Eagle's set)
    bool visible = true;
};

struct Symbol {
    std::string name;
    std::vector<Pin> pins;

    const Pin* pin(std::string_view pin_name) const;
};

struct Smd {
    std::string name;
    double x = 0.0, y = 0.0, dx = 0.0, dy = 0.0;
    int layer = 1;
};

struct ThruPad {
    std::string name;
    double x = 0.0, y = 0.0;
    double drill = 0.0;
};

struct Package {
    std::string name;
    std::vector<Smd> smds;
    std::vector<ThruPad> pads;
    std::vector<TextItem> texts;
    std::vector<WireSegment> wires;

    bool has_pad(std::string_view pad_name) const; // thru pad or smd
};

struct Gate {
    std::string name;
    std::string symbol;
    double x = 0.0, y = 0.0;
};

struct Connect {
    std::string gate;
    std::string pin;
    std::string pad;
};

struct Device {
    std::string name;    // may be "" (Eagle's single unnamed device)
    std::string package; // "" for virtual parts
    std::vector<Connect> connects;
};

struct DeviceSet {
    std::string name;
    std::string prefix;
    bool uservalue = false;
    std::vector<Gate> gates;
    std::vector<Device> devices;

    const Gate* gate(std::string_view gate_name) const;
    const Device* device(std::string_view device_name) const;
};

struct LibraryDoc {
    std::string version; // empty for embedded libraries
    std::string name;
    std::map<std::string, Package> packages;
    std::map<std::string, Symbol> symbols;
    std::map<std::string, DeviceSet> devicesets;
};

// -------- schematic content --------

struct Part {
    std::string name; // reference designator, e.g. "U1"
    std::string library;
    std::string deviceset;
    std::string device;
    std::optional<std::string> value;
    std::map<std::string, std::string> attributes;
};

struct Instance {
    std::string part;
    std::string gate;
    double x = 0.0, y = 0.0;
    Rotation rot;
};

struct PinRef {
    std::string part;
    std::string gate;
    std::string pin;
};

struct Label {
    double x = 0.0, y = 0.0;
    int layer = 0;
};

struct Segment {
    std::vector<PinRef> pinrefs;
    std::vector<Label> labels;
    std::vector<WireSegment> wires;
};

struct Net {
    std::string name;
    int net_class = 0;
    std::vector<Segment> segments;
};

struct Sheet {
    std::vector<Instance> instances;
    std::vector<Net> nets;
    std::vector<TextItem> texts;       // plain text items
    std::vector<WireSegment> plain_wires;
};

struct SchematicDoc {
    std::string version;
    std::map<std::string, LibraryDoc> libraries;
    std::vector<Part> parts;  // document order
    std::vector<Sheet> sheets;

    const Part* part(std::string_view name) const;

    // The following resolve references that were validated at parse time, so
    // they throw BrokenReference only on programmer error (hand-built docs).
    const LibraryDoc& library_of(const Part& p) const;
    const DeviceSet& deviceset_of(const Part& p) const;
    const Device& device_of(const Part& p) const;
    const Symbol& symbol_of(const Part& p, std::string_view gate) const;

    // nullptr when the triple does not resolve.
    const Pin* find_pin(std::string_view part, std::string_view gate,
                        std::string_view pin) const;

    // Sorted cross-reference summary (part names, net names, pinref triples);
    // used by the round-trip determinism property.
    std::string summary() const;
};

// -------- board content --------

struct BoardElement {
    std::string name;
    std::string library;
    std::string package;
    std::optional<std::string> value;
    double x = 0.0, y = 0.0;
    Rotation rot;
};

struct ContactRef {
    std::string element;
    std::string pad;
};

struct TrackWire {
    int layer = 1;
    double width = 0.0;
    double x1 = 0.0, y1 = 0.0, x2 = 0.0, y2 = 0.0;
};

struct Via {
    double x = 0.0, y = 0.0;
    double drill = 0.0;
    int layer_from = 1; // copper span, e.g. extent "1-16"
    int layer_to = 16;
};

struct Signal {
    std::string name;
    std::vector<ContactRef> contactrefs;
    std::vector<TrackWire> wires;
    std::vector<Via> vias;
};

struct BoardDoc {
    std::string version;
    std::map<std::string, LibraryDoc> libraries;
    std::vector<BoardElement> elements;
    std::vector<Signal> signals;
    std::vector<WireSegment> plain_wires;
    std::vector<TextItem> plain_texts;

    const BoardElement* element(std::string_view name) const;
    const Package* package_of(const BoardElement& e) const;

    // Graphic segments on layer 20 (Dimension).
    std::vector<WireSegment> outline_wires() const;

    std::string summary() const;
};

// -------- parsing --------

// Each parser accepts Eagle XML (versions 6.x-9.x), ignores unknown elements
// and attributes, and fully cross-checks references before returning.
// Throws MalformedXml / NotASchematic / NotABoard / NotALibrary /
// BrokenReference.
SchematicDoc parse_schematic(std::string_view bytes);
BoardDoc parse_board(std::string_view bytes);
LibraryDoc parse_library(std::string_view bytes);

enum class DocKind { Schematic, Board, Library };

using ParsedDesign = std::variant<SchematicDoc, BoardDoc, LibraryDoc>;

// Determines the document kind from content (not file extension) and parses.
ParsedDesign parse_design(std::string_view bytes);

} // namespace pcblint
