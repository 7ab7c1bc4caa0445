#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace pcblint::xml {

// Minimal immutable XML document tree, built with expat. Keeps exactly what
// the Eagle parsers need: element names, attributes, character data, and
// child order.
struct Element {
    std::string name;
    std::map<std::string, std::string> attributes;
    std::vector<std::unique_ptr<Element>> children;
    std::string text; // concatenated character data directly inside this element

    bool has_attr(const std::string& key) const { return attributes.count(key) != 0; }

    // Attribute value or `fallback` when absent.
    std::string attr(const std::string& key, const std::string& fallback = "") const;

    // First child with the given element name, or nullptr.
    const Element* child(std::string_view child_name) const;

    // All direct children with the given element name, in document order.
    std::vector<const Element*> children_named(std::string_view child_name) const;
};

// Parses a whole document. Throws MalformedXml on any well-formedness error.
std::unique_ptr<Element> parse(std::string_view bytes);

} // namespace pcblint::xml
