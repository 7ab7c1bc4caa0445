#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pcblint/eagle_model.hpp"

namespace pcblint::query {

// The kind of design object a Selection currently holds. Selections are
// homogeneous; applying a step that is undefined for the current kind throws
// KindMismatch.
enum class Kind {
    Document,
    Sheet,
    Part,
    Instance,
    Net,
    Text,
    Pin,
    Package,
    Element,
    Signal,
};

std::string kind_name(Kind k);

using Item = std::variant<const SchematicDoc*, const BoardDoc*, const LibraryDoc*, const Sheet*,
                          const Part*, const Instance*, const Net*, const TextItem*, const Pin*,
                          const Package*, const BoardElement*, const Signal*>;

// Resolves an Eagle layer name ("tNames", "Dimension", ...) to its number.
// Throws KindMismatch for names outside the standard table.
int layer_number(const std::string& name_or_number);

// A chainable, side-effect-free selection over one parsed document.
// Navigation steps map every item to its children of the requested kind and
// concatenate in document order; filter steps keep matching items.
class Selection {
public:
    static Selection from(const SchematicDoc& doc);
    static Selection from(const BoardDoc& doc);
    static Selection from(const LibraryDoc& doc);

    // navigation
    Selection sheets() const;
    Selection parts() const;
    Selection instances() const;
    Selection nets() const;
    Selection texts() const;
    Selection pins() const;
    Selection packages() const;
    Selection elements() const;
    Selection signals() const;

    // filters
    Selection with_layer(int layer) const;
    Selection with_layer(const std::string& layer_name) const;
    Selection without_text(const std::string& glob) const;
    Selection with_name(const std::string& glob) const;
    Selection with_value(const std::string& glob) const;
    Selection with_deviceset(const std::string& glob) const;
    Selection with_attribute(const std::string& name, const std::string& glob) const;
    Selection matching(const std::function<bool(const Item&)>& predicate) const;

    // terminals
    size_t count() const { return items_.size(); }
    std::optional<Item> first() const;
    const std::vector<Item>& collect() const { return items_; }

    Kind kind() const { return kind_; }

private:
    using Source = std::variant<const SchematicDoc*, const BoardDoc*, const LibraryDoc*>;

    Selection(Kind kind, std::vector<Item> items, Source source)
        : kind_(kind), items_(std::move(items)), source_(source) {}

    [[noreturn]] void mismatch(const std::string& step) const;
    const SchematicDoc* sch() const;

    Kind kind_;
    std::vector<Item> items_;
    Source source_;
};

} // namespace pcblint::query
