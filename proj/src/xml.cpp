#include "pcblint/xml.hpp"

#include <expat.h>

#include "pcblint/errors.hpp"

namespace pcblint::xml {

std::string Element::attr(const std::string& key, const std::string& fallback) const {
    auto it = attributes.find(key);
    return it == attributes.end() ? fallback : it->second;
}

const Element* Element::child(std::string_view child_name) const {
    for (const auto& c : children)
        if (c->name == child_name)
            return c.get();
    return nullptr;
}

std::vector<const Element*> Element::children_named(std::string_view child_name) const {
    std::vector<const Element*> out;
    for (const auto& c : children)
        if (c->name == child_name)
            out.push_back(c.get());
    return out;
}

namespace {

struct BuildState {
    std::unique_ptr<Element> root;
    std::vector<Element*> stack;
};

void XMLCALL on_start(void* user, const XML_Char* name, const XML_Char** attrs) {
    auto* st = static_cast<BuildState*>(user);
    auto elem = std::make_unique<Element>();
    elem->name = name;
    for (int i = 0; attrs[i]; i += 2)
        elem->attributes.emplace(attrs[i], attrs[i + 1]);
    Element* raw = elem.get();
    if (st->stack.empty()) {
        st->root = std::move(elem);
    } else {
        st->stack.back()->children.push_back(std::move(elem));
    }
    st->stack.push_back(raw);
}

void XMLCALL on_end(void* user, const XML_Char*) {
    static_cast<BuildState*>(user)->stack.pop_back();
}

void XMLCALL on_chardata(void* user, const XML_Char* data, int len) {
    auto* st = static_cast<BuildState*>(user);
    if (!st->stack.empty())
        st->stack.back()->text.append(data, static_cast<size_t>(len));
}

} // namespace

std::unique_ptr<Element> parse(std::string_view bytes) {
    XML_Parser parser = XML_ParserCreate(nullptr);
    if (!parser)
        throw IoError("failed to create XML parser");

    BuildState state;
    XML_SetUserData(parser, &state);
    XML_SetElementHandler(parser, on_start, on_end);
    XML_SetCharacterDataHandler(parser, on_chardata);

    XML_Status status = XML_Parse(parser, bytes.data(), static_cast<int>(bytes.size()), 1);
    if (status != XML_STATUS_OK) {
        std::string msg = XML_ErrorString(XML_GetErrorCode(parser));
        int line = static_cast<int>(XML_GetCurrentLineNumber(parser));
        int col = static_cast<int>(XML_GetCurrentColumnNumber(parser));
        XML_ParserFree(parser);
        throw MalformedXml(msg, line, col);
    }
    XML_ParserFree(parser);
    if (!state.root)
        throw MalformedXml("document has no root element", 1, 0);
    return std::move(state.root);
}

} // namespace pcblint::xml
