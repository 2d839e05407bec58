#include "workbook/xml_dom.hpp"

#include <expat.h>

#include <memory>
#include <stdexcept>

namespace sheetcheck::xml {

std::string_view local_name(std::string_view qualified) {
    const auto colon = qualified.rfind(':');
    return colon == std::string_view::npos ? qualified : qualified.substr(colon + 1);
}

std::optional<std::string_view> Element::attr(std::string_view key) const {
    for (const auto& [k, v] : attributes) {
        if (k == key) return std::string_view(v);
    }
    return std::nullopt;
}

std::string Element::attr_or(std::string_view key, std::string_view fallback) const {
    auto v = attr(key);
    return std::string(v ? *v : fallback);
}

const Element* Element::child(std::string_view child_name) const {
    for (const auto& c : children) {
        if (c.name == child_name) return &c;
    }
    return nullptr;
}

std::vector<const Element*> Element::children_named(std::string_view child_name) const {
    std::vector<const Element*> out;
    for (const auto& c : children) {
        if (c.name == child_name) out.push_back(&c);
    }
    return out;
}

namespace {

struct Builder {
    Element root;
    std::vector<Element*> stack;
    bool have_root = false;

    static void on_start(void* user, const XML_Char* name, const XML_Char** atts) {
        auto* b = static_cast<Builder*>(user);
        Element e;
        e.name = std::string(local_name(name));
        for (int i = 0; atts[i]; i += 2) {
            std::string_view key = atts[i];
            // keep r:id style references distinguishable from plain id
            std::string k = key.rfind("r:", 0) == 0 ? std::string(key) : std::string(local_name(key));
            e.attributes.emplace_back(std::move(k), atts[i + 1]);
        }
        if (b->stack.empty()) {
            b->root = std::move(e);
            b->have_root = true;
            b->stack.push_back(&b->root);
        } else {
            Element* parent = b->stack.back();
            parent->children.push_back(std::move(e));
            b->stack.push_back(&parent->children.back());
        }
    }

    static void on_end(void* user, const XML_Char*) {
        auto* b = static_cast<Builder*>(user);
        b->stack.pop_back();
    }

    static void on_text(void* user, const XML_Char* s, int len) {
        auto* b = static_cast<Builder*>(user);
        if (!b->stack.empty()) b->stack.back()->text.append(s, static_cast<std::size_t>(len));
    }
};

}  // namespace

Element parse(std::string_view document) {
    std::unique_ptr<XML_ParserStruct, decltype(&XML_ParserFree)> parser(XML_ParserCreate("UTF-8"),
                                                                         &XML_ParserFree);
    if (!parser) throw ParseError("cannot create XML parser");
    Builder builder;
    XML_SetUserData(parser.get(), &builder);
    XML_SetElementHandler(parser.get(), &Builder::on_start, &Builder::on_end);
    XML_SetCharacterDataHandler(parser.get(), &Builder::on_text);
    if (XML_Parse(parser.get(), document.data(), static_cast<int>(document.size()), XML_TRUE) ==
        XML_STATUS_ERROR) {
        throw ParseError(std::string(XML_ErrorString(XML_GetErrorCode(parser.get()))) + " at line " +
                         std::to_string(XML_GetCurrentLineNumber(parser.get())));
    }
    if (!builder.have_root) throw ParseError("empty document");
    return std::move(builder.root);
}

}  // namespace sheetcheck::xml
