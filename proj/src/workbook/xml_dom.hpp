#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sheetcheck::xml {

/// Element tree with namespace prefixes stripped from element and attribute names.
struct Element {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attributes;
    std::vector<Element> children;
    std::string text;  // character data directly inside this element

    std::optional<std::string_view> attr(std::string_view key) const;
    std::string attr_or(std::string_view key, std::string_view fallback) const;
    const Element* child(std::string_view child_name) const;
    std::vector<const Element*> children_named(std::string_view child_name) const;

    /// Pre-order search of the whole subtree, including this element.
    template <class F>
    void for_each(std::string_view element_name, F&& f) const {
        if (name == element_name) f(*this);
        for (const auto& c : children) c.for_each(element_name, f);
    }
};

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Throws xml::ParseError with line information on malformed input.
Element parse(std::string_view document);

std::string_view local_name(std::string_view qualified);

}  // namespace sheetcheck::xml
