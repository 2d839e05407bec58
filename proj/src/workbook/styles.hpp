#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sheetcheck/workbook.hpp"
#include "workbook/xml_dom.hpp"

namespace sheetcheck::ooxml {

/// Deduplicated style signatures plus the mapping from cellXfs index to signature.
struct StyleTable {
    std::vector<StyleSignature> signatures;
    std::vector<std::uint32_t> xf_to_signature;

    std::uint32_t signature_of(std::uint32_t xf) const {
        return xf < xf_to_signature.size() ? xf_to_signature[xf] : 0;
    }
};

/// Theme palette in theme-index order (lt1, dk1, lt2, dk2, accent1..6, hlink, folHlink).
std::vector<Color> read_theme_palette(const xml::Element* theme);

StyleTable read_styles(const xml::Element* styles, const std::vector<Color>& theme);

/// Excel's luminance tint on an RGBA color; tint in [-1, 1].
Color apply_tint(Color c, double tint);

std::string builtin_number_format(std::uint32_t id);

}  // namespace sheetcheck::ooxml
