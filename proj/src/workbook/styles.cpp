#include "workbook/styles.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <map>

#include "util/strings.hpp"

namespace sheetcheck::ooxml {
namespace {

constexpr std::array<std::uint32_t, 64> kIndexedPalette = {
    0x000000, 0xFFFFFF, 0xFF0000, 0x00FF00, 0x0000FF, 0xFFFF00, 0xFF00FF, 0x00FFFF,
    0x000000, 0xFFFFFF, 0xFF0000, 0x00FF00, 0x0000FF, 0xFFFF00, 0xFF00FF, 0x00FFFF,
    0x800000, 0x008000, 0x000080, 0x808000, 0x800080, 0x008080, 0xC0C0C0, 0x808080,
    0x9999FF, 0x993366, 0xFFFFCC, 0xCCFFFF, 0x660066, 0xFF8080, 0x0066CC, 0xCCCCFF,
    0x000080, 0xFF00FF, 0xFFFF00, 0x00FFFF, 0x800080, 0x800000, 0x008080, 0x0000FF,
    0x00CCFF, 0xCCFFFF, 0xCCFFCC, 0xFFFF99, 0x99CCFF, 0xFF99CC, 0xCC99FF, 0xFFCC99,
    0x3366FF, 0x33CCCC, 0x99CC00, 0xFFCC00, 0xFF9900, 0xFF6600, 0x666699, 0x969696,
    0x003366, 0x339966, 0x003300, 0x333300, 0x993300, 0x993366, 0x333399, 0x333333,
};

std::optional<std::uint32_t> parse_hex(std::string_view s) {
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 16);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

template <class T>
T number_attr(const xml::Element& e, std::string_view key, T fallback) {
    auto v = e.attr(key);
    if (!v) return fallback;
    T out{};
    auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    return ec == std::errc{} ? out : fallback;
}

double double_attr(const xml::Element& e, std::string_view key, double fallback) {
    auto v = e.attr(key);
    if (!v) return fallback;
    try {
        return std::stod(std::string(*v));
    } catch (const std::exception&) {
        return fallback;
    }
}

bool flag_element(const xml::Element* e) {
    if (!e) return false;
    auto v = e->attr("val");
    return !v || (*v != "0" && *v != "false");
}

Color argb_to_rgba(std::uint32_t argb) { return Color::from_rgba((argb << 8) | (argb >> 24)); }

struct ColorResolver {
    const std::vector<Color>& theme;
    std::vector<std::uint32_t> indexed;  // RGB values

    Color resolve(const xml::Element* c) const {
        if (!c) return Color::unresolved();
        Color base = Color::unresolved();
        if (auto rgb = c->attr("rgb")) {
            auto v = parse_hex(*rgb);
            if (v && rgb->size() == 8) base = argb_to_rgba(*v);
            else if (v && rgb->size() == 6) base = Color::from_rgba((*v << 8) | 0xFF);
        } else if (auto th = c->attr("theme")) {
            const auto idx = number_attr<std::size_t>(*c, "theme", 9999);
            if (idx < theme.size()) base = theme[idx];
        } else if (c->attr("indexed")) {
            const auto idx = number_attr<std::size_t>(*c, "indexed", 9999);
            if (idx < indexed.size()) base = Color::from_rgba((indexed[idx] << 8) | 0xFF);
        }
        if (base.unknown) return base;
        const double tint = double_attr(*c, "tint", 0.0);
        return tint == 0.0 ? base : apply_tint(base, tint);
    }
};

std::string border_key(const xml::Element& border, const ColorResolver& colors) {
    static constexpr std::array<std::pair<std::string_view, std::string_view>, 5> sides = {
        {{"left", "l"}, {"right", "r"}, {"top", "t"}, {"bottom", "b"}, {"diagonal", "d"}}};
    std::string key;
    for (const auto& [element, tag] : sides) {
        const auto* side = border.child(element);
        if (!side) continue;
        const auto style = side->attr_or("style", "");
        if (style.empty() || style == "none") continue;
        if (!key.empty()) key += ';';
        key += std::string(tag) + ":" + style;
        if (const auto* c = side->child("color")) key += color_to_string(colors.resolve(c));
    }
    return key;
}

}  // namespace

Color apply_tint(Color c, double tint) {
    if (c.unknown) return c;
    double r = ((c.rgba >> 24) & 0xFF) / 255.0;
    double g = ((c.rgba >> 16) & 0xFF) / 255.0;
    double b = ((c.rgba >> 8) & 0xFF) / 255.0;
    const std::uint32_t alpha = c.rgba & 0xFF;

    const double mx = std::max({r, g, b});
    const double mn = std::min({r, g, b});
    double h = 0, s = 0, l = (mx + mn) / 2;
    if (mx != mn) {
        const double d = mx - mn;
        s = l > 0.5 ? d / (2 - mx - mn) : d / (mx + mn);
        if (mx == r) h = (g - b) / d + (g < b ? 6 : 0);
        else if (mx == g) h = (b - r) / d + 2;
        else h = (r - g) / d + 4;
        h /= 6;
    }
    l = tint < 0 ? l * (1 + tint) : l * (1 - tint) + tint;

    auto hue = [](double p, double q, double t) {
        if (t < 0) t += 1;
        if (t > 1) t -= 1;
        if (t < 1.0 / 6) return p + (q - p) * 6 * t;
        if (t < 0.5) return q;
        if (t < 2.0 / 3) return p + (q - p) * (2.0 / 3 - t) * 6;
        return p;
    };
    if (s == 0) {
        r = g = b = l;
    } else {
        const double q = l < 0.5 ? l * (1 + s) : l + s - l * s;
        const double p = 2 * l - q;
        r = hue(p, q, h + 1.0 / 3);
        g = hue(p, q, h);
        b = hue(p, q, h - 1.0 / 3);
    }
    auto byte = [](double v) { return static_cast<std::uint32_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255)); };
    return Color::from_rgba((byte(r) << 24) | (byte(g) << 16) | (byte(b) << 8) | alpha);
}

std::string builtin_number_format(std::uint32_t id) {
    static const std::map<std::uint32_t, std::string> formats = {
        {0, "General"},     {1, "0"},          {2, "0.00"},        {3, "#,##0"},
        {4, "#,##0.00"},    {9, "0%"},         {10, "0.00%"},      {11, "0.00E+00"},
        {12, "# ?/?"},      {13, "# ?\?/??"},  {14, "mm-dd-yy"},   {15, "d-mmm-yy"},
        {16, "d-mmm"},      {17, "mmm-yy"},    {18, "h:mm AM/PM"}, {19, "h:mm:ss AM/PM"},
        {20, "h:mm"},       {21, "h:mm:ss"},   {22, "m/d/yy h:mm"}, {37, "#,##0 ;(#,##0)"},
        {38, "#,##0 ;[Red](#,##0)"}, {39, "#,##0.00;(#,##0.00)"}, {40, "#,##0.00;[Red](#,##0.00)"},
        {45, "mm:ss"},      {46, "[h]:mm:ss"}, {47, "mmss.0"},     {48, "##0.0E+0"},
        {49, "@"},
    };
    auto it = formats.find(id);
    return it != formats.end() ? it->second : "builtin:" + std::to_string(id);
}

std::vector<Color> read_theme_palette(const xml::Element* theme) {
    std::vector<Color> palette;
    if (!theme) return palette;
    const xml::Element* scheme = nullptr;
    theme->for_each("clrScheme", [&](const xml::Element& e) {
        if (!scheme) scheme = &e;
    });
    if (!scheme) return palette;

    auto color_of = [&](std::string_view slot) {
        const auto* s = scheme->child(slot);
        if (!s) return Color::unresolved();
        if (const auto* srgb = s->child("srgbClr")) {
            if (auto v = parse_hex(srgb->attr_or("val", ""))) return Color::from_rgba((*v << 8) | 0xFF);
        }
        if (const auto* sys = s->child("sysClr")) {
            if (auto v = parse_hex(sys->attr_or("lastClr", ""))) return Color::from_rgba((*v << 8) | 0xFF);
        }
        return Color::unresolved();
    };
    // theme indices 0..3 swap light/dark relative to the scheme order
    for (std::string_view slot : {"lt1", "dk1", "lt2", "dk2", "accent1", "accent2", "accent3", "accent4",
                                  "accent5", "accent6", "hlink", "folHlink"}) {
        palette.push_back(color_of(slot));
    }
    return palette;
}

StyleTable read_styles(const xml::Element* styles, const std::vector<Color>& theme) {
    StyleTable table;
    if (!styles) {
        table.signatures.push_back(StyleSignature{});
        table.xf_to_signature.push_back(0);
        return table;
    }

    ColorResolver colors{theme, {kIndexedPalette.begin(), kIndexedPalette.end()}};
    if (const auto* palette = styles->child("colors")) {
        if (const auto* idx = palette->child("indexedColors")) {
            std::vector<std::uint32_t> custom;
            for (const auto* rgb : idx->children_named("rgbColor")) {
                custom.push_back(parse_hex(rgb->attr_or("rgb", "FF000000")).value_or(0) & 0xFFFFFF);
            }
            if (!custom.empty()) colors.indexed = std::move(custom);
        }
    }

    std::map<std::uint32_t, std::string> number_formats;
    if (const auto* nf = styles->child("numFmts")) {
        for (const auto* f : nf->children_named("numFmt")) {
            number_formats[number_attr<std::uint32_t>(*f, "numFmtId", 0)] = f->attr_or("formatCode", "");
        }
    }

    std::vector<FontKey> fonts;
    if (const auto* fs = styles->child("fonts")) {
        for (const auto* f : fs->children_named("font")) {
            FontKey k;
            if (const auto* n = f->child("name")) k.name = n->attr_or("val", "");
            if (const auto* sz = f->child("sz")) k.size = double_attr(*sz, "val", 11.0);
            k.bold = flag_element(f->child("b"));
            k.italic = flag_element(f->child("i"));
            fonts.push_back(std::move(k));
        }
    }

    std::vector<std::optional<Color>> fills;
    if (const auto* fs = styles->child("fills")) {
        for (const auto* f : fs->children_named("fill")) {
            std::optional<Color> fill;
            if (const auto* p = f->child("patternFill")) {
                const auto type = p->attr_or("patternType", "none");
                if (type != "none") fill = colors.resolve(p->child("fgColor"));
            } else if (f->child("gradientFill")) {
                fill = Color::unresolved();
            }
            fills.push_back(fill);
        }
    }

    std::vector<std::string> borders;
    if (const auto* bs = styles->child("borders")) {
        for (const auto* b : bs->children_named("border")) borders.push_back(border_key(*b, colors));
    }

    auto signature_index = [&](const StyleSignature& sig) {
        auto it = std::find(table.signatures.begin(), table.signatures.end(), sig);
        if (it != table.signatures.end()) return static_cast<std::uint32_t>(it - table.signatures.begin());
        table.signatures.push_back(sig);
        return static_cast<std::uint32_t>(table.signatures.size() - 1);
    };

    if (const auto* xfs = styles->child("cellXfs")) {
        for (const auto* xf : xfs->children_named("xf")) {
            StyleSignature sig;
            const auto font_id = number_attr<std::size_t>(*xf, "fontId", 0);
            const auto fill_id = number_attr<std::size_t>(*xf, "fillId", 0);
            const auto border_id = number_attr<std::size_t>(*xf, "borderId", 0);
            const auto fmt_id = number_attr<std::uint32_t>(*xf, "numFmtId", 0);
            if (font_id < fonts.size()) sig.font = fonts[font_id];
            if (fill_id < fills.size()) sig.fill = fills[fill_id];
            if (border_id < borders.size()) sig.border_key = borders[border_id];
            auto custom = number_formats.find(fmt_id);
            sig.number_format = custom != number_formats.end() ? custom->second : builtin_number_format(fmt_id);
            table.xf_to_signature.push_back(signature_index(sig));
        }
    }
    if (table.signatures.empty()) {
        StyleSignature sig;
        if (!fonts.empty()) sig.font = fonts.front();
        table.signatures.push_back(sig);
        table.xf_to_signature.push_back(0);
    }
    return table;
}

}  // namespace sheetcheck::ooxml
