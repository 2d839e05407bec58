#include "sheetcheck/workbook.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sheetcheck/formula.hpp"
#include "util/strings.hpp"

namespace sheetcheck {

void Rect::extend(GridPos p) {
    min_row = std::min(min_row, p.row);
    max_row = std::max(max_row, p.row);
    min_column = std::min(min_column, p.column);
    max_column = std::max(max_column, p.column);
}

std::string column_name(std::uint32_t column) {
    std::string out;
    while (column > 0) {
        const std::uint32_t rem = (column - 1) % 26;
        out.insert(out.begin(), char('A' + rem));
        column = (column - 1) / 26;
    }
    return out;
}

std::optional<std::uint32_t> column_index(std::string_view letters) {
    if (letters.empty() || letters.size() > 3) return std::nullopt;
    std::uint32_t col = 0;
    for (char c : letters) {
        if (!std::isalpha(static_cast<unsigned char>(c))) return std::nullopt;
        col = col * 26 + std::uint32_t(std::toupper(static_cast<unsigned char>(c)) - 'A' + 1);
    }
    if (col > kMaxColumns) return std::nullopt;
    return col;
}

std::string a1(GridPos p) { return column_name(p.column) + std::to_string(p.row); }

std::optional<GridPos> parse_a1(std::string_view text) {
    std::size_t i = 0;
    if (i < text.size() && text[i] == '$') ++i;
    const std::size_t letters_begin = i;
    while (i < text.size() && std::isalpha(static_cast<unsigned char>(text[i]))) ++i;
    auto col = column_index(text.substr(letters_begin, i - letters_begin));
    if (!col) return std::nullopt;
    if (i < text.size() && text[i] == '$') ++i;
    if (i >= text.size()) return std::nullopt;
    std::uint32_t row = 0;
    auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + text.size(), row);
    if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
    if (row < 1 || row > kMaxRows) return std::nullopt;
    return GridPos{row, *col};
}

std::string rect_a1(const Rect& r) {
    if (r.min_row == r.max_row && r.min_column == r.max_column) return a1({r.min_row, r.min_column});
    return a1({r.min_row, r.min_column}) + ":" + a1({r.max_row, r.max_column});
}

std::optional<Rect> parse_rect_a1(std::string_view text) {
    const auto colon = text.find(':');
    auto first = parse_a1(text.substr(0, colon));
    if (!first) return std::nullopt;
    Rect r{first->row, first->column, first->row, first->column};
    if (colon != std::string_view::npos) {
        auto second = parse_a1(text.substr(colon + 1));
        if (!second) return std::nullopt;
        r.extend(*second);
    }
    return r;
}

std::string color_to_string(const Color& c) {
    if (c.unknown) return "unknown";
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%08X", c.rgba);
    return buf;
}

std::optional<Color> color_from_string(std::string_view text) {
    if (util::iequals(text, "unknown")) return Color::unresolved();
    if (!text.empty() && text.front() == '#') text.remove_prefix(1);
    if (text.size() != 6 && text.size() != 8) return std::nullopt;
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v, 16);
    if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
    if (text.size() == 6) v = (v << 8) | 0xFF;
    return Color::from_rgba(v);
}

std::string_view to_string(ValidationKind k) {
    switch (k) {
        case ValidationKind::list: return "list";
        case ValidationKind::whole: return "whole";
        case ValidationKind::decimal: return "decimal";
        case ValidationKind::custom: return "custom";
    }
    return "custom";
}

std::optional<ValidationKind> validation_kind_from_string(std::string_view text) {
    if (text == "list") return ValidationKind::list;
    if (text == "whole") return ValidationKind::whole;
    if (text == "decimal") return ValidationKind::decimal;
    if (text == "custom") return ValidationKind::custom;
    return std::nullopt;
}

const Cell* Sheet::find(GridPos p) const {
    auto it = cells.find(p);
    return it == cells.end() ? nullptr : &it->second;
}

std::optional<std::uint32_t> Workbook::sheet_index(std::string_view name) const {
    for (std::size_t i = 0; i < sheets.size(); ++i) {
        if (util::iequals(sheets[i].name, name)) return static_cast<std::uint32_t>(i);
    }
    return std::nullopt;
}

const Cell* Workbook::find(const CellAddress& a) const {
    if (a.sheet_index >= sheets.size()) return nullptr;
    return sheets[a.sheet_index].find(a.pos());
}

const DefinedName* Workbook::find_name(std::string_view name,
                                       std::optional<std::uint32_t> from_sheet) const {
    const DefinedName* global = nullptr;
    for (const auto& dn : defined_names) {
        if (!util::iequals(dn.name, name)) continue;
        if (dn.scope_sheet) {
            if (from_sheet && *dn.scope_sheet == *from_sheet) return &dn;
        } else if (!global) {
            global = &dn;
        }
    }
    return global;
}

const StyleSignature& Workbook::style(std::uint32_t id) const {
    static const StyleSignature fallback{};
    if (id < style_table.size()) return style_table[id];
    return style_table.empty() ? fallback : style_table.front();
}

std::size_t Workbook::cell_count() const {
    std::size_t n = 0;
    for (const auto& s : sheets) n += s.cells.size();
    return n;
}

std::string Workbook::describe(const CellAddress& a) const {
    std::string sheet = a.sheet_index < sheets.size() ? sheets[a.sheet_index].name : "?";
    return formula::quote_sheet(sheet) + "!" + sheetcheck::a1(a.pos());
}

bool operator==(const Workbook& a, const Workbook& b) {
    return a.sheets == b.sheets && a.defined_names == b.defined_names &&
           a.style_table == b.style_table;
}

std::optional<Rect> used_range(const Sheet& sheet) {
    std::optional<Rect> r;
    for (const auto& [pos, cell] : sheet.cells) {
        if (cell.is_empty()) continue;
        if (!r) r = Rect{pos.row, pos.column, pos.row, pos.column};
        else r->extend(pos);
    }
    return r;
}

namespace {
std::string load_error_message(LoadError::Code code, const std::string& detail, const std::string& sheet,
                               std::size_t line) {
    std::string msg(to_string(code));
    if (!sheet.empty()) msg += " in sheet '" + sheet + "'";
    if (line) msg += " at line " + std::to_string(line);
    if (!detail.empty()) msg += ": " + detail;
    return msg;
}
}  // namespace

LoadError::LoadError(Code code, std::string detail, std::string sheet, std::size_t line)
    : std::runtime_error(load_error_message(code, detail, sheet, line)),
      code_(code),
      detail_(std::move(detail)),
      sheet_(std::move(sheet)),
      line_(line) {}

std::string_view to_string(LoadError::Code code) {
    switch (code) {
        case LoadError::Code::io: return "IoError";
        case LoadError::Code::not_a_zip_archive: return "NotAZipArchive";
        case LoadError::Code::missing_workbook_part: return "MissingWorkbookPart";
        case LoadError::Code::malformed_sheet_xml: return "MalformedSheetXml";
        case LoadError::Code::unsupported_feature: return "UnsupportedFeature";
        case LoadError::Code::fixture_syntax: return "FixtureSyntax";
        case LoadError::Code::fixture_invariant_violation: return "FixtureInvariantViolation";
    }
    return "LoadError";
}

Workbook load_workbook(const std::string& path) {
    const auto ext = util::to_lower(std::filesystem::path(path).extension().string());
    if (ext == ".json") return load_fixture(path);
    return load_xlsx(path);
}

void validate_workbook(const Workbook& wb) {
    auto fail = [](std::string detail) {
        throw LoadError(LoadError::Code::fixture_invariant_violation, std::move(detail));
    };
    if (wb.style_table.empty()) fail("style table is empty");
    for (std::size_t i = 0; i < wb.sheets.size(); ++i) {
        const Sheet& s = wb.sheets[i];
        if (s.name.empty()) fail("sheet " + std::to_string(i) + " has an empty name");
        for (std::size_t j = 0; j < i; ++j) {
            if (util::iequals(wb.sheets[j].name, s.name)) fail("duplicate sheet name '" + s.name + "'");
        }
        for (const auto& [pos, cell] : s.cells) {
            const std::string where = s.name + "!" + a1(pos);
            if (cell.address.sheet_index != i || cell.address.pos() != pos)
                fail(where + ": address does not match its position");
            if (pos.row < 1 || pos.column < 1 || pos.row > kMaxRows || pos.column > kMaxColumns)
                fail(where + ": address outside the grid");
            if (!s.used_bounds || !s.used_bounds->contains(pos)) fail(where + ": outside used bounds");
            if (cell.style_id >= wb.style_table.size()) fail(where + ": unknown style id");
            if (const auto* f = cell.formula()) {
                if (f->text.size() < 2 || f->text.front() != '=')
                    fail(where + ": formula text must start with '=' and be non-empty");
            }
        }
    }
    for (std::size_t i = 0; i < wb.defined_names.size(); ++i) {
        const auto& dn = wb.defined_names[i];
        if (dn.name.empty()) fail("defined name with empty identifier");
        if (dn.scope_sheet && *dn.scope_sheet >= wb.sheets.size())
            fail("defined name '" + dn.name + "' scoped to a missing sheet");
        for (std::size_t j = 0; j < i; ++j) {
            const auto& other = wb.defined_names[j];
            if (other.scope_sheet == dn.scope_sheet && util::iequals(other.name, dn.name))
                fail("duplicate defined name '" + dn.name + "'");
        }
        for (const auto& area : dn.areas) {
            if (area.sheet_index >= wb.sheets.size())
                fail("defined name '" + dn.name + "' refers to a missing sheet");
        }
    }
}

}  // namespace sheetcheck
