#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace sheetcheck {

inline constexpr std::uint32_t kMaxRows = 1048576;
inline constexpr std::uint32_t kMaxColumns = 16384;

/// Row/column position inside one sheet, 1-based. Ordered row-major.
struct GridPos {
    std::uint32_t row = 1;
    std::uint32_t column = 1;

    auto operator<=>(const GridPos&) const = default;
};

/// Fully qualified cell position. Ordered by sheet, then row, then column.
struct CellAddress {
    std::uint32_t sheet_index = 0;
    std::uint32_t column = 1;
    std::uint32_t row = 1;

    GridPos pos() const { return {row, column}; }

    friend bool operator==(const CellAddress&, const CellAddress&) = default;
    friend std::strong_ordering operator<=>(const CellAddress& a, const CellAddress& b) {
        if (auto c = a.sheet_index <=> b.sheet_index; c != 0) return c;
        if (auto c = a.row <=> b.row; c != 0) return c;
        return a.column <=> b.column;
    }
};

/// Inclusive rectangle of cells.
struct Rect {
    std::uint32_t min_row = 1;
    std::uint32_t min_column = 1;
    std::uint32_t max_row = 1;
    std::uint32_t max_column = 1;

    bool contains(GridPos p) const {
        return p.row >= min_row && p.row <= max_row && p.column >= min_column &&
               p.column <= max_column;
    }
    bool intersects(const Rect& o) const {
        return min_row <= o.max_row && o.min_row <= max_row && min_column <= o.max_column &&
               o.min_column <= max_column;
    }
    std::uint64_t area() const {
        return std::uint64_t(max_row - min_row + 1) * std::uint64_t(max_column - min_column + 1);
    }
    void extend(GridPos p);

    friend bool operator==(const Rect&, const Rect&) = default;
};

/// A1 helpers. Columns are 1-based ("A" == 1).
std::string column_name(std::uint32_t column);
std::optional<std::uint32_t> column_index(std::string_view letters);
std::string a1(GridPos p);
std::optional<GridPos> parse_a1(std::string_view text);
std::string rect_a1(const Rect& r);
std::optional<Rect> parse_rect_a1(std::string_view text);

struct CellError {
    std::string code;  // "#REF!", "#N/A", ...
    friend bool operator==(const CellError&, const CellError&) = default;
};

struct Formula {
    std::string text;  // raw text, always starts with '='
    bool is_array = false;
    friend bool operator==(const Formula&, const Formula&) = default;
};

/// Empty, number, text, boolean, error literal, or formula.
using CellContent = std::variant<std::monostate, double, std::string, bool, CellError, Formula>;

struct Cell {
    CellAddress address;
    CellContent content;
    std::uint32_t style_id = 0;
    std::optional<std::string> comment;

    bool is_empty() const { return std::holds_alternative<std::monostate>(content); }
    bool is_formula() const { return std::holds_alternative<Formula>(content); }
    const Formula* formula() const { return std::get_if<Formula>(&content); }

    friend bool operator==(const Cell&, const Cell&) = default;
};

/// RGBA color after theme/indexed resolution. `unknown` never equals a concrete color.
struct Color {
    std::uint32_t rgba = 0x000000FF;
    bool unknown = false;

    static Color from_rgba(std::uint32_t v) { return {v, false}; }
    static Color unresolved() { return {0, true}; }

    friend bool operator==(const Color& a, const Color& b) {
        if (a.unknown || b.unknown) return a.unknown == b.unknown;
        return a.rgba == b.rgba;
    }
};

std::string color_to_string(const Color& c);           // "#RRGGBBAA" or "unknown"
std::optional<Color> color_from_string(std::string_view text);

struct FontKey {
    std::string name;
    double size = 11.0;
    bool bold = false;
    bool italic = false;
    friend bool operator==(const FontKey&, const FontKey&) = default;
};

struct StyleSignature {
    std::optional<Color> fill;
    FontKey font;
    std::string number_format = "General";
    std::string border_key;  // canonical descriptor, empty for no border
    friend bool operator==(const StyleSignature&, const StyleSignature&) = default;
};

struct PaneState {
    enum class Kind { none, frozen, split };
    Kind kind = Kind::none;
    std::uint32_t rows = 0;
    std::uint32_t columns = 0;
    friend bool operator==(const PaneState&, const PaneState&) = default;
};

enum class ValidationKind { list, whole, decimal, custom };
std::string_view to_string(ValidationKind k);
std::optional<ValidationKind> validation_kind_from_string(std::string_view text);

struct Validation {
    Rect range;
    ValidationKind kind = ValidationKind::custom;
    std::optional<std::string> prompt;
    friend bool operator==(const Validation&, const Validation&) = default;
};

struct Sheet {
    std::string name;
    std::map<GridPos, Cell> cells;  // sparse; only addressed cells
    PaneState pane;
    std::vector<Validation> validations;
    std::uint32_t form_controls = 0;  // legacy form controls found on the sheet
    std::optional<Rect> used_bounds;  // bounding box of every stored cell

    const Cell* find(GridPos p) const;

    friend bool operator==(const Sheet&, const Sheet&) = default;
};

/// One area of a defined name target.
struct SheetRange {
    std::uint32_t sheet_index = 0;
    Rect range;
    friend bool operator==(const SheetRange&, const SheetRange&) = default;
};

struct DefinedName {
    std::string name;
    std::string target;                       // formula text without the leading '='
    std::optional<std::uint32_t> scope_sheet;  // nullopt: workbook scope
    std::vector<SheetRange> areas;            // empty for constants and expressions
    friend bool operator==(const DefinedName&, const DefinedName&) = default;
};

struct Workbook {
    std::vector<Sheet> sheets;
    std::vector<DefinedName> defined_names;
    std::vector<StyleSignature> style_table;  // never empty; entry 0 is the default style
    std::string source_path;

    std::optional<std::uint32_t> sheet_index(std::string_view name) const;  // case-insensitive
    const Cell* find(const CellAddress& a) const;
    /// Local scope of `from_sheet` first, then workbook scope. Case-insensitive.
    const DefinedName* find_name(std::string_view name, std::optional<std::uint32_t> from_sheet) const;
    const StyleSignature& style(std::uint32_t id) const;
    std::size_t cell_count() const;
    std::string describe(const CellAddress& a) const;  // "Sheet1!B2"
};

/// Content equality; `source_path` is where it was loaded from and does not take part.
bool operator==(const Workbook& a, const Workbook& b);

/// Smallest rectangle containing all non-empty cells; nullopt for an empty sheet.
std::optional<Rect> used_range(const Sheet& sheet);

class LoadError : public std::runtime_error {
public:
    enum class Code {
        io,
        not_a_zip_archive,
        missing_workbook_part,
        malformed_sheet_xml,
        unsupported_feature,
        fixture_syntax,
        fixture_invariant_violation,
    };

    LoadError(Code code, std::string detail, std::string sheet = {}, std::size_t line = 0);

    Code code() const { return code_; }
    const std::string& detail() const { return detail_; }
    const std::string& sheet() const { return sheet_; }
    std::size_t line() const { return line_; }

private:
    Code code_;
    std::string detail_;
    std::string sheet_;
    std::size_t line_;
};

std::string_view to_string(LoadError::Code code);

Workbook load_xlsx(const std::string& path);
Workbook load_fixture(const std::string& path);
Workbook load_fixture_text(std::string_view json_text, std::string source_path = {});
std::string dump_fixture(const Workbook& workbook);

/// Dispatch on extension: .json is a fixture, anything else is read as OOXML.
Workbook load_workbook(const std::string& path);

/// Check the model invariants; throws LoadError(fixture_invariant_violation).
void validate_workbook(const Workbook& workbook);

}  // namespace sheetcheck
