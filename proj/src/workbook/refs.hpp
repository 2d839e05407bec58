#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sheetcheck/formula.hpp"
#include "sheetcheck/workbook.hpp"

namespace sheetcheck {

/// Normalized rectangle spanned by two endpoints; whole rows/columns extend to the grid edge.
inline Rect area_of(const formula::CellRef& a, const formula::CellRef& b) {
    auto lo = [](std::uint32_t v) { return v ? v : 1u; };
    const std::uint32_t r1 = lo(a.row), r2 = b.row ? b.row : (a.row ? a.row : kMaxRows);
    const std::uint32_t c1 = lo(a.column), c2 = b.column ? b.column : (a.column ? a.column : kMaxColumns);
    Rect r{r1, c1, r1, c1};
    r.extend({r2, c2});
    if (a.row == 0 || b.row == 0) r.min_row = 1, r.max_row = kMaxRows;
    if (a.column == 0 || b.column == 0) r.min_column = 1, r.max_column = kMaxColumns;
    return r;
}

/// Areas of a defined-name target that is a reference or a union of references.
/// Empty for constants, expressions and targets on unknown or external sheets.
std::vector<SheetRange> resolve_name_target(const Workbook& wb, const std::string& target,
                                            std::optional<std::uint32_t> scope);

}  // namespace sheetcheck
