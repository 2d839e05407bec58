#pragma once

// Reference implementations that work from raw text rather than the parser.

#include <algorithm>
#include <optional>
#include <regex>
#include <set>

#include "sheetcheck/dataflow.hpp"
#include "sheetcheck/workbook.hpp"

namespace testsupport {

// Cells referenced by any formula, found by scanning formula text with a regex.
// Understands the subset produced by random_workbook(): A1 refs, ranges,
// sheet prefixes and workbook-scoped names with a single area.
inline std::set<sheetcheck::CellAddress> regex_referenced(const sheetcheck::Workbook& wb) {
    using namespace sheetcheck;
    static const std::regex token(
        R"(('(?:[^']|'')+'|[A-Za-z]+)!|(\$?[A-Z]{1,3}\$?[0-9]+)(?::(\$?[A-Z]{1,3}\$?[0-9]+))?|([A-Za-z_][A-Za-z0-9_.]*))");
    auto strip = [](std::string s) {
        s.erase(std::remove(s.begin(), s.end(), '$'), s.end());
        return s;
    };
    std::set<CellAddress> out;
    auto mark = [&](std::uint32_t sheet, GridPos a, GridPos b) {
        const Rect r{std::min(a.row, b.row), std::min(a.column, b.column), std::max(a.row, b.row), std::max(a.column, b.column)};
        for (const auto& [pos, cell] : wb.sheets[sheet].cells)
            if (r.contains(pos)) out.insert(cell.address);
    };
    for (const auto& sheet : wb.sheets) {
        for (const auto& [pos, cell] : sheet.cells) {
            const auto* f = cell.formula();
            if (!f) continue;
            std::optional<std::uint32_t> pending;
            for (auto it = std::sregex_iterator(f->text.begin(), f->text.end(), token); it != std::sregex_iterator(); ++it) {
                const auto& m = *it;
                if (m[1].matched) {
                    std::string name = m[1].str();
                    if (name.front() == '\'') {
                        name = name.substr(1, name.size() - 2);
                        for (std::size_t p = name.find("''"); p != std::string::npos; p = name.find("''", p + 1)) name.erase(p, 1);
                    }
                    pending = wb.sheet_index(name);
                } else if (m[2].matched) {
                    const auto a = parse_a1(strip(m[2].str()));
                    const auto b = m[3].matched ? parse_a1(strip(m[3].str())) : a;
                    mark(pending.value_or(cell.address.sheet_index), *a, *b);
                    pending.reset();
                } else {
                    for (const auto& dn : wb.defined_names)
                        if (dn.name == m[4].str())
                            for (const auto& area : dn.areas)
                                mark(area.sheet_index, {area.range.min_row, area.range.min_column},
                                     {area.range.max_row, area.range.max_column});
                    pending.reset();
                }
            }
        }
    }
    return out;
}

inline sheetcheck::CellClassMap regex_classify(const sheetcheck::Workbook& wb) {
    using namespace sheetcheck;
    const auto referenced = regex_referenced(wb);
    CellClassMap out;
    for (const auto& sheet : wb.sheets) {
        for (const auto& [pos, cell] : sheet.cells) {
            const bool in = referenced.count(cell.address) != 0;
            if (cell.formula()) out[cell.address] = in ? CellClass::calculation : CellClass::output;
            else if (!cell.is_empty()) out[cell.address] = in ? CellClass::input : CellClass::label;
            else out[cell.address] = CellClass::empty;
        }
    }
    return out;
}

}  // namespace testsupport
