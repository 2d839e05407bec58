#include <algorithm>
#include <set>

#include "sheetcheck/analyzers.hpp"

namespace sheetcheck {

AnalysisContext::AnalysisContext(const Workbook& workbook, const DependencyGraph& graph,
                                 const CellClassMap& classes, const AnalyzerConfig& config)
    : workbook_(workbook), graph_(graph), classes_(classes), config_(config) {
    for (std::uint32_t s = 0; s < workbook.sheets.size(); ++s) {
        const Sheet& sheet = workbook.sheets[s];
        int text_cells = 0;
        bool disqualified = false;
        for (const auto& [pos, cell] : sheet.cells) {
            if (cell.is_formula() || graph.has_inbound(cell.address)) {
                disqualified = true;
                break;
            }
            if (std::holds_alternative<std::string>(cell.content)) ++text_cells;
        }
        if (!disqualified && text_cells >= config.doc_sheet_min_text_cells) doc_sheets_.push_back(s);

        // flood fill over Input cells, 4-neighbourhood
        std::set<GridPos> inputs;
        for (const auto& [pos, cell] : sheet.cells)
            if (class_of(cell.address) == CellClass::input) inputs.insert(pos);
        std::set<GridPos> seen;
        for (const GridPos& start : inputs) {
            if (seen.count(start)) continue;
            std::vector<GridPos> todo{start};
            std::vector<CellAddress> block;
            seen.insert(start);
            while (!todo.empty()) {
                GridPos p = todo.back();
                todo.pop_back();
                block.push_back({s, p.column, p.row});
                const GridPos around[4] = {{p.row - 1, p.column}, {p.row + 1, p.column},
                                           {p.row, p.column - 1}, {p.row, p.column + 1}};
                for (const GridPos& n : around) {
                    if (inputs.count(n) && seen.insert(n).second) todo.push_back(n);
                }
            }
            std::sort(block.begin(), block.end());
            input_blocks_.push_back(std::move(block));
        }
    }
}

CellClass AnalysisContext::class_of(const CellAddress& a) const {
    auto it = classes_.find(a);
    return it == classes_.end() ? CellClass::empty : it->second;
}

std::vector<CellAddress> AnalysisContext::cells_of(CellClass c) const {
    std::vector<CellAddress> out;
    for (const auto& [a, cls] : classes_)
        if (cls == c) out.push_back(a);
    return out;
}

std::vector<CellAddress> AnalysisContext::cells_of(CellClass c, std::uint32_t sheet) const {
    std::vector<CellAddress> out;
    for (auto it = classes_.lower_bound(CellAddress{sheet, 0, 0}); it != classes_.end() && it->first.sheet_index == sheet; ++it)
        if (it->second == c) out.push_back(it->first);
    return out;
}

}  // namespace sheetcheck
