#include <algorithm>

#include "sheetcheck/dataflow.hpp"
#include "util/strings.hpp"
#include "workbook/refs.hpp"

namespace sheetcheck {

std::string_view to_string(GraphDiagnostic::Kind k) {
    switch (k) {
        case GraphDiagnostic::Kind::parse_failure: return "parse_failure";
        case GraphDiagnostic::Kind::dangling_reference: return "dangling_reference";
        case GraphDiagnostic::Kind::unresolved_name: return "unresolved_name";
        case GraphDiagnostic::Kind::circular_dependency: return "circular_dependency";
    }
    return "diagnostic";
}

namespace {

bool edge_less(const Edge& a, const Edge& b) {
    if (a.from != b.from) return a.from < b.from;
    return a.to < b.to;
}

template <class F>
void for_each_cell_in(const Sheet& sheet, const Rect& r, F&& f) {
    for (auto it = sheet.cells.lower_bound(GridPos{r.min_row, r.min_column});
         it != sheet.cells.end() && it->first.row <= r.max_row; ++it) {
        if (it->first.column >= r.min_column && it->first.column <= r.max_column) f(it->second);
    }
}

class GraphBuilder {
public:
    GraphBuilder(const Workbook& wb, DependencyGraph& g) : wb_(wb), g_(g) {}

    void add_formula(const CellAddress& from, const formula::Node& ast) {
        for (const auto& ref : formula::references(ast)) {
            if (const auto* c = std::get_if<formula::CellRef>(&ref)) {
                auto sheet = target_sheet(from, c->sheet);
                if (!sheet) continue;
                add_area(from, *sheet, area_of(*c, *c));
            } else if (const auto* r = std::get_if<formula::RangeRef>(&ref)) {
                auto sheet = target_sheet(from, r->start.sheet);
                if (!sheet) continue;
                add_area(from, *sheet, area_of(r->start, r->end));
            } else if (const auto* n = std::get_if<formula::NameRef>(&ref)) {
                add_name(from, n->identifier);
            }
        }
    }

private:
    std::optional<std::uint32_t> target_sheet(const CellAddress& from, const std::optional<std::string>& sheet) {
        if (!sheet) return from.sheet_index;
        if (!sheet->empty() && sheet->front() == '[') {
            diag(GraphDiagnostic::Kind::dangling_reference, from, "external workbook reference " + *sheet);
            return std::nullopt;
        }
        auto idx = wb_.sheet_index(*sheet);
        if (!idx) diag(GraphDiagnostic::Kind::dangling_reference, from, "unknown sheet '" + *sheet + "'");
        return idx;
    }

    void add_name(const CellAddress& from, const std::string& identifier) {
        std::optional<std::uint32_t> scope = from.sheet_index;
        std::string name = identifier;
        if (const auto bang = identifier.rfind('!'); bang != std::string::npos) {
            std::string sheet = identifier.substr(0, bang);
            if (sheet.size() >= 2 && sheet.front() == '\'' && sheet.back() == '\'') sheet = sheet.substr(1, sheet.size() - 2);
            scope = wb_.sheet_index(sheet);
            name = identifier.substr(bang + 1);
            if (!scope) {
                diag(GraphDiagnostic::Kind::dangling_reference, from, "unknown sheet in name " + identifier);
                return;
            }
        }
        const DefinedName* dn = wb_.find_name(name, scope);
        if (!dn) {
            diag(GraphDiagnostic::Kind::unresolved_name, from, "undefined name " + identifier);
            return;
        }
        for (const auto& area : dn->areas) add_area(from, area.sheet_index, area.range);
    }

    void add_area(const CellAddress& from, std::uint32_t sheet_index, const Rect& r) {
        const Sheet& sheet = wb_.sheets[sheet_index];
        if (r.area() > g_.expansion_limit) {
            g_.region_edges.push_back({from, {sheet_index, r}});
            for_each_cell_in(sheet, r, [&](const Cell& c) { g_.referenced.insert(c.address); });
            return;
        }
        for_each_cell_in(sheet, r, [&](const Cell& c) {
            g_.edges.push_back({from, c.address});
            g_.referenced.insert(c.address);
        });
    }

    void diag(GraphDiagnostic::Kind k, const CellAddress& at, std::string detail) {
        g_.diagnostics.push_back({k, at, std::move(detail)});
    }

    const Workbook& wb_;
    DependencyGraph& g_;
};

}  // namespace

std::vector<CellAddress> DependencyGraph::successors(const CellAddress& from) const {
    std::vector<CellAddress> out;
    auto it = std::lower_bound(edges.begin(), edges.end(), Edge{from, CellAddress{0, 0, 0}}, edge_less);
    for (; it != edges.end() && it->from == from; ++it) out.push_back(it->to);
    return out;
}

DependencyGraph build_graph(const Workbook& workbook, std::uint64_t expansion_limit) {
    DependencyGraph g;
    g.expansion_limit = expansion_limit;
    GraphBuilder builder(workbook, g);
    for (const auto& sheet : workbook.sheets) {
        for (const auto& [pos, cell] : sheet.cells) {
            g.nodes.push_back(cell.address);
            const auto* f = cell.formula();
            if (!f) continue;
            try {
                auto ast = formula::parse(f->text);
                builder.add_formula(cell.address, ast);
                g.formulas.emplace(cell.address, std::move(ast));
            } catch (const formula::ParseError& e) {
                g.diagnostics.push_back({GraphDiagnostic::Kind::parse_failure, cell.address, e.what()});
            }
        }
    }
    std::sort(g.edges.begin(), g.edges.end(), edge_less);
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    return g;
}

}  // namespace sheetcheck
