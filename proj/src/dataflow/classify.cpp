#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "sheetcheck/dataflow.hpp"

namespace sheetcheck {

std::string_view to_string(CellClass c) {
    switch (c) {
        case CellClass::input: return "Input";
        case CellClass::calculation: return "Calculation";
        case CellClass::output: return "Output";
        case CellClass::label: return "Label";
        case CellClass::empty: return "Empty";
    }
    return "?";
}

namespace {

// Formula-to-formula adjacency, including formula cells inside oversized regions.
std::map<CellAddress, std::vector<CellAddress>> formula_adjacency(const DependencyGraph& g) {
    std::map<CellAddress, std::vector<CellAddress>> adj;
    for (const auto& [addr, ast] : g.formulas) adj[addr];
    for (const auto& e : g.edges) {
        if (g.formulas.count(e.to)) adj[e.from].push_back(e.to);
    }
    for (const auto& re : g.region_edges) {
        for (auto it = g.formulas.lower_bound(CellAddress{re.region.sheet_index, 0, 0});
             it != g.formulas.end() && it->first.sheet_index == re.region.sheet_index; ++it) {
            if (re.region.range.contains(it->first.pos())) adj[re.from].push_back(it->first);
        }
    }
    return adj;
}

}  // namespace

std::vector<std::vector<CellAddress>> find_cycles(const DependencyGraph& graph) {
    const auto adj = formula_adjacency(graph);

    // iterative Tarjan
    std::map<CellAddress, std::size_t> index, low;
    std::map<CellAddress, bool> on_stack;
    std::vector<CellAddress> stack;
    std::vector<std::vector<CellAddress>> cycles;
    std::size_t counter = 0;

    struct Frame {
        CellAddress node;
        std::size_t next_child;
    };

    for (const auto& [root, unused] : adj) {
        if (index.count(root)) continue;
        std::vector<Frame> call{{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            Frame& f = call.back();
            const auto& children = adj.at(f.node);
            if (f.next_child < children.size()) {
                const CellAddress child = children[f.next_child++];
                if (!index.count(child)) {
                    index[child] = low[child] = counter++;
                    stack.push_back(child);
                    on_stack[child] = true;
                    call.push_back({child, 0});
                } else if (on_stack[child]) {
                    low[f.node] = std::min(low[f.node], index[child]);
                }
                continue;
            }
            const CellAddress node = f.node;
            call.pop_back();
            if (!call.empty()) low[call.back().node] = std::min(low[call.back().node], low[node]);
            if (low[node] != index[node]) continue;
            std::vector<CellAddress> component;
            while (true) {
                CellAddress top = stack.back();
                stack.pop_back();
                on_stack[top] = false;
                component.push_back(top);
                if (top == node) break;
            }
            const auto& own = adj.at(node);
            const bool self_loop = std::find(own.begin(), own.end(), node) != own.end();
            if (component.size() > 1 || self_loop) {
                std::sort(component.begin(), component.end());
                cycles.push_back(std::move(component));
            }
        }
    }
    std::sort(cycles.begin(), cycles.end());
    return cycles;
}

CellClassMap classify(const Workbook& workbook, const DependencyGraph& graph,
                      std::vector<GraphDiagnostic>* diagnostics) {
    CellClassMap classes;
    for (const auto& sheet : workbook.sheets) {
        for (const auto& [pos, cell] : sheet.cells) {
            const bool inbound = graph.has_inbound(cell.address);
            CellClass c = CellClass::empty;
            if (cell.is_formula()) c = inbound ? CellClass::calculation : CellClass::output;
            else if (!cell.is_empty()) c = inbound ? CellClass::input : CellClass::label;
            classes.emplace(cell.address, c);
        }
    }
    const auto cycles = find_cycles(graph);
    for (const auto& cycle : cycles) {
        // cycle members always have an inbound edge, so they are already Calculation
        for (const auto& a : cycle) classes[a] = CellClass::calculation;
        if (diagnostics) {
            std::string detail = "cycle through";
            for (const auto& a : cycle) detail += " " + workbook.describe(a);
            diagnostics->push_back({GraphDiagnostic::Kind::circular_dependency, cycle.front(), std::move(detail)});
        }
    }
    return classes;
}

std::string to_dot(const Workbook& workbook, const DependencyGraph& graph, const CellClassMap& classes) {
    auto id = [&](const CellAddress& a) { return "\"" + workbook.describe(a) + "\""; };
    std::ostringstream out;
    out << "digraph dependencies {\n  rankdir=LR;\n  node [fontname=\"Helvetica\"];\n";
    for (const auto& [addr, cls] : classes) {
        if (cls == CellClass::empty) continue;
        const char* shape = cls == CellClass::input ? "box" : cls == CellClass::output ? "doubleoctagon"
                          : cls == CellClass::calculation ? "ellipse" : "plaintext";
        out << "  " << id(addr) << " [shape=" << shape << ", tooltip=\"" << to_string(cls) << "\"];\n";
    }
    for (const auto& e : graph.edges) out << "  " << id(e.from) << " -> " << id(e.to) << ";\n";
    for (const auto& re : graph.region_edges) {
        const std::string region = workbook.sheets.at(re.region.sheet_index).name + "!" + rect_a1(re.region.range);
        out << "  \"" << region << "\" [shape=folder];\n";
        out << "  " << id(re.from) << " -> \"" << region << "\" [style=dashed];\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace sheetcheck
