#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sheetcheck/formula.hpp"
#include "sheetcheck/workbook.hpp"

namespace sheetcheck {

inline constexpr std::uint64_t kDefaultExpansionLimit = 65536;

struct Edge {
    CellAddress from;  // formula cell
    CellAddress to;    // referenced cell
    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Stand-in for a range too large to expand: `from` references every cell of `region`.
struct RegionEdge {
    CellAddress from;
    SheetRange region;
    friend bool operator==(const RegionEdge&, const RegionEdge&) = default;
};

struct GraphDiagnostic {
    enum class Kind { parse_failure, dangling_reference, unresolved_name, circular_dependency };
    Kind kind;
    CellAddress cell;
    std::string detail;
};

std::string_view to_string(GraphDiagnostic::Kind k);

struct DependencyGraph {
    std::vector<CellAddress> nodes;  // every stored cell, ordered
    std::vector<Edge> edges;         // sorted, unique
    std::vector<RegionEdge> region_edges;
    std::map<CellAddress, formula::Node> formulas;  // successfully parsed formula cells
    std::set<CellAddress> referenced;               // cells with at least one inbound edge or region
    std::vector<GraphDiagnostic> diagnostics;
    std::uint64_t expansion_limit = kDefaultExpansionLimit;

    bool has_inbound(const CellAddress& a) const { return referenced.count(a) != 0; }
    std::vector<CellAddress> successors(const CellAddress& from) const;
};

DependencyGraph build_graph(const Workbook& workbook,
                            std::uint64_t expansion_limit = kDefaultExpansionLimit);

enum class CellClass { input, calculation, output, label, empty };
std::string_view to_string(CellClass c);

using CellClassMap = std::map<CellAddress, CellClass>;

/// Cycles are appended to `graph.diagnostics` when `diagnostics` is non-null.
CellClassMap classify(const Workbook& workbook, const DependencyGraph& graph,
                      std::vector<GraphDiagnostic>* diagnostics = nullptr);

/// Strongly connected components of size > 1 plus self-loops, each sorted.
std::vector<std::vector<CellAddress>> find_cycles(const DependencyGraph& graph);

std::string to_dot(const Workbook& workbook, const DependencyGraph& graph, const CellClassMap& classes);

}  // namespace sheetcheck
