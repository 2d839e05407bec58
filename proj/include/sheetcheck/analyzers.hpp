#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sheetcheck/checklist.hpp"
#include "sheetcheck/dataflow.hpp"
#include "sheetcheck/formula.hpp"
#include "sheetcheck/workbook.hpp"

namespace sheetcheck {

/// Tunables for the automatic rules. JSON keys match the field names.
struct AnalyzerConfig {
    formula::NestingSemantics nesting_semantics = formula::NestingSemantics::builtin_only;
    double format_consistency_threshold = 0.9;
    int normalization_min_repeats = 2;
    std::set<double> literal_exemptions = {-1, 0, 1, 100};
    std::set<std::string> complex_function_list = {
        "VLOOKUP", "HLOOKUP", "INDEX",   "MATCH",   "OFFSET", "INDIRECT", "SUMPRODUCT",
        "SUMIF",   "SUMIFS",  "COUNTIF", "COUNTIFS", "NPV",    "IRR",      "CHOOSE"};
    std::string default_sheet_name_pattern = "^sheet ?[0-9]+$";  // matched case-insensitively
    double naming_threshold = 1.0;
    int doc_sheet_min_text_cells = 10;
    std::size_t evidence_limit = 20;

    /// Throws ConfigError when a threshold is outside (0,1] or a list is empty.
    void validate() const;
    std::string to_json() const;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

AnalyzerConfig parse_analyzer_config(std::string_view json_text);
AnalyzerConfig load_analyzer_config(const std::string& path);

/// Shared derived data for all rules over one workbook.
class AnalysisContext {
public:
    AnalysisContext(const Workbook& workbook, const DependencyGraph& graph,
                    const CellClassMap& classes, const AnalyzerConfig& config);

    const Workbook& workbook() const { return workbook_; }
    const DependencyGraph& graph() const { return graph_; }
    const CellClassMap& classes() const { return classes_; }
    const AnalyzerConfig& config() const { return config_; }

    CellClass class_of(const CellAddress& a) const;
    std::vector<CellAddress> cells_of(CellClass c) const;
    std::vector<CellAddress> cells_of(CellClass c, std::uint32_t sheet) const;
    /// Sheets with enough text, no formulas and no inbound references.
    const std::vector<std::uint32_t>& documentation_sheets() const { return doc_sheets_; }
    /// 4-connected components of Input cells, per sheet, in address order.
    const std::vector<std::vector<CellAddress>>& input_blocks() const { return input_blocks_; }

private:
    const Workbook& workbook_;
    const DependencyGraph& graph_;
    const CellClassMap& classes_;
    const AnalyzerConfig& config_;
    std::vector<std::uint32_t> doc_sheets_;
    std::vector<std::vector<CellAddress>> input_blocks_;
};

/// Throws ChecklistError(unknown_question) for ids outside Q1..Q26.
Finding evaluate(QuestionId question, const Workbook& workbook, const DependencyGraph& graph,
                 const CellClassMap& classes, const AnalyzerConfig& config);
Finding evaluate(int question_number, const Workbook& workbook, const DependencyGraph& graph,
                 const CellClassMap& classes, const AnalyzerConfig& config);
Finding evaluate(QuestionId question, const AnalysisContext& context);

/// All 26 findings in question order.
std::vector<Finding> evaluate_all(const AnalysisContext& context);

struct NormalizationViolation {
    double value;
    std::vector<CellAddress> cells;  // distinct formula cells, address order
};

/// Sorted by group size descending, then value ascending.
std::vector<NormalizationViolation> detect_normalization_violations(const Workbook& workbook,
                                                                    const DependencyGraph& graph,
                                                                    const AnalyzerConfig& config);
std::vector<NormalizationViolation> detect_normalization_violations(const Workbook& workbook,
                                                                    const AnalyzerConfig& config);

struct ConsistencyResult {
    double dominant_share = 0;
    Verdict verdict;                   // Yes, No, or NA for an empty set
    std::vector<CellAddress> off_style;  // cells outside the dominant signature
};

ConsistencyResult format_consistency(const Workbook& workbook, const std::vector<CellAddress>& cells,
                                     double threshold);

struct NamingResult {
    double custom_fraction = 0;
    Verdict verdict;
    std::vector<std::uint32_t> default_named;  // sheet indices
};

NamingResult sheet_naming(const Workbook& workbook, const AnalyzerConfig& config);

}  // namespace sheetcheck
