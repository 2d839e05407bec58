#include <array>

#include "analyzers/rules.hpp"

namespace sheetcheck {

namespace {

using Rule = Finding (*)(const AnalysisContext&);

constexpr std::array<Rule, kQuestionCount> kRules = {
    rules::q1_technical_description, rules::q2_user_description,   rules::q3_sheets_grouped,
    rules::q4_sheet_naming,          rules::q5_calculations_separated, rules::q6_variables_together,
    rules::q7_input_output_distinct, rules::q8_output_compact,     rules::q9_valid_ranges,
    rules::q10_inputs_grouped,       rules::q11_normalization,     rules::q12_user_selection,
    rules::q13_input_format,         rules::q14_output_format,     rules::q15_other_format,
    rules::q16_user_support,         rules::q17_arrays,            rules::q18_windows,
    rules::q19_names_used,           rules::q20_name_categories,   rules::q21_name_composition,
    rules::q22_names_consistent,     rules::q23_complex_functions, rules::q24_nested,
    rules::q25_links,                rules::q26_absolute_links,
};

}  // namespace

Finding evaluate(QuestionId question, const AnalysisContext& context) { return kRules[question.index()](context); }

Finding evaluate(QuestionId question, const Workbook& workbook, const DependencyGraph& graph,
                 const CellClassMap& classes, const AnalyzerConfig& config) {
    AnalysisContext ctx(workbook, graph, classes, config);
    return evaluate(question, ctx);
}

Finding evaluate(int question_number, const Workbook& workbook, const DependencyGraph& graph,
                 const CellClassMap& classes, const AnalyzerConfig& config) {
    return evaluate(QuestionId(question_number), workbook, graph, classes, config);
}

std::vector<Finding> evaluate_all(const AnalysisContext& context) {
    std::vector<Finding> out;
    out.reserve(kQuestionCount);
    for (int i = 1; i <= kQuestionCount; ++i) out.push_back(evaluate(QuestionId(i), context));
    return out;
}

}  // namespace sheetcheck
