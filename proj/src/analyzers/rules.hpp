#pragma once

#include "sheetcheck/analyzers.hpp"

// One function per checklist question.
namespace sheetcheck::rules {

Finding q1_technical_description(const AnalysisContext& ctx);
Finding q2_user_description(const AnalysisContext& ctx);
Finding q3_sheets_grouped(const AnalysisContext& ctx);
Finding q4_sheet_naming(const AnalysisContext& ctx);
Finding q5_calculations_separated(const AnalysisContext& ctx);
Finding q6_variables_together(const AnalysisContext& ctx);
Finding q7_input_output_distinct(const AnalysisContext& ctx);
Finding q8_output_compact(const AnalysisContext& ctx);
Finding q9_valid_ranges(const AnalysisContext& ctx);
Finding q10_inputs_grouped(const AnalysisContext& ctx);
Finding q11_normalization(const AnalysisContext& ctx);
Finding q12_user_selection(const AnalysisContext& ctx);
Finding q13_input_format(const AnalysisContext& ctx);
Finding q14_output_format(const AnalysisContext& ctx);
Finding q15_other_format(const AnalysisContext& ctx);
Finding q16_user_support(const AnalysisContext& ctx);
Finding q17_arrays(const AnalysisContext& ctx);
Finding q18_windows(const AnalysisContext& ctx);
Finding q19_names_used(const AnalysisContext& ctx);
Finding q20_name_categories(const AnalysisContext& ctx);
Finding q21_name_composition(const AnalysisContext& ctx);
Finding q22_names_consistent(const AnalysisContext& ctx);
Finding q23_complex_functions(const AnalysisContext& ctx);
Finding q24_nested(const AnalysisContext& ctx);
Finding q25_links(const AnalysisContext& ctx);
Finding q26_absolute_links(const AnalysisContext& ctx);

}  // namespace sheetcheck::rules
