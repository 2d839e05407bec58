#include <cstdio>

#include "sheetcheck/report.hpp"
#include "util/strings.hpp"

namespace sheetcheck {

namespace {

std::string code_text(ReportError::Code c) {
    switch (c) {
        case ReportError::Code::mixed_config: return "reports were produced under different configurations";
        case ReportError::Code::empty_corpus: return "no reports to tabulate";
        case ReportError::Code::bad_document: return "malformed report";
    }
    return "report error";
}

const char* const kHints[kQuestionCount] = {
    "Add a sheet that explains how the model is built: its sheets, key formulas and assumptions.",
    "Add a sheet that tells users how to enter data and read the results.",
    "Give each sheet a single purpose, for example inputs, calculations and results.",
    "Rename default sheets such as Sheet1 after what they contain.",
    "Move input values to their own area or sheet, away from formulas.",
    "Keep the model's variables together in one block instead of scattering them.",
    "Keep input and output areas visibly apart.",
    "Collect the results in one compact, clearly labelled area.",
    "Repair #REF! errors, self-references and ranges that run backwards or off the sheet.",
    "Group related input cells and give each group a label.",
    "Store each constant once and reference it instead of typing the value into formulas.",
    "Restrict user choices with drop-down lists, form controls or data validation.",
    "Give all input cells one consistent format.",
    "Give all output cells one consistent format.",
    "Format labels and intermediate calculations consistently.",
    "Attach comments or input prompts to input cells to guide users.",
    "Consider array formulas where one formula can replace many copies.",
    "Freeze panes or split the window so headers stay visible next to the output.",
    "Define names for important cells and ranges and use them in formulas.",
    "Use a shared prefix per category of names, such as Rate_ or Input_.",
    "Compose all names with one casing convention.",
    "Once a cell has a name, refer to it by that name everywhere.",
    "Lookup and conditional aggregate functions can replace long chains of formulas.",
    "Nested functions can express a calculation in a single cell; check that they stay readable.",
    "Link formulas to the cells holding their values instead of copying the values.",
    "Use absolute references or names for fixed inputs so copied formulas keep pointing at them.",
};

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

ReportError::ReportError(Code code, std::string detail)
    : std::runtime_error(code_text(code) + (detail.empty() ? "" : ": " + detail)), code_(code) {}

std::string_view hint_for(QuestionId id) { return kHints[id.index()]; }

std::string config_fingerprint(const Checklist& checklist, const AnalyzerConfig& config) {
    std::string canonical = "weights:";
    for (const auto& q : checklist.questions()) canonical += q.id.str() + "=" + util::format_double(q.weight) + ";";
    canonical += "config:" + config.to_json();
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canonical)));
    return buf;
}

Report assess(const Workbook& workbook, const Checklist& checklist, const AnalyzerConfig& config,
              const HumanOverlay& overlay) {
    config.validate();
    const DependencyGraph graph = build_graph(workbook);
    std::vector<GraphDiagnostic> cycles;
    const CellClassMap classes = classify(workbook, graph, &cycles);
    const AnalysisContext ctx(workbook, graph, classes, config);

    Report r;
    r.workbook.path = workbook.source_path;
    r.workbook.sheet_count = workbook.sheets.size();
    r.workbook.cell_count = workbook.cell_count();
    for (const auto& s : workbook.sheets) r.workbook.sheet_names.push_back(s.name);
    r.checklist = checklist;
    r.assessment = merge_answers(evaluate_all(ctx), overlay);
    r.scores = score_overall(r.assessment, checklist);
    r.config_fingerprint = config_fingerprint(checklist, config);
    r.semantics = std::string(formula::to_string(config.nesting_semantics));
    r.diagnostics = graph.diagnostics.size() + cycles.size();
    return r;
}

}  // namespace sheetcheck
