#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sheetcheck/analyzers.hpp"
#include "sheetcheck/checklist.hpp"
#include "sheetcheck/workbook.hpp"

namespace sheetcheck {

inline constexpr int kReportSchemaVersion = 1;

struct WorkbookIdentity {
    std::string path;
    std::size_t sheet_count = 0;
    std::size_t cell_count = 0;
    std::vector<std::string> sheet_names;
};

struct Report {
    WorkbookIdentity workbook;
    Checklist checklist = default_checklist();
    Assessment assessment;
    ScoreCard scores;
    std::string tool_version = SHEETCHECK_VERSION;
    std::string config_fingerprint;
    std::string semantics;  // nesting semantics used by Q24
    std::size_t diagnostics = 0;
    std::optional<std::string> timestamp;  // omitted for reproducible output
};

/// 16 hex digits over the weights and every analyzer tunable.
std::string config_fingerprint(const Checklist& checklist, const AnalyzerConfig& config);

/// Remediation hint for a question that did not earn full credit.
std::string_view hint_for(QuestionId id);

/// Load-free pipeline: graph, classification, findings, overlay, scores.
Report assess(const Workbook& workbook, const Checklist& checklist, const AnalyzerConfig& config,
              const HumanOverlay& overlay = {});

enum class ReportFormat { json, markdown };

std::string render(const Report& report, ReportFormat format);
std::string render_json(const Report& report);
std::string render_markdown(const Report& report);

/// Recover a report from its JSON rendering (scores, verdicts, credits, evidence notes).
Report parse_report_json(std::string_view json_text);

class ReportError : public std::runtime_error {
public:
    enum class Code { mixed_config, empty_corpus, bad_document };
    ReportError(Code code, std::string detail);
    Code code() const { return code_; }

private:
    Code code_;
};

struct CorpusTable {
    std::vector<std::string> columns;                   // one per workbook, input order
    std::vector<std::vector<std::string>> answers;      // 26 rows x N
    std::vector<std::string> score_labels;              // 6 categories + "Overall"
    std::vector<std::vector<double>> scores;            // 7 rows x N, rounded to one decimal
    std::vector<std::size_t> unresolved;                // per column
    std::string config_fingerprint;
};

/// Throws ReportError(mixed_config) when fingerprints differ, (empty_corpus) for no reports.
CorpusTable corpus_table(const std::vector<Report>& reports);
std::string render_csv(const CorpusTable& table);
std::string render_markdown(const CorpusTable& table);
std::string render_json(const CorpusTable& table);

}  // namespace sheetcheck
