#include <filesystem>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sheetcheck/report.hpp"
#include "util/strings.hpp"

namespace sheetcheck {

namespace {

std::string column_label(const Report& r, std::size_t i) {
    if (r.workbook.path.empty()) return "workbook " + std::to_string(i + 1);
    return std::filesystem::path(r.workbook.path).stem().string();
}

std::string csv_field(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string md_cell(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c == '|') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace

CorpusTable corpus_table(const std::vector<Report>& reports) {
    if (reports.empty()) throw ReportError(ReportError::Code::empty_corpus, "");
    std::set<std::string> prints;
    for (const auto& r : reports) prints.insert(r.config_fingerprint);
    if (prints.size() > 1) {
        std::string list;
        for (const auto& p : prints) list += (list.empty() ? "" : ", ") + p;
        throw ReportError(ReportError::Code::mixed_config, list);
    }

    CorpusTable t;
    t.config_fingerprint = *prints.begin();
    t.answers.assign(kQuestionCount, {});
    for (Category c : kCategories) t.score_labels.emplace_back(to_string(c));
    t.score_labels.emplace_back("Overall");
    t.scores.assign(t.score_labels.size(), {});
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const Report& r = reports[i];
        t.columns.push_back(column_label(r, i));
        for (int q = 0; q < kQuestionCount; ++q) t.answers[q].push_back(r.assessment.answers[q].verdict.label());
        for (std::size_t c = 0; c < kCategories.size(); ++c)
            t.scores[c].push_back(round_score(r.scores.category_score(kCategories[c])));
        t.scores.back().push_back(round_score(r.scores.overall));
        t.unresolved.push_back(r.assessment.unresolved().size());
    }
    return t;
}

std::string render_csv(const CorpusTable& t) {
    std::ostringstream out;
    out << csv_field("Item");
    for (const auto& c : t.columns) out << "," << csv_field(c);
    out << "\n";
    for (int q = 0; q < kQuestionCount; ++q) {
        out << csv_field("Q" + std::to_string(q + 1));
        for (const auto& v : t.answers[q]) out << "," << csv_field(v);
        out << "\n";
    }
    for (std::size_t s = 0; s < t.score_labels.size(); ++s) {
        out << csv_field(t.score_labels[s]);
        for (double v : t.scores[s]) out << "," << csv_field(format_score(v));
        out << "\n";
    }
    return out.str();
}

std::string render_markdown(const CorpusTable& t) {
    std::ostringstream md;
    auto header = [&](const char* first) {
        md << "| " << first << " |";
        for (const auto& c : t.columns) md << " " << md_cell(c) << " |";
        md << "\n|---|";
        for (std::size_t i = 0; i < t.columns.size(); ++i) md << "---|";
        md << "\n";
    };
    md << "## Answers\n\n";
    header("Question");
    for (int q = 0; q < kQuestionCount; ++q) {
        md << "| Q" << q + 1 << " |";
        for (const auto& v : t.answers[q]) md << " " << md_cell(v) << " |";
        md << "\n";
    }
    md << "\n## Scores\n\n";
    header("Category");
    for (std::size_t s = 0; s < t.score_labels.size(); ++s) {
        md << "| " << t.score_labels[s] << " |";
        for (double v : t.scores[s]) md << " " << format_score(v) << " |";
        md << "\n";
    }
    md << "\nUnresolved questions per workbook:";
    for (std::size_t i = 0; i < t.columns.size(); ++i) md << (i ? ", " : " ") << md_cell(t.columns[i]) << " " << t.unresolved[i];
    md << "\n\nConfig fingerprint: " << t.config_fingerprint << "\n";
    return md.str();
}

std::string render_json(const CorpusTable& t) {
    nlohmann::json doc;
    doc["schema_version"] = kReportSchemaVersion;
    doc["config_fingerprint"] = t.config_fingerprint;
    doc["columns"] = t.columns;
    nlohmann::json answers = nlohmann::json::object();
    for (int q = 0; q < kQuestionCount; ++q) answers["Q" + std::to_string(q + 1)] = t.answers[q];
    doc["answers"] = std::move(answers);
    nlohmann::json scores = nlohmann::json::object();
    for (std::size_t s = 0; s < t.score_labels.size(); ++s) scores[t.score_labels[s]] = t.scores[s];
    doc["scores"] = std::move(scores);
    doc["unresolved"] = t.unresolved;
    return doc.dump(2) + "\n";
}

}  // namespace sheetcheck
