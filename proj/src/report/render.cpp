#include <sstream>

#include <json.hpp>

#include "sheetcheck/report.hpp"
#include "util/strings.hpp"

namespace sheetcheck {

using nlohmann::json;

namespace {

std::string_view kind_name(VerdictKind k) {
    switch (k) {
        case VerdictKind::yes: return "yes";
        case VerdictKind::no: return "no";
        case VerdictKind::not_applicable: return "not_applicable";
        case VerdictKind::qualified: return "qualified";
        case VerdictKind::needs_human: return "needs_human";
    }
    return "no";
}

VerdictKind kind_from(const std::string& s) {
    for (auto k : {VerdictKind::yes, VerdictKind::no, VerdictKind::not_applicable, VerdictKind::qualified,
                   VerdictKind::needs_human})
        if (kind_name(k) == s) return k;
    throw ReportError(ReportError::Code::bad_document, "unknown verdict kind '" + s + "'");
}

std::string evidence_place(const Report& r, const Evidence& e) {
    std::string sheet = e.sheet_index < r.workbook.sheet_names.size() ? r.workbook.sheet_names[e.sheet_index]
                                                                      : "#" + std::to_string(e.sheet_index);
    if (!e.is_cell()) return sheet;
    return formula::quote_sheet(sheet) + "!" + a1(GridPos{*e.row, *e.column});
}

json evidence_json(const Report& r, const Evidence& e) {
    json j;
    j["sheet_index"] = e.sheet_index;
    j["sheet"] = e.sheet_index < r.workbook.sheet_names.size() ? r.workbook.sheet_names[e.sheet_index] : "";
    if (e.is_cell()) {
        j["row"] = *e.row;
        j["column"] = *e.column;
        j["cell"] = a1(GridPos{*e.row, *e.column});
    }
    j["note"] = e.note;
    return j;
}

template <class T>
T field(const json& j, const char* key) {
    if (!j.contains(key)) throw ReportError(ReportError::Code::bad_document, std::string("missing '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ReportError(ReportError::Code::bad_document, std::string(key) + ": " + e.what());
    }
}

}  // namespace

std::string render_json(const Report& r) {
    json doc;
    doc["schema_version"] = kReportSchemaVersion;
    doc["tool_version"] = r.tool_version;
    doc["config_fingerprint"] = r.config_fingerprint;
    doc["nesting_semantics"] = r.semantics;
    doc["diagnostics"] = r.diagnostics;
    if (r.timestamp) doc["timestamp"] = *r.timestamp;
    doc["workbook"] = {{"path", r.workbook.path},
                       {"sheet_count", r.workbook.sheet_count},
                       {"cell_count", r.workbook.cell_count},
                       {"sheets", r.workbook.sheet_names}};

    json answers = json::array();
    for (const auto& q : r.checklist.questions()) {
        const Answer& a = r.assessment.answer(q.id);
        json j;
        j["question"] = q.id.str();
        j["category"] = std::string(to_string(q.category));
        j["text"] = q.text;
        j["weight"] = q.weight;
        j["mode"] = std::string(to_string(q.mode));
        j["verdict"] = a.verdict.label();
        j["verdict_kind"] = std::string(kind_name(a.verdict.kind));
        if (a.verdict.kind == VerdictKind::qualified) j["qualifier"] = a.verdict.qualifier;
        j["credit"] = a.credit;
        j["source"] = std::string(to_string(a.source));
        j["unresolved"] = a.unresolved;
        j["confidence"] = std::string(to_string(a.confidence));
        j["note"] = a.note;
        json ev = json::array();
        for (const auto& e : a.evidence) ev.push_back(evidence_json(r, e));
        j["evidence"] = std::move(ev);
        j["omitted_evidence"] = a.omitted_evidence;
        if (a.credit < 1) j["hint"] = std::string(hint_for(q.id));
        answers.push_back(std::move(j));
    }
    doc["answers"] = std::move(answers);

    json cats = json::object();
    for (const auto& [c, s] : r.scores.categories) {
        cats[std::string(to_string(c))] = {{"score", s.score},
                                           {"rounded", round_score(s.score)},
                                           {"earned_weight", s.earned_weight},
                                           {"total_weight", s.total_weight}};
    }
    doc["scores"] = {{"categories", cats},
                     {"overall", r.scores.overall},
                     {"overall_rounded", round_score(r.scores.overall)},
                     {"earned_weight", r.scores.earned_weight},
                     {"total_weight", r.scores.total_weight}};
    json unresolved = json::array();
    for (const auto& id : r.assessment.unresolved()) unresolved.push_back(id.str());
    doc["unresolved"] = std::move(unresolved);
    return doc.dump(2) + "\n";
}

std::string render_markdown(const Report& r) {
    std::ostringstream md;
    md << "# Maintainability report: " << (r.workbook.path.empty() ? "(workbook)" : r.workbook.path) << "\n\n";
    md << "- Sheets: " << r.workbook.sheet_count << "\n";
    md << "- Cells: " << r.workbook.cell_count << "\n";
    md << "- Nesting semantics: " << r.semantics << "\n";
    md << "- Tool version: " << r.tool_version << "\n";
    md << "- Config fingerprint: " << r.config_fingerprint << "\n";
    if (r.diagnostics) md << "- Formula diagnostics: " << r.diagnostics << "\n";
    if (r.timestamp) md << "- Generated: " << *r.timestamp << "\n";

    md << "\n## Scores\n\nOverall: " << format_score(r.scores.overall) << "\n\n";
    md << "| Category | Score | Earned weight | Total weight |\n|---|---:|---:|---:|\n";
    for (const auto& [c, s] : r.scores.categories) {
        md << "| " << to_string(c) << " | " << format_score(s.score) << " | " << util::format_double(s.earned_weight)
           << " | " << util::format_double(s.total_weight) << " |\n";
    }
    md << "| Overall | " << format_score(r.scores.overall) << " | " << util::format_double(r.scores.earned_weight)
       << " | " << util::format_double(r.scores.total_weight) << " |\n";

    for (Category c : kCategories) {
        md << "\n## " << to_string(c) << " (" << format_score(r.scores.category_score(c)) << ")\n";
        for (const auto& q : r.checklist.questions()) {
            if (q.category != c) continue;
            const Answer& a = r.assessment.answer(q.id);
            md << "\n### " << q.id.str() << ". " << q.text << " [" << util::format_double(q.weight) << "]\n\n";
            md << "- Answer: **" << a.verdict.label() << "**" << (a.unresolved ? " (unresolved)" : "")
               << ", credit " << util::format_double(a.credit) << ", " << to_string(a.source) << ", confidence "
               << to_string(a.confidence) << "\n";
            if (!a.note.empty()) md << "- Note: " << a.note << "\n";
            if (!a.evidence.empty()) {
                md << "- Evidence:\n";
                for (const auto& e : a.evidence) {
                    md << "  - " << evidence_place(r, e);
                    if (!e.note.empty()) md << ": `" << e.note << "`";
                    md << "\n";
                }
                if (a.omitted_evidence) md << "  - ... and " << a.omitted_evidence << " more\n";
            }
            if (a.credit < 1) md << "- Hint: " << hint_for(q.id) << "\n";
        }
    }

    md << "\n## Unresolved questions\n\n";
    const auto unresolved = r.assessment.unresolved();
    if (unresolved.empty()) md << "None.\n";
    else {
        md << "These questions need a human answer and were scored as No:\n\n";
        for (const auto& id : unresolved) md << "- " << id.str() << ". " << r.checklist.question(id).text << "\n";
    }
    return md.str();
}

std::string render(const Report& report, ReportFormat format) {
    return format == ReportFormat::json ? render_json(report) : render_markdown(report);
}

Report parse_report_json(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ReportError(ReportError::Code::bad_document, e.what());
    }
    if (!doc.is_object()) throw ReportError(ReportError::Code::bad_document, "expected an object");
    if (field<int>(doc, "schema_version") != kReportSchemaVersion)
        throw ReportError(ReportError::Code::bad_document, "unsupported schema_version");

    Report r;
    r.tool_version = field<std::string>(doc, "tool_version");
    r.config_fingerprint = field<std::string>(doc, "config_fingerprint");
    r.semantics = field<std::string>(doc, "nesting_semantics");
    r.diagnostics = field<std::size_t>(doc, "diagnostics");
    if (doc.contains("timestamp")) r.timestamp = field<std::string>(doc, "timestamp");
    const json& wb = doc.at("workbook");
    r.workbook.path = field<std::string>(wb, "path");
    r.workbook.sheet_count = field<std::size_t>(wb, "sheet_count");
    r.workbook.cell_count = field<std::size_t>(wb, "cell_count");
    r.workbook.sheet_names = field<std::vector<std::string>>(wb, "sheets");

    const json& answers = doc.at("answers");
    if (!answers.is_array() || answers.size() != kQuestionCount)
        throw ReportError(ReportError::Code::bad_document, "expected 26 answers");
    std::map<QuestionId, double> weights;
    for (const auto& j : answers) {
        auto id = QuestionId::parse(field<std::string>(j, "question"));
        if (!id) throw ReportError(ReportError::Code::bad_document, "bad question id");
        weights[*id] = field<double>(j, "weight");
        Answer& a = r.assessment.answer(*id);
        a.verdict.kind = kind_from(field<std::string>(j, "verdict_kind"));
        if (a.verdict.kind == VerdictKind::qualified) a.verdict.qualifier = field<std::string>(j, "qualifier");
        a.credit = field<double>(j, "credit");
        a.source = field<std::string>(j, "source") == "human" ? AnswerSource::human : AnswerSource::automatic;
        a.unresolved = field<bool>(j, "unresolved");
        const auto conf = field<std::string>(j, "confidence");
        a.confidence = conf == "low" ? Confidence::low : conf == "medium" ? Confidence::medium : Confidence::high;
        a.note = field<std::string>(j, "note");
        for (const auto& e : j.at("evidence")) {
            Evidence ev;
            ev.sheet_index = field<std::uint32_t>(e, "sheet_index");
            if (e.contains("row")) ev.row = field<std::uint32_t>(e, "row");
            if (e.contains("column")) ev.column = field<std::uint32_t>(e, "column");
            ev.note = field<std::string>(e, "note");
            a.evidence.push_back(std::move(ev));
        }
        a.omitted_evidence = field<std::size_t>(j, "omitted_evidence");
    }
    try {
        r.checklist = default_checklist().with_weights(weights);
    } catch (const ChecklistError& e) {
        throw ReportError(ReportError::Code::bad_document, e.what());
    }

    const json& scores = doc.at("scores");
    r.scores.overall = field<double>(scores, "overall");
    r.scores.earned_weight = field<double>(scores, "earned_weight");
    r.scores.total_weight = field<double>(scores, "total_weight");
    for (Category c : kCategories) {
        const json& s = scores.at("categories").at(std::string(to_string(c)));
        r.scores.categories[c] = {field<double>(s, "score"), field<double>(s, "earned_weight"),
                                  field<double>(s, "total_weight")};
    }
    return r;
}

}  // namespace sheetcheck
