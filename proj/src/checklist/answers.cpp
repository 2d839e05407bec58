#include <algorithm>

#include <json.hpp>

#include "sheetcheck/checklist.hpp"
#include "util/io.hpp"
#include "util/strings.hpp"

namespace sheetcheck {

std::string Verdict::label() const {
    switch (kind) {
        case VerdictKind::yes: return "Yes";
        case VerdictKind::no: return "No";
        case VerdictKind::not_applicable: return "N/A";
        case VerdictKind::qualified: return qualifier;
        case VerdictKind::needs_human: return "Needs human";
    }
    return "?";
}

double Verdict::default_credit() const {
    if (kind == VerdictKind::yes) return 1;
    if (kind == VerdictKind::qualified) return qualifier == "Not" ? 0 : 1;
    return 0;
}

std::string_view to_string(Confidence c) {
    switch (c) {
        case Confidence::high: return "high";
        case Confidence::medium: return "medium";
        case Confidence::low: return "low";
    }
    return "?";
}

std::string_view to_string(AnswerSource s) { return s == AnswerSource::human ? "human" : "auto"; }

std::vector<QuestionId> Assessment::unresolved() const {
    std::vector<QuestionId> out;
    for (int i = 0; i < kQuestionCount; ++i)
        if (answers[i].unresolved) out.emplace_back(i + 1);
    return out;
}

namespace {

std::optional<std::string_view> known_qualifier(std::string_view text) {
    for (auto q : kQualifiers)
        if (util::iequals(q, text)) return q;
    return std::nullopt;
}

Verdict parse_verdict(const std::string& key, const nlohmann::json& entry) {
    auto bad = [&](const std::string& why) { return ChecklistError(ChecklistError::Code::overlay_bad_verdict, key + ": " + why); };
    if (!entry.contains("verdict") || !entry["verdict"].is_string()) throw bad("missing verdict");
    const std::string v = entry["verdict"].get<std::string>();
    const std::string u = util::to_upper(v);
    if (u == "YES" || u == "Y") return Verdict::yes();
    if (u == "NO" || u == "N") return Verdict::no();
    if (u == "N/A" || u == "NA") return Verdict::na();
    if (u == "QUALIFIED") {
        if (!entry.contains("text") || !entry["text"].is_string()) throw bad("qualified verdict needs text");
        auto q = known_qualifier(entry["text"].get<std::string>());
        if (!q) throw bad("unknown qualifier '" + entry["text"].get<std::string>() + "'");
        return Verdict::qualified(std::string(*q));
    }
    // a bare qualifier is accepted as shorthand
    if (auto q = known_qualifier(v)) return Verdict::qualified(std::string(*q));
    throw bad("unknown verdict '" + v + "'");
}

}  // namespace

HumanOverlay parse_overlay(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ChecklistError(ChecklistError::Code::bad_document, e.what());
    }
    if (!doc.is_object()) throw ChecklistError(ChecklistError::Code::bad_document, "answers must be an object");
    HumanOverlay out;
    for (const auto& [key, entry] : doc.items()) {
        auto id = QuestionId::parse(key);
        if (!id) throw ChecklistError(ChecklistError::Code::overlay_unknown_question, key);
        if (!entry.is_object()) throw ChecklistError(ChecklistError::Code::overlay_bad_verdict, key + ": expected an object");
        for (const auto& [field, unused] : entry.items()) {
            if (field != "verdict" && field != "text" && field != "note")
                throw ChecklistError(ChecklistError::Code::overlay_bad_verdict, key + ": unknown field '" + field + "'");
        }
        HumanAnswer a;
        a.verdict = parse_verdict(key, entry);
        if (entry.contains("note")) {
            if (!entry["note"].is_string()) throw ChecklistError(ChecklistError::Code::overlay_bad_verdict, key + ": note must be text");
            a.note = entry["note"].get<std::string>();
        }
        out[*id] = std::move(a);
    }
    return out;
}

HumanOverlay load_overlay(const std::string& path) {
    std::string text;
    try {
        text = util::read_file(path);
    } catch (const std::runtime_error& e) {
        throw ChecklistError(ChecklistError::Code::bad_document, e.what());
    }
    return parse_overlay(text);
}

std::string dump_overlay(const HumanOverlay& overlay) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::object();
    for (const auto& [id, a] : overlay) {
        nlohmann::ordered_json e;
        if (a.verdict.kind == VerdictKind::qualified) {
            e["verdict"] = "Qualified";
            e["text"] = a.verdict.qualifier;
        } else {
            e["verdict"] = a.verdict.label();
        }
        if (!a.note.empty()) e["note"] = a.note;
        doc[id.str()] = std::move(e);
    }
    return doc.dump(2) + "\n";
}

Assessment merge_answers(const std::vector<Finding>& findings, const HumanOverlay& overlay) {
    Assessment out;
    std::array<bool, kQuestionCount> seen{};
    for (const auto& f : findings) {
        if (seen[f.question.index()])
            throw ChecklistError(ChecklistError::Code::incomplete_findings, "duplicate " + f.question.str());
        seen[f.question.index()] = true;
        Answer& a = out.answers[f.question.index()];
        a.verdict = f.verdict;
        a.credit = f.credit;
        a.evidence = f.evidence;
        a.omitted_evidence = f.omitted_evidence;
        a.confidence = f.confidence;
        a.note = f.hint;
        if (f.verdict.kind == VerdictKind::needs_human) {
            a.verdict = Verdict::no();
            a.credit = 0;
            a.unresolved = true;
        }
    }
    for (int i = 0; i < kQuestionCount; ++i)
        if (!seen[i]) throw ChecklistError(ChecklistError::Code::incomplete_findings, "missing Q" + std::to_string(i + 1));

    for (const auto& [id, h] : overlay) {
        if (h.verdict.kind == VerdictKind::needs_human)
            throw ChecklistError(ChecklistError::Code::overlay_bad_verdict, id.str() + ": a human answer cannot defer to a human");
        const double credit = h.credit.value_or(h.verdict.default_credit());
        if (!(credit >= 0 && credit <= 1))
            throw ChecklistError(ChecklistError::Code::overlay_bad_verdict, id.str() + ": credit outside [0,1]");
        Answer& a = out.answers[id.index()];
        a.verdict = h.verdict;
        a.credit = credit;
        a.source = AnswerSource::human;
        a.unresolved = false;
        a.confidence = Confidence::high;
        if (!h.note.empty()) a.note = h.note;
    }
    return out;
}

}  // namespace sheetcheck
