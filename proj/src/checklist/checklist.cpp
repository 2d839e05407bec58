#include <cmath>

#include <json.hpp>

#include "sheetcheck/checklist.hpp"
#include "util/io.hpp"
#include "util/strings.hpp"

namespace sheetcheck {

namespace {

std::string code_text(ChecklistError::Code c) {
    switch (c) {
        case ChecklistError::Code::unknown_question: return "unknown question";
        case ChecklistError::Code::non_positive_weight: return "weight must be positive";
        case ChecklistError::Code::overlay_unknown_question: return "answer file names an unknown question";
        case ChecklistError::Code::overlay_bad_verdict: return "answer file has a bad verdict";
        case ChecklistError::Code::bad_document: return "malformed document";
        case ChecklistError::Code::incomplete_findings: return "findings do not cover all questions";
    }
    return "checklist error";
}

struct Row {
    Category category;
    const char* text;
    double weight;
    AnswerMode mode;
};

constexpr Category D = Category::documentation, S = Category::structure, M = Category::management,
                   F = Category::safety, X = Category::formatting, K = Category::skills;
constexpr AnswerMode A = AnswerMode::automatic, H = AnswerMode::hybrid, U = AnswerMode::manual;

const Row kRows[kQuestionCount] = {
    {D, "Is there any technical description available?", 20, U},
    {D, "Is there any user description available?", 15, H},
    {S, "Are the sheets grouped by function?", 20, U},
    {S, "Is the naming of the worksheets understandable?", 5, A},
    {S, "Are calculations separated from input?", 15, A},
    {M, "Are all variables placed together?", 10, A},
    {M, "Is there a clear distinction between input and output?", 10, A},
    {M, "The output is compact and clear?", 10, U},
    {M, "Are valid Excel ranges used?", 10, A},
    {M, "Are the input cells logically grouped?", 10, A},
    {F, "Is normalization used on the variables?", 20, A},
    {F, "In which way will the user selection be processed?", 15, A},
    {X, "Are the input cells formatted consequently?", 10, A},
    {X, "Are the output cells formatted consequently?", 10, A},
    {X, "Are the other cells formatted consequently?", 10, A},
    {X, "In which way will the user be supported?", 15, A},
    {K, "Is array functionality used in the model?", 20, A},
    {K, "Does the model support windows for the output?", 15, A},
    {K, "Are names used in the model?", 15, A},
    {K, "Are names separated in categories?", 10, A},
    {K, "Are the names consistently composed?", 5, A},
    {K, "Are the names consistently used?", 5, A},
    {K, "Are (complex) single sided functions used in the model?", 10, A},
    {K, "Does the model have nested functions?", 15, A},
    {K, "Does the model have links towards other cells?", 10, A},
    {K, "Does the model have absolute links or names towards other cells?", 5, A},
};

}  // namespace

ChecklistError::ChecklistError(Code code, std::string detail)
    : std::runtime_error(code_text(code) + (detail.empty() ? "" : ": " + detail)), code_(code) {}

QuestionId::QuestionId(int number) : number_(number) {
    if (number < 1 || number > kQuestionCount)
        throw ChecklistError(ChecklistError::Code::unknown_question, "Q" + std::to_string(number));
}

std::optional<QuestionId> QuestionId::parse(std::string_view text) {
    text = util::trim(text);
    if (!text.empty() && (text.front() == 'Q' || text.front() == 'q')) text.remove_prefix(1);
    if (text.empty() || text.size() > 2) return std::nullopt;
    int n = 0;
    for (char c : text) {
        if (c < '0' || c > '9') return std::nullopt;
        n = n * 10 + (c - '0');
    }
    if (n < 1 || n > kQuestionCount) return std::nullopt;
    return QuestionId(n);
}

std::string_view to_string(Category c) {
    switch (c) {
        case Category::documentation: return "Documentation";
        case Category::structure: return "Structure";
        case Category::management: return "Management";
        case Category::safety: return "Safety";
        case Category::formatting: return "Formatting";
        case Category::skills: return "Skills";
    }
    return "?";
}

std::string_view to_string(AnswerMode m) {
    switch (m) {
        case AnswerMode::automatic: return "auto";
        case AnswerMode::manual: return "manual";
        case AnswerMode::hybrid: return "hybrid";
    }
    return "?";
}

Checklist::Checklist(std::array<Question, kQuestionCount> questions) : questions_(std::move(questions)) {
    for (std::size_t i = 0; i < questions_.size(); ++i) {
        if (questions_[i].id.index() != i)
            throw ChecklistError(ChecklistError::Code::bad_document, "questions out of order");
        if (!(questions_[i].weight > 0) || !std::isfinite(questions_[i].weight))
            throw ChecklistError(ChecklistError::Code::non_positive_weight, questions_[i].id.str());
    }
}

double Checklist::total_weight() const {
    double t = 0;
    for (const auto& q : questions_) t += q.weight;
    return t;
}

double Checklist::category_weight(Category c) const {
    double t = 0;
    for (const auto& q : questions_)
        if (q.category == c) t += q.weight;
    return t;
}

Checklist Checklist::with_weights(const std::map<QuestionId, double>& overrides) const {
    auto qs = questions_;
    for (const auto& [id, w] : overrides) {
        if (!(w > 0) || !std::isfinite(w))
            throw ChecklistError(ChecklistError::Code::non_positive_weight, id.str());
        qs[id.index()].weight = w;
    }
    return Checklist(std::move(qs));
}

Checklist default_checklist() {
    std::array<Question, kQuestionCount> qs;
    for (int i = 0; i < kQuestionCount; ++i) {
        const Row& r = kRows[i];
        qs[i] = Question{QuestionId(i + 1), r.category, r.text, r.weight, r.mode};
    }
    return Checklist(std::move(qs));
}

std::map<QuestionId, double> parse_weight_overrides(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ChecklistError(ChecklistError::Code::bad_document, e.what());
    }
    if (!doc.is_object()) throw ChecklistError(ChecklistError::Code::bad_document, "weights must be an object");
    std::map<QuestionId, double> out;
    for (const auto& [key, value] : doc.items()) {
        auto id = QuestionId::parse(key);
        if (!id) throw ChecklistError(ChecklistError::Code::unknown_question, key);
        if (!value.is_number()) throw ChecklistError(ChecklistError::Code::bad_document, key + " is not a number");
        const double w = value.get<double>();
        if (!(w > 0)) throw ChecklistError(ChecklistError::Code::non_positive_weight, key);
        out[*id] = w;
    }
    return out;
}

Checklist load_weights(const std::string& path, const Checklist& base) {
    std::string text;
    try {
        text = util::read_file(path);
    } catch (const std::runtime_error& e) {
        throw ChecklistError(ChecklistError::Code::bad_document, e.what());
    }
    return base.with_weights(parse_weight_overrides(text));
}

Checklist load_weights(const std::string& path) { return load_weights(path, default_checklist()); }

}  // namespace sheetcheck
