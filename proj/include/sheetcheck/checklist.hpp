#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sheetcheck {

inline constexpr int kQuestionCount = 26;

/// Checklist question number, Q1..Q26.
class QuestionId {
public:
    /// Throws ChecklistError(unknown_question) outside 1..26.
    explicit QuestionId(int number);
    static std::optional<QuestionId> parse(std::string_view text);  // "Q7", "q7", "7"

    int number() const { return number_; }
    std::size_t index() const { return static_cast<std::size_t>(number_ - 1); }
    std::string str() const { return "Q" + std::to_string(number_); }

    friend auto operator<=>(const QuestionId&, const QuestionId&) = default;

private:
    int number_;
};

enum class Category { documentation, structure, management, safety, formatting, skills };
inline constexpr std::array<Category, 6> kCategories = {
    Category::documentation, Category::structure,  Category::management,
    Category::safety,        Category::formatting, Category::skills};

std::string_view to_string(Category c);

enum class AnswerMode { automatic, manual, hybrid };
std::string_view to_string(AnswerMode m);

struct Question {
    QuestionId id{1};
    Category category = Category::documentation;
    std::string text;
    double weight = 0;
    AnswerMode mode = AnswerMode::automatic;
};

class Checklist {
public:
    explicit Checklist(std::array<Question, kQuestionCount> questions);

    const Question& question(QuestionId id) const { return questions_[id.index()]; }
    const std::array<Question, kQuestionCount>& questions() const { return questions_; }
    double weight(QuestionId id) const { return question(id).weight; }
    double total_weight() const;
    double category_weight(Category c) const;

    /// Copy with some weights replaced. Throws ChecklistError(non_positive_weight).
    Checklist with_weights(const std::map<QuestionId, double>& overrides) const;

private:
    std::array<Question, kQuestionCount> questions_;
};

Checklist default_checklist();

/// Weight override document: {"Q24": 30, ...}.
std::map<QuestionId, double> parse_weight_overrides(std::string_view json_text);
Checklist load_weights(const std::string& path);
Checklist load_weights(const std::string& path, const Checklist& base);

class ChecklistError : public std::runtime_error {
public:
    enum class Code {
        unknown_question,
        non_positive_weight,
        overlay_unknown_question,
        overlay_bad_verdict,
        bad_document,
        incomplete_findings,
    };
    ChecklistError(Code code, std::string detail);
    Code code() const { return code_; }

private:
    Code code_;
};

// ---- answers ----

enum class VerdictKind { yes, no, not_applicable, qualified, needs_human };

struct Verdict {
    VerdictKind kind = VerdictKind::no;
    std::string qualifier;  // only for `qualified`

    static Verdict yes() { return {VerdictKind::yes, {}}; }
    static Verdict no() { return {VerdictKind::no, {}}; }
    static Verdict na() { return {VerdictKind::not_applicable, {}}; }
    static Verdict needs_human() { return {VerdictKind::needs_human, {}}; }
    static Verdict qualified(std::string text) { return {VerdictKind::qualified, std::move(text)}; }

    /// Table-style label: "Yes", "No", "N/A", the qualifier text, or "Needs human".
    std::string label() const;
    /// Default credit: Yes and every qualifier except "Not" earn 1.
    double default_credit() const;

    friend bool operator==(const Verdict&, const Verdict&) = default;
};

/// Qualifiers understood without further configuration.
inline constexpr std::array<std::string_view, 5> kQualifiers = {"User sheets", "Controls", "In cells",
                                                                "Not", "Validation"};

enum class Confidence { high, medium, low };
std::string_view to_string(Confidence c);

/// Evidence points either at a stored cell or at a whole sheet.
struct Evidence {
    std::uint32_t sheet_index = 0;
    std::optional<std::uint32_t> row;
    std::optional<std::uint32_t> column;
    std::string note;

    bool is_cell() const { return row.has_value(); }
    friend bool operator==(const Evidence&, const Evidence&) = default;
};

struct Finding {
    QuestionId question{1};
    Verdict verdict;
    double credit = 0;
    std::vector<Evidence> evidence;
    std::size_t omitted_evidence = 0;  // items beyond the evidence cap
    Confidence confidence = Confidence::high;
    std::string hint;  // machine observation for human assessors
};

enum class AnswerSource { automatic, human };
std::string_view to_string(AnswerSource s);

struct Answer {
    Verdict verdict;
    double credit = 0;
    AnswerSource source = AnswerSource::automatic;
    bool unresolved = false;  // NeedsHuman without a human answer
    std::vector<Evidence> evidence;
    std::size_t omitted_evidence = 0;
    Confidence confidence = Confidence::high;
    std::string note;
};

struct HumanAnswer {
    Verdict verdict;
    std::string note;
    std::optional<double> credit;  // engine-level override; the overlay file never sets it
};

using HumanOverlay = std::map<QuestionId, HumanAnswer>;

/// {"Q1": {"verdict": "Yes", "note": "..."}, "Q2": {"verdict": "Qualified", "text": "User sheets"}}
HumanOverlay parse_overlay(std::string_view json_text);
HumanOverlay load_overlay(const std::string& path);
std::string dump_overlay(const HumanOverlay& overlay);

struct Assessment {
    std::array<Answer, kQuestionCount> answers;

    const Answer& answer(QuestionId id) const { return answers[id.index()]; }
    Answer& answer(QuestionId id) { return answers[id.index()]; }
    std::vector<QuestionId> unresolved() const;
};

/// Human answers win question by question; unanswered NeedsHuman becomes No/0, flagged unresolved.
Assessment merge_answers(const std::vector<Finding>& findings, const HumanOverlay& overlay);

// ---- scores ----

struct CategoryScore {
    double score = 0;  // 0..10
    double earned_weight = 0;
    double total_weight = 0;
};

struct ScoreCard {
    std::map<Category, CategoryScore> categories;
    double overall = 0;
    double earned_weight = 0;
    double total_weight = 0;

    double category_score(Category c) const { return categories.at(c).score; }
};

double score_category(const Assessment& assessment, Category category, const Checklist& checklist);
ScoreCard score_overall(const Assessment& assessment, const Checklist& checklist);

/// Half-up rounding to one decimal, as printed in reports.
double round_score(double score);
std::string format_score(double score);

}  // namespace sheetcheck
