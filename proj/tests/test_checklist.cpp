#include <doctest.h>

#include <cmath>

#include "sheetcheck/checklist.hpp"
#include "support/common.hpp"

using namespace sheetcheck;

namespace {

Assessment all(Verdict v) {
    Assessment a;
    for (auto& ans : a.answers) {
        ans.verdict = v;
        ans.credit = v.default_credit();
    }
    return a;
}

void set(Assessment& a, int q, Verdict v) {
    auto& ans = a.answer(QuestionId(q));
    ans.credit = v.default_credit();
    ans.verdict = std::move(v);
}

std::vector<Finding> findings_all(Verdict v) {
    std::vector<Finding> out;
    for (int q = 1; q <= kQuestionCount; ++q) {
        Finding f;
        f.question = QuestionId(q);
        f.verdict = v;
        f.credit = v.kind == VerdictKind::needs_human ? 0 : v.default_credit();
        out.push_back(f);
    }
    return out;
}

ChecklistError::Code code_of(auto&& fn) {
    try {
        fn();
    } catch (const ChecklistError& e) {
        return e.code();
    }
    FAIL("no ChecklistError");
    return ChecklistError::Code::bad_document;
}

}  // namespace

TEST_CASE("default checklist") {
    const auto c = default_checklist();
    CHECK(c.weight(QuestionId(1)) == 20);
    CHECK(c.weight(QuestionId(24)) == 15);
    CHECK(c.total_weight() == 315);
    const double expected[] = {20, 15, 20, 5, 15, 10, 10, 10, 10, 10, 20, 15, 10, 10, 10, 15, 20, 15, 15, 10, 5, 5, 10, 15, 10, 5};
    for (int q = 1; q <= kQuestionCount; ++q) CHECK(c.weight(QuestionId(q)) == expected[q - 1]);
    CHECK(c.category_weight(Category::documentation) == 35);
    CHECK(c.category_weight(Category::structure) == 40);
    CHECK(c.category_weight(Category::management) == 50);
    CHECK(c.category_weight(Category::safety) == 35);
    CHECK(c.category_weight(Category::formatting) == 45);
    CHECK(c.category_weight(Category::skills) == 110);
    CHECK(c.question(QuestionId(11)).category == Category::safety);
    CHECK(c.question(QuestionId(16)).category == Category::formatting);
    CHECK(c.question(QuestionId(1)).mode == AnswerMode::manual);
    CHECK(c.question(QuestionId(24)).text == "Does the model have nested functions?");
}

TEST_CASE("question ids") {
    CHECK(QuestionId::parse("Q7")->number() == 7);
    CHECK(QuestionId::parse("q26")->number() == 26);
    CHECK(QuestionId::parse("3")->number() == 3);
    CHECK_FALSE(QuestionId::parse("Q27"));
    CHECK_FALSE(QuestionId::parse("Q"));
    CHECK_FALSE(QuestionId::parse("x1"));
    CHECK(code_of([] { QuestionId(0); }) == ChecklistError::Code::unknown_question);
}

TEST_CASE("weight overrides") {
    const auto path = testsupport::temp_path("weights.json");
    testsupport::spit(path, R"J({"Q24": 30})J");
    const auto c = load_weights(path);
    CHECK(c.weight(QuestionId(24)) == 30);
    CHECK(c.total_weight() == 330);
    CHECK(c.question(QuestionId(24)).category == Category::skills);

    CHECK(code_of([] { parse_weight_overrides(R"J({"Q24": 0})J"); }) == ChecklistError::Code::non_positive_weight);
    CHECK(code_of([] { parse_weight_overrides(R"J({"Q24": -3})J"); }) == ChecklistError::Code::non_positive_weight);
    CHECK(code_of([] { parse_weight_overrides(R"J({"Q99": 3})J"); }) == ChecklistError::Code::unknown_question);
    CHECK(code_of([] { parse_weight_overrides(R"J({"Q2": "x"})J"); }) == ChecklistError::Code::bad_document);
    CHECK(code_of([] { parse_weight_overrides("[1]"); }) == ChecklistError::Code::bad_document);
    CHECK(code_of([] { load_weights("/nonexistent/w.json"); }) == ChecklistError::Code::bad_document);

    // doubling every weight changes no score
    std::map<QuestionId, double> doubled;
    for (const auto& q : default_checklist().questions()) doubled[q.id] = q.weight * 2;
    const auto c2 = default_checklist().with_weights(doubled);
    CHECK(c2.total_weight() == 630);
    Assessment a = all(Verdict::no());
    set(a, 2, Verdict::qualified("User sheets"));
    set(a, 7, Verdict::yes());
    set(a, 24, Verdict::yes());
    const auto s1 = score_overall(a, default_checklist());
    const auto s2 = score_overall(a, c2);
    CHECK(s1.overall == doctest::Approx(s2.overall).epsilon(1e-12));
    for (Category cat : kCategories) CHECK(s1.category_score(cat) == doctest::Approx(s2.category_score(cat)).epsilon(1e-12));
}

TEST_CASE("category scores from published answers") {
    const auto c = default_checklist();
    // Skills: Yes on Q23..Q26
    Assessment skills = all(Verdict::no());
    for (int q : {23, 24, 25, 26}) set(skills, q, Verdict::yes());
    CHECK(score_category(skills, Category::skills, c) == doctest::Approx(400.0 / 110.0));
    CHECK(std::round(score_category(skills, Category::skills, c) * 100) / 100 == 3.64);
    CHECK(format_score(round_score(score_category(skills, Category::skills, c))) == "3.6");

    // Management: Yes on Q6..Q9, N/A on Q10
    Assessment man = all(Verdict::no());
    for (int q : {6, 7, 8, 9}) set(man, q, Verdict::yes());
    set(man, 10, Verdict::na());
    CHECK(score_category(man, Category::management, c) == doctest::Approx(8.0));

    // Documentation: Q1 N/A, Q2 User sheets
    Assessment doc = all(Verdict::no());
    set(doc, 1, Verdict::na());
    set(doc, 2, Verdict::qualified("User sheets"));
    CHECK(std::round(score_category(doc, Category::documentation, c) * 100) / 100 == 4.29);
    CHECK(format_score(round_score(score_category(doc, Category::documentation, c))) == "4.3");
}

TEST_CASE("overall scores") {
    const auto c = default_checklist();
    Assessment chofas = all(Verdict::no());
    for (int q : {3, 4, 5, 6, 7, 8, 9, 10, 23, 24, 25, 26}) set(chofas, q, Verdict::yes());
    const auto s = score_overall(chofas, c);
    CHECK(s.earned_weight == 130);
    CHECK(s.overall == doctest::Approx(1300.0 / 315.0));
    CHECK(format_score(round_score(s.overall)) == "4.1");
    CHECK(s.category_score(Category::structure) == 10);
    CHECK(s.categories.at(Category::skills).earned_weight == 40);

    const auto yes = score_overall(all(Verdict::yes()), c);
    CHECK(yes.overall == 10);
    for (Category cat : kCategories) CHECK(yes.category_score(cat) == 10);
    const auto no = score_overall(all(Verdict::no()), c);
    CHECK(no.overall == 0);
}

TEST_CASE("rounding") {
    CHECK(round_score(4.25) == doctest::Approx(4.3));
    CHECK(round_score(4.249) == doctest::Approx(4.2));
    CHECK(round_score(10) == 10);
    CHECK(round_score(0.05) == doctest::Approx(0.1));
    CHECK(format_score(10) == "10.0");
    CHECK(format_score(0) == "0.0");
    CHECK(format_score(1300.0 / 315.0) == "4.1");
}

TEST_CASE("verdict labels and credits") {
    CHECK(Verdict::yes().label() == "Yes");
    CHECK(Verdict::na().label() == "N/A");
    CHECK(Verdict::qualified("Controls").label() == "Controls");
    CHECK(Verdict::qualified("Not").default_credit() == 0);
    CHECK(Verdict::qualified("In cells").default_credit() == 1);
    CHECK(Verdict::na().default_credit() == 0);
}

TEST_CASE("merging human answers") {
    auto findings = findings_all(Verdict::no());
    findings[0].verdict = Verdict::needs_human();
    findings[16].verdict = Verdict::yes();
    findings[16].credit = 1;
    findings[3].verdict = Verdict::yes();
    findings[3].credit = 1;

    const auto bare = merge_answers(findings, {});
    CHECK(bare.answer(QuestionId(1)).verdict == Verdict::no());
    CHECK(bare.answer(QuestionId(1)).unresolved);
    CHECK(bare.answer(QuestionId(1)).credit == 0);
    CHECK(bare.unresolved() == std::vector<QuestionId>{QuestionId(1)});
    CHECK(bare.answer(QuestionId(17)).verdict == Verdict::yes());
    CHECK(bare.answer(QuestionId(17)).source == AnswerSource::automatic);

    HumanOverlay overlay;
    overlay[QuestionId(1)] = {Verdict::yes(), "design doc on sheet 1", {}};
    overlay[QuestionId(4)] = {Verdict::no(), "", {}};
    const auto merged = merge_answers(findings, overlay);
    CHECK(merged.answer(QuestionId(1)).verdict == Verdict::yes());
    CHECK(merged.answer(QuestionId(1)).source == AnswerSource::human);
    CHECK(merged.answer(QuestionId(1)).credit == 1);
    CHECK_FALSE(merged.answer(QuestionId(1)).unresolved);
    CHECK(merged.answer(QuestionId(4)).verdict == Verdict::no());
    CHECK(merged.answer(QuestionId(4)).source == AnswerSource::human);
    CHECK(merged.unresolved().empty());

    HumanOverlay partial;
    partial[QuestionId(12)] = {Verdict::qualified("Controls"), "", 0.5};
    CHECK(merge_answers(findings, partial).answer(QuestionId(12)).credit == 0.5);
    partial[QuestionId(12)].credit = 1.5;
    CHECK(code_of([&] { merge_answers(findings, partial); }) == ChecklistError::Code::overlay_bad_verdict);

    auto short_list = findings;
    short_list.pop_back();
    CHECK(code_of([&] { merge_answers(short_list, {}); }) == ChecklistError::Code::incomplete_findings);
}

TEST_CASE("overlay files") {
    const auto o = parse_overlay(R"J({"Q1": {"verdict": "Yes", "note": "checked"}, "q2": {"verdict": "Qualified", "text": "User sheets"},
        "Q3": {"verdict": "N/A"}, "Q16": {"verdict": "In cells"}})J");
    CHECK(o.size() == 4);
    CHECK(o.at(QuestionId(1)).verdict == Verdict::yes());
    CHECK(o.at(QuestionId(1)).note == "checked");
    CHECK(o.at(QuestionId(2)).verdict == Verdict::qualified("User sheets"));
    CHECK(o.at(QuestionId(3)).verdict == Verdict::na());
    CHECK(o.at(QuestionId(16)).verdict == Verdict::qualified("In cells"));
    CHECK(parse_overlay(dump_overlay(o)).size() == 4);
    CHECK(dump_overlay(parse_overlay(dump_overlay(o))) == dump_overlay(o));

    CHECK(code_of([] { parse_overlay(R"J({"Q30": {"verdict": "Yes"}})J"); }) == ChecklistError::Code::overlay_unknown_question);
    CHECK(code_of([] { parse_overlay(R"J({"Q1": {"verdict": "Maybe"}})J"); }) == ChecklistError::Code::overlay_bad_verdict);
    CHECK(code_of([] { parse_overlay(R"J({"Q1": {"verdict": "Qualified", "text": "Sometimes"}})J"); }) ==
          ChecklistError::Code::overlay_bad_verdict);
    CHECK(code_of([] { parse_overlay(R"J({"Q1": {"verdict": "Yes", "score": 3}})J"); }) == ChecklistError::Code::overlay_bad_verdict);
    CHECK(code_of([] { parse_overlay("{"); }) == ChecklistError::Code::bad_document);
    CHECK(code_of([] { load_overlay("/nonexistent/answers.json"); }) == ChecklistError::Code::bad_document);
}
