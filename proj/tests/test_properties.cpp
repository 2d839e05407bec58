#include <doctest.h>

#include <cmath>

#include "sheetcheck/report.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace sheetcheck;
using testsupport::Rng;

TEST_CASE("generated formulas round-trip through the printer") {
    Rng rng(20240501);
    testsupport::FormulaGenerator gen(rng);
    for (int i = 0; i < 2000; ++i) {
        const formula::Node ast = gen.generate(8);
        const std::string text = formula::print_canonical(ast);
        CAPTURE(text);
        CHECK(testsupport::tree_depth(ast) <= 8);
        formula::Node back;
        REQUIRE_NOTHROW(back = formula::parse(text));
        CHECK(back == ast);
        CHECK(formula::print_canonical(back) == text);
    }
}

TEST_CASE("nesting depth agrees with path enumeration") {
    Rng rng(7);
    testsupport::FormulaGenerator gen(rng);
    for (int i = 0; i < 2000; ++i) {
        const auto ast = gen.generate(8);
        CAPTURE(formula::print_canonical(ast));
        const auto builtin = formula::nesting_depth(ast, formula::NestingSemantics::builtin_only);
        const auto ops = formula::nesting_depth(ast, formula::NestingSemantics::operators_count);
        CHECK(builtin == testsupport::brute_force_depth(ast, false));
        CHECK(ops == testsupport::brute_force_depth(ast, true));
        CHECK(ops >= builtin);
    }
}

TEST_CASE("references are the reference leaves") {
    Rng rng(99);
    testsupport::FormulaGenerator gen(rng);
    for (int i = 0; i < 500; ++i) {
        const auto ast = gen.generate(6);
        std::size_t leaves = 0;
        formula::walk(ast, [&](const formula::Node& n) {
            leaves += n.is<formula::CellRef>() || n.is<formula::RangeRef>() || n.is<formula::NameRef>();
        });
        CHECK(formula::references(ast).size() == leaves);
    }
}

TEST_CASE("classification matches a text-scanning oracle") {
    Rng rng(31337);
    for (int i = 0; i < 300; ++i) {
        const auto random = testsupport::random_workbook(rng);
        CAPTURE(random.fixture_json);
        const Workbook wb = load_fixture_text(random.fixture_json);
        const auto graph = build_graph(wb);
        CHECK(graph.diagnostics.empty());
        CHECK(classify(wb, graph) == testsupport::regex_classify(wb));
    }
}

TEST_CASE("classes partition the stored cells") {
    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        const Workbook wb = load_fixture_text(testsupport::random_workbook(rng).fixture_json);
        const auto cls = classify(wb, build_graph(wb));
        CHECK(cls.size() == wb.cell_count());
    }
}

TEST_CASE("scoring properties over random assessments") {
    Rng rng(42);
    for (int i = 0; i < 2000; ++i) {
        const Checklist c = rng.chance(0.5) ? default_checklist() : testsupport::random_weights(rng);
        Assessment a = testsupport::random_assessment(rng);
        const ScoreCard s = score_overall(a, c);

        // bounds
        CHECK(s.overall >= 0);
        CHECK(s.overall <= 10);
        // aggregation identity
        double sum = 0;
        for (Category cat : kCategories) {
            CHECK(s.category_score(cat) >= 0);
            CHECK(s.category_score(cat) <= 10);
            CHECK(s.category_score(cat) == score_category(a, cat, c));
            sum += s.category_score(cat) * c.category_weight(cat);
        }
        CHECK(s.overall * c.total_weight() == doctest::Approx(sum).epsilon(1e-12));

        // scale invariance
        const double k = rng.real(0.1, 50);
        std::map<QuestionId, double> scaled;
        for (const auto& q : c.questions()) scaled[q.id] = q.weight * k;
        const ScoreCard sk = score_overall(a, c.with_weights(scaled));
        CHECK(sk.overall == doctest::Approx(s.overall).epsilon(1e-12));

        // N/A counts the same as No
        Assessment swapped = a;
        for (auto& ans : swapped.answers) {
            if (ans.verdict.kind == VerdictKind::no) ans.verdict = Verdict::na();
            else if (ans.verdict.kind == VerdictKind::not_applicable) ans.verdict = Verdict::no();
        }
        CHECK(score_overall(swapped, c).overall == s.overall);

        // raising one credit never lowers a score
        Assessment raised = a;
        auto& pick = raised.answers[std::size_t(rng.between(0, kQuestionCount - 1))];
        pick.credit = std::min(1.0, pick.credit + rng.real(0, 1));
        const ScoreCard sr = score_overall(raised, c);
        CHECK(sr.overall >= s.overall);
        for (Category cat : kCategories) CHECK(sr.category_score(cat) >= s.category_score(cat));
    }
}

TEST_CASE("all-yes scores 10 and all-no scores 0 for any weights") {
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        const Checklist c = testsupport::random_weights(rng);
        Assessment yes, no;
        for (auto& a : yes.answers) {
            a.verdict = Verdict::yes();
            a.credit = 1;
        }
        CHECK(score_overall(yes, c).overall == doctest::Approx(10));
        CHECK(score_overall(no, c).overall == 0);
    }
}

TEST_CASE("assessment is deterministic on random workbooks") {
    Rng rng(8);
    for (int i = 0; i < 30; ++i) {
        const Workbook wb = load_fixture_text(testsupport::random_workbook(rng).fixture_json);
        const auto a = render_json(assess(wb, default_checklist(), {}));
        const auto b = render_json(assess(wb, default_checklist(), {}));
        CHECK(a == b);
        const auto back = parse_report_json(a);
        CHECK(render_json(back) == a);
    }
}
