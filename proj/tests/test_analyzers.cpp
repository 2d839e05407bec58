#include <doctest.h>

#include "sheetcheck/analyzers.hpp"
#include "support/common.hpp"
#include "support/generators.hpp"

using namespace sheetcheck;
using testsupport::fixture;

namespace {

struct Run {
    Workbook wb;
    DependencyGraph graph;
    CellClassMap classes;
    AnalyzerConfig cfg;

    explicit Run(const std::string& json, AnalyzerConfig c = {})
        : wb(fixture(json)), graph(build_graph(wb)), classes(classify(wb, graph)), cfg(std::move(c)) {}

    Finding operator()(int q) const { return evaluate(q, wb, graph, classes, cfg); }
};

std::string one_sheet(const std::string& cells, const std::string& extra = "") {
    return R"J({"sheets": [{"name": "Model", "cells": {)J" + cells + "}" + extra + "}]}";
}

CellAddress at(std::uint32_t sheet, const char* a1text) {
    const auto p = *parse_a1(a1text);
    return {sheet, p.column, p.row};
}

}  // namespace

TEST_CASE("Q24 follows the configured nesting semantics") {
    const std::string wb = one_sheet(R"J("F14": {"v": 100}, "F16": {"v": 0.2}, "F18": {"f": "=F14*(1-F16)"})J");
    const Run builtin(wb);
    CHECK(builtin(24).verdict == Verdict::no());
    AnalyzerConfig op;
    op.nesting_semantics = formula::NestingSemantics::operators_count;
    const Run ops(wb, op);
    const auto f = ops(24);
    CHECK(f.verdict == Verdict::yes());
    REQUIRE(f.evidence.size() == 1);
    CHECK(f.evidence[0].row == 18u);
    CHECK(f.evidence[0].note.find("depth 2") != std::string::npos);

    CHECK(Run(one_sheet(R"J("A1": {"f": "=IF(SUM(B1:B3)>0,1,0)"})J"))(24).verdict == Verdict::yes());
}

TEST_CASE("Q24 under operator semantics is never stricter than builtin") {
    testsupport::Rng rng(24);
    testsupport::FormulaGenerator gen(rng);
    AnalyzerConfig op;
    op.nesting_semantics = formula::NestingSemantics::operators_count;
    for (int i = 0; i < 100; ++i) {
        const std::string text = formula::print_canonical(gen.generate(5));
        std::string escaped;
        for (char c : text) {
            if (c == '"' || c == '\\') escaped += '\\';
            escaped += c;
        }
        const std::string wb = one_sheet("\"A1\": {\"f\": \"" + escaped + "\"}");
        CAPTURE(text);
        if (Run(wb)(24).verdict == Verdict::yes()) CHECK(Run(wb, op)(24).verdict == Verdict::yes());
    }
}

TEST_CASE("Q11 normalization") {
    const Run two(one_sheet(R"J("A1": {"f": "=0.21*C5"}, "A2": {"f": "=0.21*C6"}, "A3": {"f": "=C7*100"}, "A4": {"f": "=C8*100"})J"));
    auto groups = detect_normalization_violations(two.wb, two.cfg);
    REQUIRE(groups.size() == 1);
    CHECK(groups[0].value == 0.21);
    CHECK(groups[0].cells == std::vector<CellAddress>{at(0, "A1"), at(0, "A2")});
    const auto f = two(11);
    CHECK(f.verdict == Verdict::no());
    CHECK(f.evidence.size() == 2);
    CHECK(f.evidence[0].note.find("0.21") != std::string::npos);

    // one formula repeating a literal is not a repeat across formulas
    CHECK(Run(one_sheet(R"J("A1": {"f": "=0.21*C5 + 0.21*C6"})J"))(11).verdict == Verdict::yes());

    AnalyzerConfig strict;
    strict.literal_exemptions = {};
    CHECK(detect_normalization_violations(two.wb, strict).size() == 2);
    strict.normalization_min_repeats = 3;
    CHECK(detect_normalization_violations(two.wb, strict).empty());

    // larger groups first
    const Run three(one_sheet(R"J("A1": {"f": "=B1*7"}, "A2": {"f": "=B2*7"}, "A3": {"f": "=B3*7"}, "A4": {"f": "=B4*3"}, "A5": {"f": "=B5*3"})J"));
    const auto g3 = detect_normalization_violations(three.wb, three.cfg);
    REQUIRE(g3.size() == 2);
    CHECK(g3[0].value == 7);
    CHECK(g3[1].value == 3);
}

TEST_CASE("Q11 is monotone: adding formulas never turns No into Yes") {
    testsupport::Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        std::string cells;
        bool first = true;
        std::vector<Finding> seen;
        for (int row = 1; row <= 8; ++row) {
            cells += (first ? "" : ", ") + std::string("\"A") + std::to_string(row) + "\": {\"f\": \"=B" +
                     std::to_string(row) + "*" + std::to_string(rng.between(2, 6)) + "\"}";
            first = false;
            seen.push_back(Run(one_sheet(cells))(11));
        }
        for (std::size_t i = 1; i < seen.size(); ++i)
            if (seen[i - 1].verdict == Verdict::no()) CHECK(seen[i].verdict == Verdict::no());
    }
}

TEST_CASE("format consistency") {
    const std::string styles = R"J(, "styles": [{}, {"fill": "#FFFF00FF"}, {"fill": "#FFFF00FF"}])J";
    std::string ten, half;
    for (int r = 1; r <= 10; ++r) {
        ten += (r > 1 ? ", " : "") + std::string("\"A") + std::to_string(r) + "\": {\"v\": 1, \"style\": 1}";
        half += (r > 1 ? ", " : "") + std::string("\"A") + std::to_string(r) + "\": {\"v\": 1, \"style\": " + (r <= 5 ? "1" : "0") + "}";
    }
    auto wb_of = [&](const std::string& cells) {
        return fixture(R"J({"sheets": [{"name": "Model", "cells": {)J" + cells + "}}]" + styles + "}");
    };
    std::vector<CellAddress> col;
    for (std::uint32_t r = 1; r <= 10; ++r) col.push_back({0, 1, r});

    const auto all = format_consistency(wb_of(ten), col, 0.9);
    CHECK(all.dominant_share == 1.0);
    CHECK(all.verdict == Verdict::yes());
    CHECK(all.off_style.empty());

    const auto split = format_consistency(wb_of(half), col, 0.9);
    CHECK(split.dominant_share == 0.5);
    CHECK(split.verdict == Verdict::no());
    CHECK(split.off_style.size() == 5);
    // ties go to the lowest style id: style 0 dominates, so A1..A5 are off-style
    CHECK(split.off_style.front() == CellAddress{0, 1, 1});

    CHECK(format_consistency(wb_of(ten), {}, 0.9).verdict == Verdict::na());

    // equal signatures under different ids count as one style
    std::string mixed;
    for (int r = 1; r <= 10; ++r)
        mixed += (r > 1 ? ", " : "") + std::string("\"A") + std::to_string(r) + "\": {\"v\": 1, \"style\": " + (r % 2 ? "1" : "2") + "}";
    CHECK(format_consistency(wb_of(mixed), col, 0.9).dominant_share == 1.0);
}

TEST_CASE("sheet naming") {
    const AnalyzerConfig cfg;
    auto naming = [&](std::vector<std::string> names) {
        std::string json = R"J({"sheets": [)J";
        for (std::size_t i = 0; i < names.size(); ++i) json += (i ? ", " : "") + std::string("{\"name\": \"") + names[i] + "\"}";
        return sheet_naming(fixture(json + "]}"), cfg);
    };
    const auto d = naming({"Sheet1", "Sheet2"});
    CHECK(d.custom_fraction == 0.0);
    CHECK(d.verdict == Verdict::no());
    const auto c = naming({"Inputs", "Results"});
    CHECK(c.custom_fraction == 1.0);
    CHECK(c.verdict == Verdict::yes());
    const auto m = naming({"sheet 13", "Costs"});
    CHECK(m.custom_fraction == 0.5);
    CHECK(m.verdict == Verdict::no());
    CHECK(m.default_named == std::vector<std::uint32_t>{0});
    CHECK(naming({}).verdict == Verdict::na());
}

TEST_CASE("structure rules") {
    // inputs and formulas share one sheet
    const Run mixed(one_sheet(R"J("A1": {"v": "Price"}, "B1": {"v": 10}, "A2": {"v": "Qty"}, "B2": {"v": 3},
        "C1": {"f": "=B1*B2"}, "D1": {"f": "=C1*1.2"})J"));
    CHECK(mixed(5).verdict == Verdict::no());
    CHECK(mixed(6).verdict == Verdict::yes());
    CHECK(mixed(7).verdict == Verdict::yes());
    CHECK(mixed(10).verdict == Verdict::yes());

    const Run split(R"J({"sheets": [
        {"name": "Inputs", "cells": {"A1": {"v": "Price"}, "B1": {"v": 10}, "A3": {"v": "Qty"}, "B3": {"v": 3}}},
        {"name": "Results", "cells": {"A1": {"f": "=Inputs!B1*Inputs!B3"}}}]})J");
    CHECK(split(5).verdict == Verdict::yes());
    CHECK(split(6).verdict == Verdict::no());  // two isolated inputs
    CHECK(split(4).verdict == Verdict::yes());

    const Run none(one_sheet(R"J("A1": {"v": "just text"})J"));
    CHECK(none(6).verdict == Verdict::na());
    CHECK(none(10).verdict == Verdict::na());
}

TEST_CASE("Q9 valid ranges") {
    CHECK(Run(one_sheet(R"J("A1": {"v": 1}, "B1": {"f": "=SUM(A1:A3)"})J"))(9).verdict == Verdict::yes());
    CHECK(Run(one_sheet(R"J("A1": {"f": "=#REF!+1"})J"))(9).verdict == Verdict::no());
    CHECK(Run(one_sheet(R"J("A1": {"f": "=SUM(A3:A1)"})J"))(9).verdict == Verdict::no());
    CHECK(Run(one_sheet(R"J("A1": {"f": "=Gone!B2"})J"))(9).verdict == Verdict::no());
    CHECK(Run(one_sheet(R"J("A1": {"f": "=SUM(A1:A4)"})J"))(9).verdict == Verdict::no());
}

TEST_CASE("manual questions need a human") {
    const Run r(one_sheet(R"J("A1": {"v": 1})J"));
    for (int q : {1, 3, 8}) {
        CAPTURE(q);
        const auto f = r(q);
        CHECK(f.verdict == Verdict::needs_human());
        CHECK(f.credit == 0);
        CHECK(f.confidence == Confidence::low);
    }
    CHECK(r(2).verdict == Verdict::needs_human());

    std::string doc;
    for (int i = 1; i <= 12; ++i) doc += (i > 1 ? ", " : "") + std::string("\"A") + std::to_string(i) + "\": {\"v\": \"line\"}";
    const Run with_doc(R"J({"sheets": [{"name": "Read me", "cells": {)J" + doc + R"J(}}, {"name": "Model", "cells": {"A1": {"v": 1}}}]})J");
    const auto q2 = with_doc(2);
    CHECK(q2.verdict == Verdict::qualified("User sheets"));
    CHECK(q2.credit == 1);
    REQUIRE_FALSE(q2.evidence.empty());
    CHECK_FALSE(q2.evidence[0].is_cell());
}

TEST_CASE("safety and formatting rules") {
    const Run controls(one_sheet(R"J("A1": {"v": 1})J", R"J(, "controls": 2)J"));
    CHECK(controls(12).verdict == Verdict::qualified("Controls"));
    const Run val(one_sheet(R"J("A1": {"v": 1})J", R"J(, "validations": [{"range": "A1", "kind": "whole"}])J"));
    CHECK(val(12).verdict == Verdict::qualified("Validation"));
    CHECK(Run(one_sheet(R"J("A1": {"v": 1})J"))(12).verdict == Verdict::no());

    const Run help(one_sheet(R"J("A1": {"v": 1, "comment": "enter the rate"}, "B1": {"f": "=A1"})J"));
    CHECK(help(16).verdict == Verdict::qualified("In cells"));
    const auto not_supported = Run(one_sheet(R"J("A1": {"v": 1}, "B1": {"f": "=A1"})J"))(16);
    CHECK(not_supported.verdict == Verdict::qualified("Not"));
    CHECK(not_supported.credit == 0);

    CHECK(Run(one_sheet(R"J("A1": {"f": "=A2", "array": true})J"))(17).verdict == Verdict::yes());
    CHECK(Run(one_sheet(R"J("A1": {"v": 1}, "B1": {"f": "=A1"})J", R"J(, "panes": {"rows": 1})J"))(18).verdict == Verdict::yes());
    CHECK(Run(one_sheet(R"J("A1": {"v": 1}, "B1": {"f": "=A1"})J"))(18).verdict == Verdict::no());
}

TEST_CASE("name rules") {
    const std::string base = R"J({"sheets": [{"name": "Model", "cells": {
        "A1": {"v": 0.2}, "A2": {"v": 0.1}, "A3": {"v": 5}, "A4": {"v": 6},
        "B1": {"f": "=rate_tax*rate_fee"}, "B2": {"f": "=qty_in+qty_out"}, "B3": {"f": "=A3*2"}}}],
        "names": {"rate_tax": "Model!$A$1", "rate_fee": "Model!$A$2", "qty_in": "Model!$A$3", "qty_out": "Model!$A$4"}})J";
    const Run r(base);
    CHECK(r(19).verdict == Verdict::yes());
    CHECK(r(20).verdict == Verdict::yes());
    CHECK(r(21).verdict == Verdict::yes());
    CHECK(r(22).verdict == Verdict::no());  // B3 reaches A3 directly
    CHECK(r(26).verdict == Verdict::yes());

    const Run unnamed(one_sheet(R"J("A1": {"v": 1}, "B1": {"f": "=A1"})J"));
    CHECK(unnamed(19).verdict == Verdict::no());
    for (int q : {20, 21, 22}) CHECK(unnamed(q).verdict == Verdict::na());
    CHECK(unnamed(26).verdict == Verdict::no());
    CHECK(unnamed(25).verdict == Verdict::yes());
}

TEST_CASE("Q23 complex functions") {
    CHECK(Run(one_sheet(R"J("A1": {"f": "=VLOOKUP(B1,C1:D4,2,FALSE)"})J"))(23).verdict == Verdict::yes());
    CHECK(Run(one_sheet(R"J("A1": {"f": "=SUM(B1:B4)"})J"))(23).verdict == Verdict::no());
}

TEST_CASE("evidence points at real cells and respects the cap") {
    std::string cells;
    for (int r = 1; r <= 40; ++r)
        cells += (r > 1 ? ", " : "") + std::string("\"A") + std::to_string(r) + "\": {\"f\": \"=IF(SUM(B1:B2)>0,0.5,2.5)\"}";
    AnalyzerConfig cfg;
    cfg.evidence_limit = 20;
    const Run r(one_sheet(cells), cfg);
    const AnalysisContext ctx(r.wb, r.graph, r.classes, r.cfg);
    const auto all = evaluate_all(ctx);
    REQUIRE(all.size() == 26);
    for (const auto& f : all) {
        CAPTURE(f.question.str());
        CHECK(f.evidence.size() <= 20);
        for (const auto& e : f.evidence) {
            REQUIRE(e.sheet_index < r.wb.sheets.size());
            if (e.is_cell()) CHECK(r.wb.find({e.sheet_index, *e.column, *e.row}) != nullptr);
        }
    }
    CHECK(all[23].evidence.size() == 20);
    CHECK(all[23].omitted_evidence == 20);
    CHECK(all[10].verdict == Verdict::no());
}

TEST_CASE("evaluate rejects unknown questions") {
    const Run r(one_sheet(R"J("A1": {"v": 1})J"));
    CHECK_THROWS_AS(r(0), ChecklistError);
    CHECK_THROWS_AS(r(27), ChecklistError);
}

TEST_CASE("analyzer config") {
    const auto cfg = parse_analyzer_config(R"J({"nesting_semantics": "operators_count", "complex_function_list": ["xlookup"],
        "evidence_limit": 5})J");
    CHECK(cfg.nesting_semantics == formula::NestingSemantics::operators_count);
    CHECK(cfg.complex_function_list == std::set<std::string>{"XLOOKUP"});
    CHECK(cfg.evidence_limit == 5);
    CHECK(parse_analyzer_config(cfg.to_json()).to_json() == cfg.to_json());

    CHECK_THROWS_AS(parse_analyzer_config(R"J({"bogus": 1})J"), ConfigError);
    CHECK_THROWS_AS(parse_analyzer_config(R"J({"format_consistency_threshold": 0})J"), ConfigError);
    CHECK_THROWS_AS(parse_analyzer_config(R"J({"naming_threshold": 1.5})J"), ConfigError);
    CHECK_THROWS_AS(parse_analyzer_config(R"J({"complex_function_list": []})J"), ConfigError);
    CHECK_THROWS_AS(parse_analyzer_config(R"J({"default_sheet_name_pattern": "("})J"), ConfigError);
    CHECK_THROWS_AS(parse_analyzer_config("not json"), ConfigError);
    CHECK_THROWS_AS(load_analyzer_config("/nonexistent/config.json"), ConfigError);
}
