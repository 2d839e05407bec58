#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "sheetcheck/checklist.hpp"
#include "sheetcheck/cli.hpp"
#include "support/common.hpp"

using namespace sheetcheck;
using testsupport::fixture_path;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args, const std::string& input = "") {
    std::istringstream in(input);
    std::ostringstream out, err;
    const int code = cli::run(args, in, out, err);
    return {code, out.str(), err.str()};
}

std::string discount_workbook() {
    const auto path = testsupport::temp_path("discount.json");
    testsupport::spit(path, R"J({"sheets": [{"name": "Model", "cells": {
        "F14": {"v": 100}, "F16": {"v": 0.2}, "F18": {"f": "=F14*(1-F16)"}}}]})J");
    return path;
}

std::string q24_verdict(const std::string& json) { return nlohmann::json::parse(json)["answers"][23]["verdict"]; }

}  // namespace

TEST_CASE("assess renders markdown by default") {
    const auto r = run({"assess", fixture_path("clean.json"), "--no-timestamp"});
    CHECK(r.code == 0);
    CHECK(r.out.find("# Maintainability report") != std::string::npos);
    CHECK(r.out.find("Overall: 8.4") != std::string::npos);
    CHECK(r.err.empty());
    CHECK(run({"assess", fixture_path("clean.json"), "--no-timestamp"}).out == r.out);
    CHECK(run({"assess", fixture_path("clean.json")}).out.find("Generated") != std::string::npos);
}

TEST_CASE("semantics flag switches Q24") {
    const auto wb = discount_workbook();
    CHECK(q24_verdict(run({"assess", wb, "--format", "json", "--semantics", "builtin"}).out) == "No");
    CHECK(q24_verdict(run({"assess", wb, "--format", "json", "--semantics", "operator"}).out) == "Yes");
    CHECK(q24_verdict(run({"assess", wb, "--format", "json"}).out) == "No");
}

TEST_CASE("exit codes") {
    const auto missing = run({"assess", "/nonexistent/model.xlsx"});
    CHECK(missing.code == cli::kExitLoadFailure);
    CHECK(missing.err.rfind("sheetcheck: error: ", 0) == 0);
    CHECK(std::count(missing.err.begin(), missing.err.end(), '\n') == 1);

    CHECK(run({"assess", fixture_path("clean.json"), "--format", "csv"}).code == cli::kExitBadFlags);
    CHECK(run({"assess", fixture_path("clean.json"), "--semantics", "both"}).code == cli::kExitBadFlags);
    CHECK(run({"bogus"}).code == cli::kExitBadFlags);
    CHECK(run({}).code == cli::kExitBadFlags);
    CHECK(run({"batch", fixture_path("clean.json"), "--interactive"}).code == cli::kExitBadFlags);
    CHECK(run({"--help"}).code == 0);

    const auto bad_weights = testsupport::temp_path("w.json");
    testsupport::spit(bad_weights, R"J({"Q24": 0})J");
    CHECK(run({"assess", fixture_path("clean.json"), "--weights", bad_weights}).code == cli::kExitLoadFailure);
    const auto broken = testsupport::temp_path("broken.json");
    testsupport::spit(broken, "{\"sheets\": [");
    CHECK(run({"assess", broken}).code == cli::kExitLoadFailure);
}

TEST_CASE("weights and config files") {
    const auto w = testsupport::temp_path("weights.json");
    testsupport::spit(w, R"J({"Q24": 30})J");
    const auto q = run({"questions", "--weights", w});
    CHECK(q.code == 0);
    CHECK(q.out.find("Total weight: 330") != std::string::npos);
    const auto doc = nlohmann::json::parse(run({"questions", "--format", "json"}).out);
    CHECK(doc.size() == 26);
    CHECK(doc[0]["weight"] == 20);
    const auto csv = run({"questions", "--format", "csv"}).out;
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 27);

    const auto cfg = testsupport::temp_path("config.json");
    testsupport::spit(cfg, R"J({"nesting_semantics": "operators_count"})J");
    const auto wb = discount_workbook();
    CHECK(q24_verdict(run({"assess", wb, "--format", "json", "--config", cfg}).out) == "Yes");
    // an explicit flag beats the config file
    CHECK(q24_verdict(run({"assess", wb, "--format", "json", "--config", cfg, "--semantics", "builtin"}).out) == "No");

    ::setenv("SHEETCHECK_CONFIG", cfg.c_str(), 1);
    CHECK(q24_verdict(run({"assess", wb, "--format", "json"}).out) == "Yes");
    ::unsetenv("SHEETCHECK_CONFIG");

    const auto bad = testsupport::temp_path("bad-config.json");
    testsupport::spit(bad, R"J({"evidence_limit": 0})J");
    CHECK(run({"assess", wb, "--config", bad}).code == cli::kExitLoadFailure);
}

TEST_CASE("answers overlay") {
    const auto answers = testsupport::temp_path("answers.json");
    testsupport::spit(answers, R"J({"Q1": {"verdict": "Yes"}, "Q3": {"verdict": "Yes"}, "Q8": {"verdict": "Yes"}})J");
    const auto r = run({"assess", fixture_path("clean.json"), "--answers", answers, "--format", "json"});
    CHECK(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["unresolved"].empty());
    CHECK(doc["answers"][0]["source"] == "human");

    const auto bad = testsupport::temp_path("bad-answers.json");
    testsupport::spit(bad, R"J({"Q1": {"verdict": "Perhaps"}})J");
    CHECK(run({"assess", fixture_path("clean.json"), "--answers", bad}).code == cli::kExitLoadFailure);
}

TEST_CASE("interactive answers are saved for replay") {
    const auto out = testsupport::temp_path("clean-report.md");
    // Q1 yes, Q3 qualifier that is unknown then no, Q8 skipped
    const auto r = run({"assess", fixture_path("clean.json"), "--interactive", "--out", out, "--no-timestamp"},
                       "y\nq:Sometimes\nn\n\n");
    CHECK(r.code == 0);
    CHECK(r.err.find("Q1. Is there any technical description available?") != std::string::npos);
    CHECK(r.err.find("unknown qualifier") != std::string::npos);
    const auto saved = out + ".answers.json";
    REQUIRE(std::filesystem::exists(saved));
    const auto overlay = load_overlay(saved);
    CHECK(overlay.size() == 2);
    CHECK(overlay.at(QuestionId(1)).verdict == Verdict::yes());
    CHECK(overlay.at(QuestionId(3)).verdict == Verdict::no());

    const auto replay = testsupport::temp_path("replay.md");
    CHECK(run({"assess", fixture_path("clean.json"), "--answers", saved, "--out", replay, "--no-timestamp"}).code == 0);
    CHECK(testsupport::slurp(replay) == testsupport::slurp(out));
}

TEST_CASE("batch") {
    const auto csv = run({"batch", fixture_path("clean.json"), fixture_path("messy.json"), "--format", "csv", "--no-timestamp"});
    CHECK(csv.code == 0);
    CHECK(csv.out.rfind("\"Item\",\"clean\",\"messy\"\n", 0) == 0);

    // glob expansion, sorted
    const auto glob = run({"batch", fixture_path("*.json"), "--format", "csv", "--jobs", "2"});
    CHECK(glob.code == 0);
    CHECK(glob.out.rfind("\"Item\",\"clean\",\"messy\"", 0) == 0);

    // one failure does not stop the others
    const auto partial = run({"batch", fixture_path("clean.json"), "/nonexistent/x.xlsx", fixture_path("messy.json"), "--format", "csv"});
    CHECK(partial.code == cli::kExitLoadFailure);
    CHECK(partial.out.rfind("\"Item\",\"clean\",\"messy\"", 0) == 0);
    CHECK(partial.err.find("/nonexistent/x.xlsx") != std::string::npos);

    const auto dir = testsupport::temp_path("batch-out");
    std::filesystem::create_directories(dir);
    CHECK(run({"batch", fixture_path("clean.json"), fixture_path("messy.json"), "--out", dir, "--format", "json"}).code == 0);
    CHECK(std::filesystem::exists(dir + "/clean.report.json"));
    CHECK(std::filesystem::exists(dir + "/messy.report.json"));
    CHECK(std::filesystem::exists(dir + "/corpus.json"));
}

TEST_CASE("dump graph and fixture conversion") {
    const auto dot = testsupport::temp_path("graph.dot");
    CHECK(run({"assess", fixture_path("clean.json"), "--dump-graph", dot, "--no-timestamp"}).code == 0);
    CHECK(testsupport::slurp(dot).rfind("digraph", 0) == 0);

    const auto converted = testsupport::temp_path("clean-copy.json");
    CHECK(run({"fixture", fixture_path("clean.json"), "--out", converted}).code == 0);
    CHECK(load_fixture(converted) == load_fixture(fixture_path("clean.json")));
    const auto piped = run({"fixture", fixture_path("messy.json")});
    CHECK(load_fixture_text(piped.out) == load_fixture(fixture_path("messy.json")));
}
