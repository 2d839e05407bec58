#include <fnmatch.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "sheetcheck/cli.hpp"
#include "sheetcheck/report.hpp"
#include "util/strings.hpp"

namespace fs = std::filesystem;

namespace sheetcheck::cli {

namespace {

// User-facing failure that maps to an exit code and a one-line message.
struct Failure {
    int code;
    std::string message;
};

struct CommonOptions {
    std::string weights;
    std::string config;
    std::string semantics;
    std::string format;
    std::string out;
    bool no_timestamp = false;
};

std::string timestamp_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Failure{kExitLoadFailure, "cannot write " + path};
    f << text;
}

Checklist load_checklist(const CommonOptions& o) {
    if (o.weights.empty()) return default_checklist();
    try {
        return load_weights(o.weights);
    } catch (const std::exception& e) {
        throw Failure{kExitLoadFailure, "weights " + o.weights + ": " + e.what()};
    }
}

AnalyzerConfig load_config(const CommonOptions& o) {
    std::string path = o.config;
    if (path.empty()) {
        if (const char* env = std::getenv("SHEETCHECK_CONFIG"); env && *env) path = env;
    }
    AnalyzerConfig cfg;
    if (!path.empty()) {
        try {
            cfg = load_analyzer_config(path);
        } catch (const std::exception& e) {
            throw Failure{kExitLoadFailure, "config " + path + ": " + e.what()};
        }
    }
    if (!o.semantics.empty()) cfg.nesting_semantics = *formula::nesting_semantics_from_string(o.semantics);
    return cfg;
}

Workbook load(const std::string& path) {
    try {
        return load_workbook(path);
    } catch (const std::exception& e) {
        throw Failure{kExitLoadFailure, path + ": " + e.what()};
    }
}

HumanOverlay load_answers(const std::string& path) {
    if (path.empty()) return {};
    try {
        return load_overlay(path);
    } catch (const std::exception& e) {
        throw Failure{kExitLoadFailure, "answers " + path + ": " + e.what()};
    }
}

// Ask for every question the machine could not answer. Returns the answers given.
HumanOverlay prompt_for_answers(const Report& report, std::istream& in, std::ostream& err) {
    HumanOverlay given;
    for (const auto& id : report.assessment.unresolved()) {
        const Question& q = report.checklist.question(id);
        const Answer& a = report.assessment.answer(id);
        err << "\n" << id.str() << ". " << q.text << " [" << util::format_double(q.weight) << ", "
            << to_string(q.category) << "]\n";
        if (!a.note.empty()) err << "  hint: " << a.note << "\n";
        for (const auto& e : a.evidence) {
            const std::string sheet = report.workbook.sheet_names.at(e.sheet_index);
            err << "  - " << (e.is_cell() ? sheet + "!" + a1(GridPos{*e.row, *e.column}) : sheet) << ": " << e.note << "\n";
        }
        while (true) {
            err << "Answer (y/n/na/q:<text>, empty to skip): " << std::flush;
            std::string line;
            if (!std::getline(in, line)) return given;
            const std::string reply(util::trim(line));
            const std::string lower = util::to_lower(reply);
            if (reply.empty()) break;
            if (lower == "y" || lower == "yes") given[id] = {Verdict::yes(), {}, {}};
            else if (lower == "n" || lower == "no") given[id] = {Verdict::no(), {}, {}};
            else if (lower == "na" || lower == "n/a") given[id] = {Verdict::na(), {}, {}};
            else if (util::starts_with_icase(reply, "q:")) {
                const std::string text(util::trim(std::string_view(reply).substr(2)));
                auto known = std::find_if(kQualifiers.begin(), kQualifiers.end(),
                                          [&](std::string_view k) { return util::iequals(k, text); });
                if (known == kQualifiers.end()) {
                    err << "  unknown qualifier; use one of: User sheets, Controls, In cells, Not, Validation\n";
                    continue;
                }
                given[id] = {Verdict::qualified(std::string(*known)), {}, {}};
            } else {
                err << "  please answer y, n, na or q:<text>\n";
                continue;
            }
            break;
        }
    }
    return given;
}

int cmd_assess(const std::string& input, const CommonOptions& o, const std::string& answers, bool interactive,
               const std::string& dump_graph, std::istream& in, std::ostream& out, std::ostream& err) {
    const Checklist checklist = load_checklist(o);
    const AnalyzerConfig cfg = load_config(o);
    HumanOverlay overlay = load_answers(answers);
    const Workbook wb = load(input);

    Report report;
    try {
        report = assess(wb, checklist, cfg, overlay);
    } catch (const std::exception& e) {
        throw Failure{kExitLoadFailure, input + ": " + e.what()};
    }

    if (interactive) {
        HumanOverlay given = prompt_for_answers(report, in, err);
        if (!given.empty()) {
            for (auto& [id, a] : given) overlay[id] = std::move(a);
            report = assess(wb, checklist, cfg, overlay);
        }
        const std::string saved = (o.out.empty() ? input : o.out) + ".answers.json";
        write_output(saved, dump_overlay(overlay), out);
        err << "answers saved to " << saved << "\n";
    }

    if (!dump_graph.empty()) {
        const auto graph = build_graph(wb);
        write_output(dump_graph, to_dot(wb, graph, classify(wb, graph)), out);
    }
    if (!o.no_timestamp) report.timestamp = timestamp_now();
    const ReportFormat fmt = o.format == "json" ? ReportFormat::json : ReportFormat::markdown;
    write_output(o.out, render(report, fmt), out);
    return kExitOk;
}

std::vector<std::string> expand_inputs(const std::vector<std::string>& inputs) {
    std::vector<std::string> out;
    for (const auto& in : inputs) {
        const bool pattern = in.find_first_of("*?[") != std::string::npos;
        if (!pattern || fs::exists(in)) {
            out.push_back(in);
            continue;
        }
        const fs::path p(in);
        const fs::path dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
        std::vector<std::string> matches;
        std::error_code ec;
        for (const auto& entry : fs::directory_iterator(dir, ec)) {
            const std::string name = entry.path().filename().string();
            if (fnmatch(p.filename().string().c_str(), name.c_str(), 0) == 0)
                matches.push_back(p.has_parent_path() ? (dir / name).string() : name);
        }
        std::sort(matches.begin(), matches.end());
        if (matches.empty()) out.push_back(in);  // reported as a load failure later
        out.insert(out.end(), matches.begin(), matches.end());
    }
    return out;
}

int cmd_batch(const std::vector<std::string>& raw_inputs, const CommonOptions& o, unsigned jobs,
              std::ostream& out, std::ostream& err) {
    const Checklist checklist = load_checklist(o);
    const AnalyzerConfig cfg = load_config(o);
    const auto inputs = expand_inputs(raw_inputs);

    std::vector<std::optional<Report>> reports(inputs.size());
    std::vector<std::string> failures(inputs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < inputs.size(); i = next++) {
            try {
                Workbook wb = load_workbook(inputs[i]);
                reports[i] = assess(wb, checklist, cfg);
            } catch (const std::exception& e) {
                failures[i] = inputs[i] + ": " + e.what();
            }
        }
    };
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, std::max<std::size_t>(1, inputs.size()));
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::vector<Report> ok;
    bool failed = false;
    const std::string stamp = o.no_timestamp ? std::string() : timestamp_now();
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (!reports[i]) {
            failed = true;
            err << "sheetcheck: error: " << failures[i] << "\n";
            continue;
        }
        if (!stamp.empty()) reports[i]->timestamp = stamp;
        if (!o.out.empty()) {
            const bool json = o.format == "json";
            const std::string name = fs::path(inputs[i]).stem().string() + (json ? ".report.json" : ".report.md");
            write_output((fs::path(o.out) / name).string(), render(*reports[i], json ? ReportFormat::json : ReportFormat::markdown), out);
        }
        ok.push_back(std::move(*reports[i]));
    }
    if (ok.empty()) return kExitLoadFailure;

    const CorpusTable table = corpus_table(ok);
    std::string text = o.format == "csv" ? render_csv(table) : o.format == "json" ? render_json(table) : render_markdown(table);
    if (o.out.empty()) out << text;
    else {
        const char* ext = o.format == "csv" ? "corpus.csv" : o.format == "json" ? "corpus.json" : "corpus.md";
        write_output((fs::path(o.out) / ext).string(), text, out);
    }
    return failed ? kExitLoadFailure : kExitOk;
}

int cmd_questions(const CommonOptions& o, std::ostream& out) {
    const Checklist checklist = load_checklist(o);
    if (o.format == "json") {
        nlohmann::json doc = nlohmann::json::array();
        for (const auto& q : checklist.questions())
            doc.push_back({{"id", q.id.str()}, {"category", std::string(to_string(q.category))}, {"text", q.text},
                           {"weight", q.weight}, {"mode", std::string(to_string(q.mode))}});
        out << doc.dump(2) << "\n";
        return kExitOk;
    }
    if (o.format == "csv") {
        out << "\"Id\",\"Category\",\"Weight\",\"Mode\",\"Question\"\n";
        for (const auto& q : checklist.questions())
            out << "\"" << q.id.str() << "\",\"" << to_string(q.category) << "\",\"" << util::format_double(q.weight)
                << "\",\"" << to_string(q.mode) << "\",\"" << q.text << "\"\n";
        return kExitOk;
    }
    for (Category c : kCategories) {
        out << to_string(c) << " (" << util::format_double(checklist.category_weight(c)) << ")\n";
        for (const auto& q : checklist.questions()) {
            if (q.category != c) continue;
            out << "  " << q.id.str() << (q.id.number() < 10 ? "  " : " ") << "[" << util::format_double(q.weight)
                << "] " << q.text << (q.mode == AnswerMode::automatic ? "" : " (" + std::string(to_string(q.mode)) + ")")
                << "\n";
        }
    }
    out << "Total weight: " << util::format_double(checklist.total_weight()) << "\n";
    return kExitOk;
}

int cmd_fixture(const std::string& input, const std::string& out_path, std::ostream& out) {
    const Workbook wb = load(input);
    write_output(out_path, dump_fixture(wb), out);
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spreadsheet maintainability checklist", "sheetcheck"};
    app.set_version_flag("--version", std::string(SHEETCHECK_VERSION));
    app.require_subcommand(1);

    CommonOptions common;
    const std::vector<std::string> semantics_names = {"builtin", "operator", "builtin_only", "operators_count"};
    auto add_common = [&](CLI::App* sub, std::vector<std::string> formats) {
        sub->add_option("--weights", common.weights, "JSON weight overrides, e.g. {\"Q24\": 30}");
        sub->add_option("--config", common.config, "analyzer config JSON (default: $SHEETCHECK_CONFIG)");
        sub->add_option("--semantics", common.semantics, "nested-function rule for Q24")->check(CLI::IsMember(semantics_names));
        sub->add_option("--format", common.format, "output format")->check(CLI::IsMember(formats));
        sub->add_option("--out", common.out, "write output here instead of stdout");
        sub->add_flag("--no-timestamp", common.no_timestamp, "omit the generation time");
    };

    std::string input, answers, dump_graph;
    bool interactive = false;
    auto* assess_cmd = app.add_subcommand("assess", "assess one workbook");
    assess_cmd->add_option("workbook", input, ".xlsx, .xlsm or .json fixture")->required();
    add_common(assess_cmd, {"md", "markdown", "json"});
    assess_cmd->add_option("--answers", answers, "human answers JSON");
    assess_cmd->add_flag("--interactive", interactive, "prompt for questions that need a human");
    assess_cmd->add_option("--dump-graph", dump_graph, "write the dependency graph as DOT");

    std::vector<std::string> inputs;
    unsigned jobs = 0;
    auto* batch_cmd = app.add_subcommand("batch", "assess several workbooks and tabulate them");
    batch_cmd->add_option("workbooks", inputs, "files or glob patterns")->required();
    add_common(batch_cmd, {"md", "markdown", "json", "csv"});
    batch_cmd->add_option("--jobs", jobs, "parallel assessments (default: processors)");

    auto* questions_cmd = app.add_subcommand("questions", "list the checklist");
    questions_cmd->add_option("--weights", common.weights, "JSON weight overrides");
    questions_cmd->add_option("--format", common.format, "output format")->check(CLI::IsMember({"text", "json", "csv"}));

    std::string fixture_out;
    auto* fixture_cmd = app.add_subcommand("fixture", "convert a workbook to the JSON fixture format");
    fixture_cmd->add_option("workbook", input, "input workbook")->required();
    fixture_cmd->add_option("--out", fixture_out, "output path");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitBadFlags;
    }

    try {
        if (assess_cmd->parsed()) return cmd_assess(input, common, answers, interactive, dump_graph, in, out, err);
        if (batch_cmd->parsed()) return cmd_batch(inputs, common, jobs, out, err);
        if (questions_cmd->parsed()) return cmd_questions(common, out);
        if (fixture_cmd->parsed()) return cmd_fixture(input, fixture_out, out);
    } catch (const Failure& f) {
        err << "sheetcheck: error: " << f.message << "\n";
        return f.code;
    } catch (const std::exception& e) {
        err << "sheetcheck: error: " << e.what() << "\n";
        return kExitLoadFailure;
    }
    return kExitBadFlags;
}

}  // namespace sheetcheck::cli
