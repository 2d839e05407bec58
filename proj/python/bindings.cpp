#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <filesystem>
#include <sstream>

#include "sheetcheck/cli.hpp"
#include "sheetcheck/report.hpp"

namespace py = pybind11;
namespace fs = std::filesystem;
using namespace sheetcheck;

namespace {

struct Settings {
    Checklist checklist = default_checklist();
    AnalyzerConfig config;
};

Settings settings(const std::optional<std::string>& weights, const std::optional<std::string>& config,
                  const std::optional<std::string>& semantics) {
    Settings s;
    if (weights) s.checklist = load_weights(*weights);
    if (config) s.config = load_analyzer_config(*config);
    if (semantics) {
        auto sem = formula::nesting_semantics_from_string(*semantics);
        if (!sem) throw py::value_error("unknown semantics '" + *semantics + "'");
        s.config.nesting_semantics = *sem;
    }
    return s;
}

Report assess_path(const std::string& path, const std::optional<std::string>& weights,
                   const std::optional<std::string>& config, const std::optional<std::string>& semantics,
                   const std::optional<std::string>& answers) {
    const Settings s = settings(weights, config, semantics);
    const HumanOverlay overlay = answers ? load_overlay(*answers) : HumanOverlay{};
    const Workbook wb = load_workbook(path);
    py::gil_scoped_release release;
    return assess(wb, s.checklist, s.config, overlay);
}

}  // namespace

PYBIND11_MODULE(_sheetcheck, m) {
    m.doc() = "Spreadsheet maintainability checklist (native core)";
    m.attr("__version__") = SHEETCHECK_VERSION;

    auto base = py::register_exception<LoadError>(m, "LoadError", PyExc_ValueError);
    py::register_exception<formula::ParseError>(m, "FormulaError", PyExc_ValueError);
    py::register_exception<ChecklistError>(m, "ChecklistError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ReportError>(m, "ReportError", PyExc_ValueError);
    (void)base;

    // formulas
    m.def("canonical_formula", [](const std::string& text) { return formula::print_canonical(formula::parse(text)); },
          py::arg("text"), "Parse a formula and print it in canonical form.");
    m.def(
        "nesting_depth",
        [](const std::string& text, const std::string& semantics) {
            auto sem = formula::nesting_semantics_from_string(semantics);
            if (!sem) throw py::value_error("unknown semantics '" + semantics + "'");
            return formula::nesting_depth(formula::parse(text), *sem);
        },
        py::arg("text"), py::arg("semantics") = "builtin");
    m.def("formula_references", [](const std::string& text) {
        std::vector<std::string> out;
        for (const auto& r : formula::references(formula::parse(text))) out.push_back(formula::reference_text(r));
        return out;
    }, py::arg("text"));
    m.def("numeric_literals", [](const std::string& text) {
        std::vector<double> out;
        for (const auto& l : formula::numeric_literals(formula::parse(text))) out.push_back(l.value);
        return out;
    }, py::arg("text"));

    // workbooks
    m.def("workbook_to_fixture", [](const fs::path& path) { return dump_fixture(load_workbook(path.string())); }, py::arg("path"));
    m.def("classify_cells", [](const fs::path& path) {
        const Workbook wb = load_workbook(path.string());
        const auto classes = classify(wb, build_graph(wb));
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& [addr, cls] : classes) out.emplace_back(wb.describe(addr), std::string(to_string(cls)));
        return out;
    }, py::arg("path"), "Cell class for every stored cell, in address order.");
    m.def("dependency_dot", [](const fs::path& path) {
        const Workbook wb = load_workbook(path.string());
        const auto g = build_graph(wb);
        return to_dot(wb, g, classify(wb, g));
    }, py::arg("path"));

    // assessment
    m.def(
        "assess_report",
        [](const fs::path& path, const std::string& format, std::optional<std::string> weights,
           std::optional<std::string> config, std::optional<std::string> semantics, std::optional<std::string> answers) {
            const Report r = assess_path(path.string(), weights, config, semantics, answers);
            if (format == "json") return render_json(r);
            if (format == "md" || format == "markdown") return render_markdown(r);
            throw py::value_error("format must be 'json' or 'md'");
        },
        py::arg("path"), py::arg("format") = "json", py::kw_only(), py::arg("weights") = py::none(),
        py::arg("config") = py::none(), py::arg("semantics") = py::none(), py::arg("answers") = py::none());
    m.def(
        "corpus_report",
        [](const std::vector<fs::path>& paths, const std::string& format, std::optional<std::string> weights,
           std::optional<std::string> config, std::optional<std::string> semantics) {
            std::vector<Report> reports;
            for (const auto& p : paths) reports.push_back(assess_path(p.string(), weights, config, semantics, std::nullopt));
            const CorpusTable t = corpus_table(reports);
            if (format == "csv") return render_csv(t);
            if (format == "json") return render_json(t);
            if (format == "md" || format == "markdown") return render_markdown(t);
            throw py::value_error("format must be 'csv', 'json' or 'md'");
        },
        py::arg("paths"), py::arg("format") = "csv", py::kw_only(), py::arg("weights") = py::none(),
        py::arg("config") = py::none(), py::arg("semantics") = py::none());
    m.def("questions", [](std::optional<std::string> weights) {
        const Checklist c = weights ? load_weights(*weights) : default_checklist();
        py::list out;
        for (const auto& q : c.questions()) {
            py::dict d;
            d["id"] = q.id.str();
            d["category"] = std::string(to_string(q.category));
            d["text"] = q.text;
            d["weight"] = q.weight;
            d["mode"] = std::string(to_string(q.mode));
            out.append(d);
        }
        return out;
    }, py::arg("weights") = py::none());

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args, const std::string& stdin_text) {
            std::istringstream in(stdin_text);
            std::ostringstream out, err;
            int code;
            {
                py::gil_scoped_release release;
                code = cli::run(args, in, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), py::arg("stdin") = "", "Run the command line; returns (exit_code, stdout, stderr).");
}
