#include <algorithm>
#include <cmath>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "analyzers/rules.hpp"
#include "util/strings.hpp"
#include "workbook/refs.hpp"

namespace sheetcheck::rules {

using formula::CellRef;
using formula::FunctionCall;
using formula::NameRef;
using formula::Node;
using formula::RangeRef;

namespace {

std::string percent(double f) {
    std::ostringstream o;
    o.precision(3);
    o << f * 100 << "%";
    return o.str();
}

class EvidenceList {
public:
    EvidenceList(const Workbook& wb, std::size_t cap) : wb_(wb), cap_(cap) {}

    void cell(const CellAddress& a, std::string note) {
        if (items_.size() >= cap_) {
            ++omitted_;
            return;
        }
        items_.push_back({a.sheet_index, a.row, a.column, std::move(note)});
    }
    void cell_formula(const CellAddress& a, const std::string& prefix = {}) {
        const Cell* c = wb_.find(a);
        std::string text = c && c->formula() ? c->formula()->text : std::string();
        cell(a, prefix.empty() ? text : prefix + (text.empty() ? "" : ": " + text));
    }
    void sheet(std::uint32_t s, std::string note) {
        if (items_.size() >= cap_) {
            ++omitted_;
            return;
        }
        items_.push_back({s, std::nullopt, std::nullopt, std::move(note)});
    }
    bool empty() const { return items_.empty() && omitted_ == 0; }

    Finding finish(QuestionId q, Verdict v, Confidence conf, std::string hint = {}) {
        Finding f;
        f.question = q;
        f.credit = v.kind == VerdictKind::needs_human ? 0 : v.default_credit();
        f.verdict = std::move(v);
        f.evidence = std::move(items_);
        f.omitted_evidence = omitted_;
        f.confidence = conf;
        f.hint = std::move(hint);
        return f;
    }

private:
    const Workbook& wb_;
    std::size_t cap_;
    std::vector<Evidence> items_;
    std::size_t omitted_ = 0;
};

Verdict yes_no(bool b) { return b ? Verdict::yes() : Verdict::no(); }

EvidenceList evidence(const AnalysisContext& ctx) { return EvidenceList(ctx.workbook(), ctx.config().evidence_limit); }

std::string sheet_list(const Workbook& wb, const std::vector<std::uint32_t>& sheets) {
    std::string out;
    for (auto s : sheets) out += (out.empty() ? "" : ", ") + wb.sheets[s].name;
    return out;
}

std::optional<Rect> bounding_box(const std::vector<CellAddress>& cells) {
    std::optional<Rect> r;
    for (const auto& a : cells) {
        if (!r) r = Rect{a.row, a.column, a.row, a.column};
        else r->extend(a.pos());
    }
    return r;
}

bool has_formula_with(const AnalysisContext& ctx, auto&& pred) {
    for (const auto& [addr, ast] : ctx.graph().formulas)
        if (pred(addr, ast)) return true;
    return false;
}

bool any_node(const Node& ast, auto&& pred) {
    bool hit = false;
    formula::walk(ast, [&](const Node& n) { hit = hit || pred(n); });
    return hit;
}

// Name references that resolve to a defined name, honouring "Sheet!Name" prefixes.
const DefinedName* resolve_name(const Workbook& wb, const CellAddress& from, const std::string& identifier) {
    std::optional<std::uint32_t> scope = from.sheet_index;
    std::string name = identifier;
    if (auto bang = identifier.rfind('!'); bang != std::string::npos) {
        std::string sheet = identifier.substr(0, bang);
        if (sheet.size() >= 2 && sheet.front() == '\'' && sheet.back() == '\'') sheet = sheet.substr(1, sheet.size() - 2);
        scope = wb.sheet_index(sheet);
        if (!scope) return nullptr;
        name = identifier.substr(bang + 1);
    }
    return wb.find_name(name, scope);
}

std::string name_prefix(const std::string& name) {
    if (auto us = name.find('_'); us != std::string::npos && us > 0) return util::to_upper(name.substr(0, us));
    // camel-case head: up to the first lower-to-upper boundary
    for (std::size_t i = 1; i < name.size(); ++i) {
        if (std::isupper(static_cast<unsigned char>(name[i])) && std::islower(static_cast<unsigned char>(name[i - 1])))
            return util::to_upper(name.substr(0, i));
    }
    return util::to_upper(name);
}

bool names_in_use(const AnalysisContext& ctx) {
    const Workbook& wb = ctx.workbook();
    if (wb.defined_names.empty()) return false;
    return has_formula_with(ctx, [&](const CellAddress& at, const Node& ast) {
        return any_node(ast, [&](const Node& n) {
            const auto* nr = n.as<NameRef>();
            return nr && resolve_name(wb, at, nr->identifier);
        });
    });
}

}  // namespace

// ---- documentation ----

Finding q1_technical_description(const AnalysisContext& ctx) {
    auto ev = evidence(ctx);
    for (auto s : ctx.documentation_sheets()) ev.sheet(s, "text-only sheet, possible documentation");
    std::string hint = ctx.documentation_sheets().empty()
                           ? "no text-only sheet found"
                           : "candidate documentation sheets: " + sheet_list(ctx.workbook(), ctx.documentation_sheets());
    return ev.finish(QuestionId(1), Verdict::needs_human(), Confidence::low, hint);
}

Finding q2_user_description(const AnalysisContext& ctx) {
    auto ev = evidence(ctx);
    for (auto s : ctx.documentation_sheets()) ev.sheet(s, "text-only sheet, possible documentation");
    if (ctx.documentation_sheets().empty())
        return ev.finish(QuestionId(2), Verdict::needs_human(), Confidence::low, "no text-only sheet found");
    return ev.finish(QuestionId(2), Verdict::qualified("User sheets"), Confidence::medium,
                     "documentation sheets: " + sheet_list(ctx.workbook(), ctx.documentation_sheets()));
}

// ---- structure ----

Finding q3_sheets_grouped(const AnalysisContext& ctx) {
    auto ev = evidence(ctx);
    const Workbook& wb = ctx.workbook();
    std::string hint;
    for (std::uint32_t s = 0; s < wb.sheets.size(); ++s) {
        std::map<CellClass, std::size_t> counts;
        std::size_t total = 0;
        for (const auto& [pos, cell] : wb.sheets[s].cells) {
            CellClass c = ctx.class_of(cell.address);
            if (c == CellClass::label || c == CellClass::empty) continue;
            ++counts[c];
            ++total;
        }
        if (total == 0) {
            ev.sheet(s, "no input, calculation or output cells");
            continue;
        }
        auto dominant = std::max_element(counts.begin(), counts.end(),
                                         [](const auto& a, const auto& b) { return a.second < b.second; });
        const double share = double(dominant->second) / double(total);
        ev.sheet(s, std::string(to_string(dominant->first)) + " " + percent(share) + " of " + std::to_string(total) + " cells");
    }
    hint = "per-sheet dominant cell class shown as evidence";
    return ev.finish(QuestionId(3), Verdict::needs_human(), Confidence::low, hint);
}

Finding q4_sheet_naming(const AnalysisContext& ctx) {
    auto ev = evidence(ctx);
    auto r = sheet_naming(ctx.workbook(), ctx.config());
    for (auto s : r.default_named) ev.sheet(s, "default sheet name");
    return ev.finish(QuestionId(4), r.verdict, Confidence::high, "custom-named sheets: " + percent(r.custom_fraction));
}

Finding q5_calculations_separated(const AnalysisContext& ctx) {
    auto ev = evidence(ctx);
    bool pure = true;
    for (std::uint32_t s = 0; s < ctx.workbook().sheets.size(); ++s) {
        auto in = ctx.cells_of(CellClass::input, s);
        auto calc = ctx.cells_of(CellClass::calculation, s);
        if (!in.empty() && !calc.empty()) {
            pure = false;
            ev.sheet(s, std::to_string(in.size()) + " input and " + std::to_string(calc.size()) + " calculation cells");
        }
    }
    return ev.finish(QuestionId(5), yes_no(pure), Confidence::medium);
}

// ---- management ----

Finding q6_variables_together(const AnalysisContext& ctx) {
    auto ev = evidence(ctx);
    std::size_t total = 0, grouped = 0;
    for (const auto& block : ctx.input_blocks()) {
        total += block.size();
        if (block.size() >= 2) grouped += block.size();
        else ev.cell(block.front(), "isolated input cell");
    }
    if (total == 0) return ev.finish(QuestionId(6), Verdict::na(), Confidence::medium, "no input cells");
    const double share = double(grouped) / double(total);
    return ev.finish(QuestionId(6), yes_no(share >= 0.8), Confidence::medium, "inputs in blocks: " + percent(share));
}

Finding q7_input_output_distinct(const AnalysisContext& ctx) {
    auto ev = evidence(ctx);
    bool distinct = true;
    for (std::uint32_t s = 0; s < ctx.workbook().sheets.size(); ++s) {
        auto in = bounding_box(ctx.cells_of(CellClass::input, s));
        auto out = bounding_box(ctx.cells_of(CellClass::output, s));
        if (in && out && in->intersects(*out)) {
            distinct = false;
            ev.sheet(s, "input area " + rect_a1(*in) + " overlaps output area " + rect_a1(*out));
        }
    }
    return ev.finish(QuestionId(7), yes_no(distinct), Confidence::medium);
}

Finding q8_output_compact(const AnalysisContext& ctx) {
    auto ev = evidence(ctx);
    std::size_t count = 0, sheets = 0;
    for (std::uint32_t s = 0; s < ctx.workbook().sheets.size(); ++s) {
        auto outs = ctx.cells_of(CellClass::output, s);
        if (outs.empty()) continue;
        ++sheets;
        count += outs.size();
        auto box = bounding_box(outs);
        const double density = double(outs.size()) / double(box->area());
        ev.sheet(s, std::to_string(outs.size()) + " output cells in " + rect_a1(*box) + ", density " + percent(density));
    }
    return ev.finish(QuestionId(8), Verdict::needs_human(), Confidence::low,
                     std::to_string(count) + " output cells on " + std::to_string(sheets) + " sheets");
}

Finding q9_valid_ranges(const AnalysisContext& ctx) {
    auto ev = evidence(ctx);
    const Workbook& wb = ctx.workbook();
    std::set<CellAddress> bad;
    auto flag = [&](const CellAddress& a, const std::string& why) {
        if (bad.insert(a).second) ev.cell_formula(a, why);
    };
    auto in_bounds = [](const CellRef& c) { return c.row <= kMaxRows && c.column <= kMaxColumns; };
    auto bad_sheet = [&](const CellRef& c) { return c.sheet && !c.is_external() && !wb.sheet_index(*c.sheet); };
    for (const auto& [addr, ast] : ctx.graph().formulas) {
        formula::walk(ast, [&](const Node& n) {
            if (const auto* e = n.as<formula::ErrorLit>(); e && e->code == "#REF!") flag(addr, "#REF! error");
            if (const auto* c = n.as<CellRef>()) {
                if (!in_bounds(*c)) flag(addr, "reference outside the sheet");
                if (bad_sheet(*c)) flag(addr, "reference to a missing sheet");
            }
            if (const auto* r = n.as<RangeRef>()) {
                if (!in_bounds(r->start) || !in_bounds(r->end)) flag(addr, "range outside the sheet");
                if (r->start.row > r->end.row || r->start.column > r->end.column) flag(addr, "range not normalized");
                if (bad_sheet(r->start)) flag(addr, "range on a missing sheet");
            }
        });
    }
    for (const auto& [addr, ast] : ctx.graph().formulas) {
        auto succ = ctx.graph().successors(addr);
        if (std::find(succ.begin(), succ.end(), addr) != succ.end()) flag(addr, "references its own cell");
    }
    for (const auto& re : ctx.graph().region_edges) {
        if (re.region.sheet_index == re.from.sheet_index && re.region.range.contains(re.from.pos()))
            flag(re.from, "references its own cell");
    }
    return ev.finish(QuestionId(9), yes_no(bad.empty()), Confidence::high);
}

Finding q10_inputs_grouped(const AnalysisContext& ctx) {
    auto ev = evidence(ctx);
    if (ctx.input_blocks().empty()) return ev.finish(QuestionId(10), Verdict::na(), Confidence::medium, "no input cells");
    bool all = true;
    for (const auto& block : ctx.input_blocks()) {
        bool labelled = false;
        for (const auto& a : block) {
            const CellAddress left{a.sheet_index, a.column - 1, a.row}, above{a.sheet_index, a.column, a.row - 1};
            if ((a.column > 1 && ctx.class_of(left) == CellClass::label) ||
                (a.row > 1 && ctx.class_of(above) == CellClass::label)) {
                labelled = true;
                break;
            }
        }
        if (!labelled) {
            all = false;
            ev.cell(block.front(), "input block of " + std::to_string(block.size()) + " without an adjacent label");
        }
    }
    return ev.finish(QuestionId(10), yes_no(all), Confidence::medium,
                     std::to_string(ctx.input_blocks().size()) + " input blocks");
}

// ---- safety ----

Finding q11_normalization(const AnalysisContext& ctx) {
    auto ev = evidence(ctx);
    auto groups = detect_normalization_violations(ctx.workbook(), ctx.graph(), ctx.config());
    for (const auto& g : groups) {
        const std::string note = "literal " + util::format_double(g.value) + " repeated in " + std::to_string(g.cells.size()) + " formulas";
        for (const auto& a : g.cells) ev.cell_formula(a, note);
    }
    return ev.finish(QuestionId(11), yes_no(groups.empty()), Confidence::high,
                     std::to_string(groups.size()) + " repeated hardcoded values");
}

Finding q12_user_selection(const AnalysisContext& ctx) {
    auto ev = evidence(ctx);
    const Workbook& wb = ctx.workbook();
    bool controls = false, validation = false;
    for (std::uint32_t s = 0; s < wb.sheets.size(); ++s) {
        const Sheet& sh = wb.sheets[s];
        if (sh.form_controls > 0) {
            controls = true;
            ev.sheet(s, std::to_string(sh.form_controls) + " form controls");
        }
        for (const auto& v : sh.validations) {
            // a list validation renders as a drop-down selection control
            if (v.kind == ValidationKind::list) controls = true;
            else validation = true;
            ev.sheet(s, std::string(to_string(v.kind)) + " validation on " + rect_a1(v.range));
        }
    }
    Verdict verdict = controls ? Verdict::qualified("Controls") : validation ? Verdict::qualified("Validation") : Verdict::no();
    return ev.finish(QuestionId(12), verdict, Confidence::high);
}

// ---- formatting ----

namespace {
Finding formatting_rule(const AnalysisContext& ctx, QuestionId q, const std::vector<CellAddress>& cells, const char* what) {
    auto ev = evidence(ctx);
    auto r = format_consistency(ctx.workbook(), cells, ctx.config().format_consistency_threshold);
    for (const auto& a : r.off_style) ev.cell(a, "differs from the dominant style");
    std::string hint = cells.empty() ? std::string("no ") + what + " cells"
                                     : std::string("dominant style covers ") + percent(r.dominant_share) + " of " +
                                           std::to_string(cells.size()) + " " + what + " cells";
    return ev.finish(q, r.verdict, Confidence::medium, hint);
}
}  // namespace

Finding q13_input_format(const AnalysisContext& ctx) {
    return formatting_rule(ctx, QuestionId(13), ctx.cells_of(CellClass::input), "input");
}

Finding q14_output_format(const AnalysisContext& ctx) {
    return formatting_rule(ctx, QuestionId(14), ctx.cells_of(CellClass::output), "output");
}

Finding q15_other_format(const AnalysisContext& ctx) {
    auto cells = ctx.cells_of(CellClass::label);
    auto calc = ctx.cells_of(CellClass::calculation);
    cells.insert(cells.end(), calc.begin(), calc.end());
    std::sort(cells.begin(), cells.end());
    return formatting_rule(ctx, QuestionId(15), cells, "label and calculation");
}

Finding q16_user_support(const AnalysisContext& ctx) {
    auto ev = evidence(ctx);
    const Workbook& wb = ctx.workbook();
    bool supported = false;
    for (const auto& a : ctx.cells_of(CellClass::input)) {
        const Cell* c = wb.find(a);
        if (c && c->comment) {
            supported = true;
            ev.cell(a, "comment: " + *c->comment);
            continue;
        }
        for (const auto& v : wb.sheets[a.sheet_index].validations) {
            if (v.prompt && v.range.contains(a.pos())) {
                supported = true;
                ev.cell(a, "input prompt: " + *v.prompt);
                break;
            }
        }
    }
    return ev.finish(QuestionId(16), Verdict::qualified(supported ? "In cells" : "Not"), Confidence::medium);
}

// ---- skills ----

Finding q17_arrays(const AnalysisContext& ctx) {
    auto ev = evidence(ctx);
    for (const auto& sheet : ctx.workbook().sheets)
        for (const auto& [pos, cell] : sheet.cells)
            if (cell.formula() && cell.formula()->is_array) ev.cell_formula(cell.address, "array formula");
    return ev.finish(QuestionId(17), yes_no(!ev.empty()), Confidence::high);
}

Finding q18_windows(const AnalysisContext& ctx) {
    auto ev = evidence(ctx);
    bool any = false;
    const Workbook& wb = ctx.workbook();
    for (std::uint32_t s = 0; s < wb.sheets.size(); ++s) {
        if (ctx.cells_of(CellClass::output, s).empty()) continue;
        const auto& pane = wb.sheets[s].pane;
        if (pane.kind == PaneState::Kind::none) continue;
        any = true;
        ev.sheet(s, pane.kind == PaneState::Kind::frozen
                        ? "frozen panes (" + std::to_string(pane.rows) + " rows, " + std::to_string(pane.columns) + " columns)"
                        : "split window");
    }
    return ev.finish(QuestionId(18), yes_no(any), Confidence::medium);
}

Finding q19_names_used(const AnalysisContext& ctx) {
    auto ev = evidence(ctx);
    const Workbook& wb = ctx.workbook();
    if (!wb.defined_names.empty()) {
        for (const auto& [addr, ast] : ctx.graph().formulas) {
            const bool uses = any_node(ast, [&](const Node& n) {
                const auto* nr = n.as<NameRef>();
                return nr && resolve_name(wb, addr, nr->identifier);
            });
            if (uses) ev.cell_formula(addr, "uses a defined name");
        }
    }
    return ev.finish(QuestionId(19), yes_no(!ev.empty()), Confidence::high,
                     std::to_string(wb.defined_names.size()) + " defined names");
}

Finding q20_name_categories(const AnalysisContext& ctx) {
    auto ev = evidence(ctx);
    if (!names_in_use(ctx)) return ev.finish(QuestionId(20), Verdict::na(), Confidence::high, "names not used");
    std::map<std::string, std::vector<std::string>> groups;
    for (const auto& dn : ctx.workbook().defined_names) groups[name_prefix(dn.name)].push_back(dn.name);
    bool ok = groups.size() >= 2;
    for (const auto& [prefix, members] : groups) {
        if (members.size() < 2) {
            ok = false;
            if (!ctx.workbook().sheets.empty()) ev.sheet(0, "name '" + members.front() + "' shares no prefix with another name");
        }
    }
    return ev.finish(QuestionId(20), yes_no(ok), Confidence::high, std::to_string(groups.size()) + " name prefixes");
}

Finding q21_name_composition(const AnalysisContext& ctx) {
    auto ev = evidence(ctx);
    if (!names_in_use(ctx)) return ev.finish(QuestionId(21), Verdict::na(), Confidence::high, "names not used");
    static const std::regex snake("^[a-z][a-z0-9]*(_[a-z0-9]+)*$");
    static const std::regex camel("^[A-Z][a-z0-9]+([A-Z][a-z0-9]+)*$");
    static const std::regex upper("^[A-Z][A-Z0-9]*(_[A-Z0-9]+)*$");
    const std::pair<const std::regex*, const char*> conventions[] = {{&snake, "snake_case"}, {&camel, "CamelCase"}, {&upper, "UPPER"}};
    const auto& names = ctx.workbook().defined_names;
    for (const auto& [re, label] : conventions) {
        if (std::all_of(names.begin(), names.end(), [&](const DefinedName& d) { return std::regex_match(d.name, *re); }))
            return ev.finish(QuestionId(21), Verdict::yes(), Confidence::high, std::string("all names are ") + label);
    }
    for (const auto& d : names) {
        std::string kinds;
        for (const auto& [re, label] : conventions)
            if (std::regex_match(d.name, *re)) kinds += kinds.empty() ? label : std::string("/") + label;
        if (!ctx.workbook().sheets.empty()) ev.sheet(d.scope_sheet.value_or(0), "name '" + d.name + "': " + (kinds.empty() ? "no convention" : kinds));
    }
    return ev.finish(QuestionId(21), Verdict::no(), Confidence::high, "names mix casing conventions");
}

Finding q22_names_consistent(const AnalysisContext& ctx) {
    auto ev = evidence(ctx);
    if (!names_in_use(ctx)) return ev.finish(QuestionId(22), Verdict::na(), Confidence::high, "names not used");
    const Workbook& wb = ctx.workbook();
    std::vector<SheetRange> areas;
    for (const auto& dn : wb.defined_names) areas.insert(areas.end(), dn.areas.begin(), dn.areas.end());
    bool consistent = true;
    for (const auto& [addr, ast] : ctx.graph().formulas) {
        bool bypass = false;
        formula::walk(ast, [&](const Node& n) {
            if (bypass) return;
            if (const auto* c = n.as<CellRef>()) {
                if (c->is_external()) return;
                auto s = c->sheet ? wb.sheet_index(*c->sheet) : std::optional<std::uint32_t>(addr.sheet_index);
                if (!s) return;
                for (const auto& a : areas)
                    if (a.sheet_index == *s && a.range.contains({c->row, c->column})) bypass = true;
            } else if (const auto* r = n.as<RangeRef>()) {
                if (r->start.is_external()) return;
                auto s = r->start.sheet ? wb.sheet_index(*r->start.sheet) : std::optional<std::uint32_t>(addr.sheet_index);
                if (!s) return;
                const SheetRange target{*s, area_of(r->start, r->end)};
                for (const auto& a : areas)
                    if (a == target) bypass = true;
            }
        });
        if (bypass) {
            consistent = false;
            ev.cell_formula(addr, "addresses a named cell directly");
        }
    }
    return ev.finish(QuestionId(22), yes_no(consistent), Confidence::high);
}

Finding q23_complex_functions(const AnalysisContext& ctx) {
    auto ev = evidence(ctx);
    const auto& list = ctx.config().complex_function_list;
    for (const auto& [addr, ast] : ctx.graph().formulas) {
        std::string found;
        formula::walk(ast, [&](const Node& n) {
            const auto* fc = n.as<FunctionCall>();
            if (fc && found.empty() && list.count(fc->name)) found = fc->name;
        });
        if (!found.empty()) ev.cell_formula(addr, found);
    }
    return ev.finish(QuestionId(23), yes_no(!ev.empty()), Confidence::high);
}

Finding q24_nested(const AnalysisContext& ctx) {
    auto ev = evidence(ctx);
    const auto sem = ctx.config().nesting_semantics;
    for (const auto& [addr, ast] : ctx.graph().formulas) {
        const auto depth = formula::nesting_depth(ast, sem);
        if (depth >= 2) ev.cell_formula(addr, "depth " + std::to_string(depth));
    }
    return ev.finish(QuestionId(24), yes_no(!ev.empty()), Confidence::high,
                     std::string("nesting semantics: ") + std::string(formula::to_string(sem)));
}

Finding q25_links(const AnalysisContext& ctx) {
    auto ev = evidence(ctx);
    for (const auto& [addr, ast] : ctx.graph().formulas)
        if (!formula::references(ast).empty()) ev.cell_formula(addr);
    return ev.finish(QuestionId(25), yes_no(!ev.empty()), Confidence::high);
}

Finding q26_absolute_links(const AnalysisContext& ctx) {
    EvidenceList ev(ctx.workbook(), std::min<std::size_t>(10, ctx.config().evidence_limit));
    for (const auto& [addr, ast] : ctx.graph().formulas) {
        for (const auto& ref : formula::references(ast)) {
            bool hit = false;
            if (const auto* c = std::get_if<CellRef>(&ref)) hit = c->fully_absolute();
            else if (const auto* r = std::get_if<RangeRef>(&ref)) hit = r->start.fully_absolute() && r->end.fully_absolute();
            else hit = true;
            if (hit) ev.cell(addr, formula::reference_text(ref));
        }
    }
    return ev.finish(QuestionId(26), yes_no(!ev.empty()), Confidence::high);
}

}  // namespace sheetcheck::rules

namespace sheetcheck {

std::vector<NormalizationViolation> detect_normalization_violations(const Workbook& workbook,
                                                                    const DependencyGraph& graph,
                                                                    const AnalyzerConfig& config) {
    (void)workbook;
    std::map<double, std::set<CellAddress>> by_value;
    for (const auto& [addr, ast] : graph.formulas) {
        for (const auto& lit : formula::numeric_literals(ast)) {
            if (config.literal_exemptions.count(lit.value)) continue;
            by_value[lit.value].insert(addr);
        }
    }
    std::vector<NormalizationViolation> out;
    for (const auto& [value, cells] : by_value) {
        if (cells.size() >= static_cast<std::size_t>(config.normalization_min_repeats))
            out.push_back({value, std::vector<CellAddress>(cells.begin(), cells.end())});
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.cells.size() > b.cells.size(); });
    return out;
}

std::vector<NormalizationViolation> detect_normalization_violations(const Workbook& workbook,
                                                                    const AnalyzerConfig& config) {
    return detect_normalization_violations(workbook, build_graph(workbook), config);
}

ConsistencyResult format_consistency(const Workbook& workbook, const std::vector<CellAddress>& cells, double threshold) {
    ConsistencyResult r;
    if (cells.empty()) {
        r.verdict = Verdict::na();
        return r;
    }
    // map style ids onto the first id with an equal signature
    std::vector<std::uint32_t> canonical(workbook.style_table.size());
    for (std::uint32_t i = 0; i < canonical.size(); ++i) {
        canonical[i] = i;
        for (std::uint32_t j = 0; j < i; ++j)
            if (workbook.style_table[j] == workbook.style_table[i]) {
                canonical[i] = canonical[j];
                break;
            }
    }
    auto key = [&](const CellAddress& a) -> std::uint32_t {
        const Cell* c = workbook.find(a);
        const std::uint32_t id = c ? c->style_id : 0;
        return id < canonical.size() ? canonical[id] : 0;
    };
    std::map<std::uint32_t, std::size_t> counts;
    for (const auto& a : cells) ++counts[key(a)];
    // ties go to the lowest style id, which keeps the result deterministic
    auto dominant = counts.begin();
    for (auto it = counts.begin(); it != counts.end(); ++it)
        if (it->second > dominant->second) dominant = it;
    r.dominant_share = double(dominant->second) / double(cells.size());
    r.verdict = r.dominant_share >= threshold ? Verdict::yes() : Verdict::no();
    for (const auto& a : cells)
        if (key(a) != dominant->first) r.off_style.push_back(a);
    return r;
}

NamingResult sheet_naming(const Workbook& workbook, const AnalyzerConfig& config) {
    NamingResult r;
    if (workbook.sheets.empty()) {
        r.verdict = Verdict::na();
        return r;
    }
    const std::regex pattern(config.default_sheet_name_pattern, std::regex::icase);
    for (std::uint32_t s = 0; s < workbook.sheets.size(); ++s)
        if (std::regex_search(workbook.sheets[s].name, pattern)) r.default_named.push_back(s);
    r.custom_fraction = double(workbook.sheets.size() - r.default_named.size()) / double(workbook.sheets.size());
    r.verdict = r.custom_fraction >= config.naming_threshold ? Verdict::yes() : Verdict::no();
    return r;
}

}  // namespace sheetcheck
