#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>

#include "sheetcheck/formula.hpp"
#include "sheetcheck/workbook.hpp"
#include "util/strings.hpp"
#include "workbook/refs.hpp"
#include "workbook/styles.hpp"
#include "workbook/xml_dom.hpp"
#include "workbook/zip_archive.hpp"

namespace sheetcheck {
namespace {

using xml::Element;

struct Relationship {
    std::string type;
    std::string target;  // resolved part name
    bool external = false;
};

using Relationships = std::map<std::string, Relationship>;

bool type_is(const Relationship& r, std::string_view suffix) {
    return r.type.size() >= suffix.size() && r.type.compare(r.type.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string directory_of(const std::string& part) {
    const auto slash = part.rfind('/');
    return slash == std::string::npos ? std::string() : part.substr(0, slash + 1);
}

std::string resolve_part(const std::string& base_dir, const std::string& target) {
    std::string joined = !target.empty() && target.front() == '/' ? target.substr(1) : base_dir + target;
    std::vector<std::string> parts;
    std::stringstream ss(joined);
    std::string item;
    while (std::getline(ss, item, '/')) {
        if (item.empty() || item == ".") continue;
        if (item == "..") {
            if (!parts.empty()) parts.pop_back();
            continue;
        }
        parts.push_back(item);
    }
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += '/';
        out += parts[i];
    }
    return out;
}

std::string rels_path_for(const std::string& part) {
    return directory_of(part) + "_rels/" + part.substr(directory_of(part).size()) + ".rels";
}

class Package {
public:
    explicit Package(zip::Archive archive) : archive_(std::move(archive)) {}

    std::optional<std::string> read(const std::string& part) const { return archive_.read(part); }
    const zip::Archive& archive() const { return archive_; }

    std::optional<Element> xml(const std::string& part, const std::string& sheet_for_errors = {}) const {
        auto bytes = archive_.read(part);
        if (!bytes) return std::nullopt;
        try {
            return xml::parse(*bytes);
        } catch (const xml::ParseError& e) {
            throw LoadError(LoadError::Code::malformed_sheet_xml, part + ": " + e.what(), sheet_for_errors);
        }
    }

    Relationships relationships(const std::string& part) const {
        Relationships rels;
        auto doc = xml(rels_path_for(part));
        if (!doc) return rels;
        const std::string base = directory_of(part);
        for (const auto* r : doc->children_named("Relationship")) {
            Relationship rel;
            rel.type = r->attr_or("Type", "");
            rel.external = r->attr_or("TargetMode", "") == "External";
            const auto target = r->attr_or("Target", "");
            rel.target = rel.external ? target : resolve_part(base, target);
            rels.emplace(r->attr_or("Id", ""), std::move(rel));
        }
        return rels;
    }

private:
    zip::Archive archive_;
};

std::string workbook_part(const Package& pkg) {
    if (auto root = pkg.xml("_rels/.rels")) {
        for (const auto* r : root->children_named("Relationship")) {
            const auto type = r->attr_or("Type", "");
            if (type.size() >= 15 && type.compare(type.size() - 15, 15, "/officeDocument") == 0)
                return resolve_part("", r->attr_or("Target", ""));
        }
    }
    for (std::string candidate : {"xl/workbook.xml", "xl/workbook.bin"}) {
        if (pkg.archive().contains(candidate)) return candidate;
    }
    throw LoadError(LoadError::Code::missing_workbook_part, "no workbook part in archive");
}

std::string rich_text(const Element& e) {
    // concatenates <t> runs while skipping phonetic hints
    std::string out;
    if (e.name == "t") return e.text;
    for (const auto& c : e.children) {
        if (c.name == "rPh" || c.name == "phoneticPr") continue;
        if (c.name == "t") out += c.text;
        else out += rich_text(c);
    }
    return out;
}

std::vector<std::string> read_shared_strings(const Package& pkg, const std::string& part) {
    std::vector<std::string> out;
    auto doc = pkg.xml(part);
    if (!doc) return out;
    for (const auto* si : doc->children_named("si")) out.push_back(rich_text(*si));
    return out;
}

std::optional<double> to_double(std::string_view s) {
    s = util::trim(s);
    if (s.empty()) return std::nullopt;
    std::string tmp(s);
    char* end = nullptr;
    const double v = std::strtod(tmp.c_str(), &end);
    if (end != tmp.c_str() + tmp.size()) return std::nullopt;
    return v;
}

std::uint32_t to_u32(std::string_view s, std::uint32_t fallback = 0) {
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    return ec == std::errc{} ? v : fallback;
}

std::vector<Rect> parse_sqref(std::string_view sqref) {
    std::vector<Rect> out;
    std::stringstream ss{std::string(sqref)};
    std::string item;
    while (ss >> item) {
        if (auto r = parse_rect_a1(item)) out.push_back(*r);
    }
    return out;
}

ValidationKind validation_kind(std::string_view type) {
    if (type == "list") return ValidationKind::list;
    if (type == "whole") return ValidationKind::whole;
    if (type == "decimal") return ValidationKind::decimal;
    return ValidationKind::custom;
}

struct SharedFormula {
    GridPos anchor;
    std::string text;
    std::optional<formula::Node> ast;
};

class SheetReader {
public:
    SheetReader(const Package& pkg, const std::vector<std::string>& shared_strings,
                const ooxml::StyleTable& styles, std::uint32_t index, std::string name)
        : pkg_(pkg), strings_(shared_strings), styles_(styles), index_(index) {
        sheet_.name = std::move(name);
    }

    Sheet read(const std::string& part) {
        auto doc = pkg_.xml(part, sheet_.name);
        if (!doc) throw LoadError(LoadError::Code::missing_workbook_part, "missing sheet part " + part, sheet_.name);
        if (doc->name != "worksheet")
            throw LoadError(LoadError::Code::malformed_sheet_xml, "root element is <" + doc->name + ">", sheet_.name);

        if (const auto* views = doc->child("sheetViews")) read_views(*views);
        if (const auto* data = doc->child("sheetData")) read_cells(*data);
        doc->for_each("dataValidation", [&](const Element& dv) { read_validation(dv); });
        std::uint32_t controls = 0;
        doc->for_each("control", [&](const Element&) { ++controls; });

        const auto rels = pkg_.relationships(part);
        for (const auto& [id, rel] : rels) {
            if (rel.external) continue;
            if (type_is(rel, "/comments")) read_comments(rel.target);
        }
        if (controls == 0) {
            for (const auto& [id, rel] : rels) {
                if (!rel.external && type_is(rel, "/vmlDrawing")) controls += count_vml_controls(rel.target);
                if (!rel.external && type_is(rel, "/ctrlProp")) ++controls;
            }
        }
        sheet_.form_controls = controls;

        for (auto& [pos, cell] : sheet_.cells) {
            if (!sheet_.used_bounds) sheet_.used_bounds = Rect{pos.row, pos.column, pos.row, pos.column};
            else sheet_.used_bounds->extend(pos);
        }
        return std::move(sheet_);
    }

private:
    void read_views(const Element& views) {
        const auto* view = views.child("sheetView");
        if (!view) return;
        const auto* pane = view->child("pane");
        if (!pane) return;
        const auto state = pane->attr_or("state", "split");
        const double xs = to_double(pane->attr_or("xSplit", "0")).value_or(0);
        const double ys = to_double(pane->attr_or("ySplit", "0")).value_or(0);
        if (state == "frozen" || state == "frozenSplit") {
            sheet_.pane = {PaneState::Kind::frozen, static_cast<std::uint32_t>(ys), static_cast<std::uint32_t>(xs)};
        } else if (xs > 0 || ys > 0) {
            sheet_.pane = {PaneState::Kind::split, 0, 0};
        }
    }

    void read_cells(const Element& data) {
        std::uint32_t implicit_row = 0;
        for (const auto* row : data.children_named("row")) {
            implicit_row = row->attr("r") ? to_u32(*row->attr("r"), implicit_row + 1) : implicit_row + 1;
            std::uint32_t implicit_col = 0;
            for (const auto* c : row->children_named("c")) {
                GridPos pos{implicit_row, implicit_col + 1};
                if (auto ref = c->attr("r")) {
                    auto parsed = parse_a1(*ref);
                    if (!parsed)
                        throw LoadError(LoadError::Code::malformed_sheet_xml, "bad cell reference '" + std::string(*ref) + "'",
                                        sheet_.name);
                    pos = *parsed;
                }
                implicit_col = pos.column;
                read_cell(*c, pos);
            }
        }
    }

    void read_cell(const Element& c, GridPos pos) {
        Cell cell;
        cell.address = {index_, pos.column, pos.row};
        cell.style_id = styles_.signature_of(to_u32(c.attr_or("s", "0")));
        const auto type = c.attr_or("t", "n");
        const Element* f = c.child("f");
        const Element* v = c.child("v");

        if (f) {
            if (auto text = formula_text(*f, pos)) {
                cell.content = Formula{"=" + *text, f->attr_or("t", "") == "array"};
            }
        }
        if (std::holds_alternative<std::monostate>(cell.content)) {
            if (type == "inlineStr") {
                if (const auto* is = c.child("is")) cell.content = rich_text(*is);
            } else if (v) {
                if (type == "s") {
                    const auto idx = to_u32(v->text, UINT32_MAX);
                    if (idx >= strings_.size())
                        throw LoadError(LoadError::Code::malformed_sheet_xml,
                                        "shared string index out of range at " + a1(pos), sheet_.name);
                    cell.content = strings_[idx];
                } else if (type == "b") {
                    cell.content = util::trim(v->text) == "1";
                } else if (type == "e") {
                    cell.content = CellError{std::string(util::trim(v->text))};
                } else if (type == "str" || type == "d") {
                    cell.content = v->text;
                } else if (auto num = to_double(v->text)) {
                    cell.content = *num;
                } else {
                    throw LoadError(LoadError::Code::malformed_sheet_xml,
                                    "non-numeric value '" + v->text + "' at " + a1(pos), sheet_.name);
                }
            }
        }
        if (cell.is_empty()) return;  // style-only blanks are not part of the model
        sheet_.cells[pos] = std::move(cell);
    }

    std::optional<std::string> formula_text(const Element& f, GridPos pos) {
        const auto kind = f.attr_or("t", "normal");
        if (kind == "dataTable") return std::nullopt;
        if (kind != "shared") {
            if (f.text.empty()) return std::nullopt;
            return f.text;
        }
        const auto si = f.attr_or("si", "");
        if (!f.text.empty()) {
            SharedFormula sf{pos, f.text, std::nullopt};
            try {
                sf.ast = formula::parse("=" + f.text);
            } catch (const formula::ParseError&) {
                // children fall back to the master text; the graph builder reports the failure
            }
            shared_[si] = std::move(sf);
            return f.text;
        }
        auto it = shared_.find(si);
        if (it == shared_.end())
            throw LoadError(LoadError::Code::malformed_sheet_xml, "shared formula " + si + " used before definition",
                            sheet_.name);
        const SharedFormula& master = it->second;
        if (!master.ast) return master.text;
        const auto shifted = formula::shift_relative(*master.ast, std::int64_t(pos.row) - master.anchor.row,
                                                     std::int64_t(pos.column) - master.anchor.column);
        return formula::print_canonical(shifted).substr(1);
    }

    void read_validation(const Element& dv) {
        std::string sqref = dv.attr_or("sqref", "");
        if (sqref.empty()) {
            if (const auto* s = dv.child("sqref")) sqref = s->text;
        }
        const auto type = dv.attr_or("type", "none");
        if (type == "none") return;
        std::optional<std::string> prompt;
        if (auto p = dv.attr("prompt"); p && !p->empty()) prompt = std::string(*p);
        for (const auto& r : parse_sqref(sqref)) sheet_.validations.push_back({r, validation_kind(type), prompt});
    }

    void read_comments(const std::string& part) {
        auto doc = pkg_.xml(part, sheet_.name);
        if (!doc) return;
        doc->for_each("comment", [&](const Element& c) {
            auto pos = parse_a1(c.attr_or("ref", ""));
            if (!pos) return;
            std::string text;
            if (const auto* t = c.child("text")) text = rich_text(*t);
            auto it = sheet_.cells.find(*pos);
            if (it == sheet_.cells.end()) {
                Cell empty;
                empty.address = {index_, pos->column, pos->row};
                it = sheet_.cells.emplace(*pos, std::move(empty)).first;
            }
            it->second.comment = std::move(text);
        });
    }

    std::uint32_t count_vml_controls(const std::string& part) const {
        auto bytes = pkg_.read(part);
        if (!bytes) return 0;
        // legacy VML is often not well-formed XML; a textual scan is enough here
        std::uint32_t n = 0;
        std::size_t at = 0;
        const std::string needle = "ObjectType=\"";
        while ((at = bytes->find(needle, at)) != std::string::npos) {
            at += needle.size();
            const auto close = bytes->find('"', at);
            if (close == std::string::npos) break;
            if (bytes->compare(at, close - at, "Note") != 0) ++n;
            at = close;
        }
        return n;
    }

    const Package& pkg_;
    const std::vector<std::string>& strings_;
    const ooxml::StyleTable& styles_;
    std::uint32_t index_;
    Sheet sheet_;
    std::map<std::string, SharedFormula> shared_;
};

std::vector<SheetRange> name_areas(const Workbook& wb, const std::string& target,
                                   std::optional<std::uint32_t> scope) {
    std::vector<SheetRange> areas;
    formula::Node ast;
    try {
        ast = formula::parse("=" + target);
    } catch (const formula::ParseError&) {
        return areas;
    }
    // a bare reference or a union of references; anything else is an expression
    std::vector<const formula::Node*> pending{&ast};
    std::vector<const formula::Node*> leaves;
    while (!pending.empty()) {
        const auto* n = pending.back();
        pending.pop_back();
        if (const auto* p = n->as<formula::Paren>()) pending.push_back(&*p->inner);
        else if (const auto* b = n->as<formula::BinaryOp>(); b && b->op == formula::BinaryOperator::union_) {
            pending.push_back(&*b->right);
            pending.push_back(&*b->left);
        } else {
            leaves.push_back(n);
        }
    }
    for (const auto* leaf : leaves) {
        formula::CellRef start, end;
        if (const auto* c = leaf->as<formula::CellRef>()) start = end = *c;
        else if (const auto* r = leaf->as<formula::RangeRef>()) start = r->start, end = r->end;
        else return {};
        std::optional<std::uint32_t> sheet = scope;
        if (start.sheet) sheet = wb.sheet_index(*start.sheet);
        if (!sheet || start.is_external()) return {};
        const Rect rect = area_of(start, end);
        areas.push_back({*sheet, rect});
    }
    return areas;
}

}  // namespace

std::vector<SheetRange> resolve_name_target(const Workbook& wb, const std::string& target,
                                            std::optional<std::uint32_t> scope) {
    return name_areas(wb, target, scope);
}

Workbook load_xlsx(const std::string& path) {
    Package pkg(zip::Archive::open(path));
    const std::string wb_part = workbook_part(pkg);
    if (wb_part.size() >= 4 && wb_part.compare(wb_part.size() - 4, 4, ".bin") == 0)
        throw LoadError(LoadError::Code::unsupported_feature, "binary workbook (.xlsb) is not supported");
    auto wb_doc = pkg.xml(wb_part);
    if (!wb_doc) throw LoadError(LoadError::Code::missing_workbook_part, wb_part);
    const auto rels = pkg.relationships(wb_part);

    std::vector<std::string> shared_strings;
    std::optional<Element> styles_doc, theme_doc;
    for (const auto& [id, rel] : rels) {
        if (rel.external) continue;
        if (type_is(rel, "/sharedStrings")) shared_strings = read_shared_strings(pkg, rel.target);
        else if (type_is(rel, "/styles")) styles_doc = pkg.xml(rel.target);
        else if (type_is(rel, "/theme")) theme_doc = pkg.xml(rel.target);
    }
    const auto palette = ooxml::read_theme_palette(theme_doc ? &*theme_doc : nullptr);
    const auto styles = ooxml::read_styles(styles_doc ? &*styles_doc : nullptr, palette);

    Workbook wb;
    wb.source_path = path;
    wb.style_table = styles.signatures;

    // position in <sheets> (used by localSheetId) -> index among loaded worksheets
    std::map<std::uint32_t, std::uint32_t> local_sheet_map;
    if (const auto* sheets = wb_doc->child("sheets")) {
        std::uint32_t position = 0;
        for (const auto* s : sheets->children_named("sheet")) {
            const auto rid = s->attr_or("r:id", s->attr_or("id", ""));
            auto it = rels.find(rid);
            const auto name = s->attr_or("name", "");
            if (it == rels.end()) throw LoadError(LoadError::Code::missing_workbook_part, "no part for sheet", name);
            if (type_is(it->second, "/worksheet")) {
                const auto index = static_cast<std::uint32_t>(wb.sheets.size());
                local_sheet_map[position] = index;
                SheetReader reader(pkg, shared_strings, styles, index, name);
                wb.sheets.push_back(reader.read(it->second.target));
            }
            // chartsheets, dialog sheets and macro sheets carry no cell formulas of interest
            ++position;
        }
    }
    if (wb.sheets.empty()) throw LoadError(LoadError::Code::missing_workbook_part, "workbook has no worksheets");

    if (const auto* names = wb_doc->child("definedNames")) {
        for (const auto* dn : names->children_named("definedName")) {
            DefinedName d;
            d.name = dn->attr_or("name", "");
            if (d.name.empty() || util::starts_with_icase(d.name, "_xlnm.")) continue;
            d.target = dn->text;
            if (!d.target.empty() && d.target.front() == '=') d.target.erase(0, 1);
            if (auto local = dn->attr("localSheetId")) {
                auto it = local_sheet_map.find(to_u32(*local, UINT32_MAX));
                if (it == local_sheet_map.end()) continue;  // scoped to a skipped chartsheet
                d.scope_sheet = it->second;
            }
            const bool duplicate = std::any_of(wb.defined_names.begin(), wb.defined_names.end(), [&](const DefinedName& o) {
                return o.scope_sheet == d.scope_sheet && util::iequals(o.name, d.name);
            });
            if (duplicate) continue;
            d.areas = name_areas(wb, d.target, d.scope_sheet);
            wb.defined_names.push_back(std::move(d));
        }
    }
    return wb;
}

}  // namespace sheetcheck
