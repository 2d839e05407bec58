#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sheetcheck/workbook.hpp"
#include "util/strings.hpp"
#include "workbook/refs.hpp"

namespace sheetcheck {
namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void violation(const std::string& detail) {
    throw LoadError(LoadError::Code::fixture_invariant_violation, detail);
}

std::size_t line_of(std::string_view text, std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

void only_keys(const Json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            violation(where + ": unknown key '" + key + "'");
    }
}

template <class T>
T get(const Json& j, const std::string& where) {
    try {
        return j.get<T>();
    } catch (const Json::exception&) {
        violation(where + ": wrong value type");
    }
}

StyleSignature read_style(const Json& j, const std::string& where) {
    if (!j.is_object()) violation(where + ": style must be an object");
    only_keys(j, {"fill", "font", "numfmt", "border"}, where);
    StyleSignature s;
    if (j.contains("fill") && !j["fill"].is_null()) {
        auto c = color_from_string(get<std::string>(j["fill"], where + ".fill"));
        if (!c) violation(where + ": bad fill color");
        s.fill = *c;
    }
    if (j.contains("font")) {
        const auto& f = j["font"];
        if (!f.is_object()) violation(where + ".font must be an object");
        only_keys(f, {"name", "size", "bold", "italic"}, where + ".font");
        if (f.contains("name")) s.font.name = get<std::string>(f["name"], where + ".font.name");
        if (f.contains("size")) s.font.size = get<double>(f["size"], where + ".font.size");
        if (f.contains("bold")) s.font.bold = get<bool>(f["bold"], where + ".font.bold");
        if (f.contains("italic")) s.font.italic = get<bool>(f["italic"], where + ".font.italic");
    }
    if (j.contains("numfmt")) s.number_format = get<std::string>(j["numfmt"], where + ".numfmt");
    if (j.contains("border")) s.border_key = get<std::string>(j["border"], where + ".border");
    return s;
}

Json write_style(const StyleSignature& s) {
    Json j = Json::object();
    if (s.fill) j["fill"] = color_to_string(*s.fill);
    const FontKey default_font{};
    if (!(s.font == default_font)) {
        j["font"] = {{"name", s.font.name}, {"size", s.font.size}, {"bold", s.font.bold}, {"italic", s.font.italic}};
    }
    if (s.number_format != "General") j["numfmt"] = s.number_format;
    if (!s.border_key.empty()) j["border"] = s.border_key;
    return j;
}

PaneState read_panes(const Json& j, const std::string& where) {
    if (j.is_null()) return {};
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "split") return {PaneState::Kind::split, 0, 0};
        if (s == "none") return {};
        violation(where + ": panes must be \"split\", \"none\" or an object");
    }
    if (!j.is_object()) violation(where + ": bad panes value");
    only_keys(j, {"state", "rows", "cols"}, where + ".panes");
    const auto state = j.contains("state") ? get<std::string>(j["state"], where + ".panes.state") : "frozen";
    PaneState p;
    if (state == "frozen") p.kind = PaneState::Kind::frozen;
    else if (state == "split") p.kind = PaneState::Kind::split;
    else if (state == "none") return {};
    else violation(where + ": unknown pane state '" + state + "'");
    if (j.contains("rows")) p.rows = get<std::uint32_t>(j["rows"], where + ".panes.rows");
    if (j.contains("cols")) p.columns = get<std::uint32_t>(j["cols"], where + ".panes.cols");
    return p;
}

Cell read_cell(const Json& j, CellAddress address, std::size_t style_count, const std::string& where) {
    if (!j.is_object()) violation(where + ": cell must be an object");
    only_keys(j, {"v", "e", "f", "array", "style", "comment"}, where);
    Cell cell;
    cell.address = address;
    const int kinds = int(j.contains("v")) + int(j.contains("e")) + int(j.contains("f"));
    if (kinds > 1) violation(where + ": a cell holds exactly one of v, e, f");
    if (j.contains("v")) {
        const auto& v = j["v"];
        if (v.is_boolean()) cell.content = v.get<bool>();
        else if (v.is_number()) cell.content = v.get<double>();
        else if (v.is_string()) cell.content = v.get<std::string>();
        else violation(where + ": literal must be a number, string or boolean");
    } else if (j.contains("e")) {
        cell.content = CellError{get<std::string>(j["e"], where + ".e")};
    } else if (j.contains("f")) {
        Formula f{get<std::string>(j["f"], where + ".f"), false};
        if (f.text.size() < 2 || f.text.front() != '=') violation(where + ": formula must start with '=' and be non-empty");
        if (j.contains("array")) f.is_array = get<bool>(j["array"], where + ".array");
        cell.content = std::move(f);
    }
    if (j.contains("array") && !j.contains("f")) violation(where + ": 'array' is only valid on formula cells");
    if (j.contains("style")) {
        cell.style_id = get<std::uint32_t>(j["style"], where + ".style");
        if (cell.style_id >= style_count) violation(where + ": style id out of range");
    }
    if (j.contains("comment")) cell.comment = get<std::string>(j["comment"], where + ".comment");
    return cell;
}

Json write_cell(const Cell& c) {
    Json j = Json::object();
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double> || std::is_same_v<T, std::string> || std::is_same_v<T, bool>) {
                j["v"] = v;
            } else if constexpr (std::is_same_v<T, CellError>) {
                j["e"] = v.code;
            } else if constexpr (std::is_same_v<T, Formula>) {
                j["f"] = v.text;
                if (v.is_array) j["array"] = true;
            }
        },
        c.content);
    if (c.style_id != 0) j["style"] = c.style_id;
    if (c.comment) j["comment"] = *c.comment;
    return j;
}

// A range target must name an existing sheet.
void check_name_sheets(const Workbook& wb, const DefinedName& dn) {
    formula::Node ast;
    try {
        ast = formula::parse("=" + dn.target);
    } catch (const formula::ParseError&) {
        return;
    }
    for (const auto& ref : formula::references(ast)) {
        const formula::CellRef* c = std::get_if<formula::CellRef>(&ref);
        if (const auto* r = std::get_if<formula::RangeRef>(&ref)) c = &r->start;
        if (!c || !c->sheet || c->is_external()) continue;
        if (!wb.sheet_index(*c->sheet))
            violation("defined name '" + dn.name + "' refers to missing sheet '" + *c->sheet + "'");
    }
}

Workbook from_json(const Json& doc, std::string source_path) {
    if (!doc.is_object()) violation("top level must be an object");
    only_keys(doc, {"sheets", "names", "styles"}, "fixture");

    Workbook wb;
    wb.source_path = std::move(source_path);
    if (doc.contains("styles")) {
        const auto& styles = doc["styles"];
        if (!styles.is_array()) violation("styles must be an array");
        for (std::size_t i = 0; i < styles.size(); ++i)
            wb.style_table.push_back(read_style(styles[i], "styles[" + std::to_string(i) + "]"));
    }
    if (wb.style_table.empty()) wb.style_table.push_back(StyleSignature{});

    if (!doc.contains("sheets") || !doc["sheets"].is_array()) violation("'sheets' array is required");
    const auto& sheets = doc["sheets"];
    for (std::size_t i = 0; i < sheets.size(); ++i) {
        const auto& js = sheets[i];
        const std::string where = "sheets[" + std::to_string(i) + "]";
        if (!js.is_object()) violation(where + " must be an object");
        only_keys(js, {"name", "panes", "validations", "controls", "cells"}, where);
        Sheet sheet;
        if (!js.contains("name")) violation(where + ": missing name");
        sheet.name = get<std::string>(js["name"], where + ".name");
        if (js.contains("panes")) sheet.pane = read_panes(js["panes"], where);
        if (js.contains("controls")) sheet.form_controls = get<std::uint32_t>(js["controls"], where + ".controls");
        if (js.contains("validations")) {
            for (const auto& jv : js["validations"]) {
                const std::string vw = where + ".validations";
                if (!jv.is_object()) violation(vw + ": entry must be an object");
                only_keys(jv, {"range", "kind", "prompt"}, vw);
                Validation v;
                auto r = parse_rect_a1(get<std::string>(jv.value("range", Json("")), vw + ".range"));
                if (!r) violation(vw + ": bad range");
                v.range = *r;
                auto kind = validation_kind_from_string(jv.contains("kind") ? get<std::string>(jv["kind"], vw + ".kind") : "custom");
                if (!kind) violation(vw + ": unknown validation kind");
                v.kind = *kind;
                if (jv.contains("prompt")) v.prompt = get<std::string>(jv["prompt"], vw + ".prompt");
                sheet.validations.push_back(std::move(v));
            }
        }
        if (js.contains("cells")) {
            if (!js["cells"].is_object()) violation(where + ".cells must be an object");
            for (const auto& [key, jc] : js["cells"].items()) {
                auto pos = parse_a1(key);
                if (!pos) violation(where + ": bad cell address '" + key + "'");
                if (sheet.cells.count(*pos)) violation(where + ": duplicate cell " + key);
                Cell c = read_cell(jc, {static_cast<std::uint32_t>(i), pos->column, pos->row}, wb.style_table.size(),
                                   sheet.name + "!" + key);
                if (c.is_empty() && !c.comment) continue;
                sheet.cells.emplace(*pos, std::move(c));
            }
        }
        for (const auto& [pos, c] : sheet.cells) {
            if (!sheet.used_bounds) sheet.used_bounds = Rect{pos.row, pos.column, pos.row, pos.column};
            else sheet.used_bounds->extend(pos);
        }
        wb.sheets.push_back(std::move(sheet));
    }

    if (doc.contains("names")) {
        const auto& names = doc["names"];
        if (!names.is_object()) violation("names must be an object");
        for (const auto& [key, value] : names.items()) {
            DefinedName dn;
            const auto bang = key.rfind('!');
            if (bang != std::string::npos) {
                auto scope = wb.sheet_index(key.substr(0, bang));
                if (!scope) violation("name '" + key + "' is scoped to an unknown sheet");
                dn.scope_sheet = *scope;
                dn.name = key.substr(bang + 1);
            } else {
                dn.name = key;
            }
            dn.target = get<std::string>(value, "names." + key);
            if (!dn.target.empty() && dn.target.front() == '=') dn.target.erase(0, 1);
            dn.areas = resolve_name_target(wb, dn.target, dn.scope_sheet);
            if (dn.areas.empty()) check_name_sheets(wb, dn);
            wb.defined_names.push_back(std::move(dn));
        }
    }
    validate_workbook(wb);
    return wb;
}

}  // namespace

Workbook load_fixture_text(std::string_view text, std::string source_path) {
    Json doc;
    try {
        doc = Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        throw LoadError(LoadError::Code::fixture_syntax, e.what(), {}, line_of(text, e.byte ? e.byte - 1 : 0));
    }
    return from_json(doc, std::move(source_path));
}

Workbook load_fixture(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LoadError(LoadError::Code::io, "cannot open '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return load_fixture_text(text, path);
}

std::string dump_fixture(const Workbook& wb) {
    Json doc = Json::object();
    Json sheets = Json::array();
    for (const auto& s : wb.sheets) {
        Json js = Json::object();
        js["name"] = s.name;
        if (s.pane.kind == PaneState::Kind::frozen) {
            js["panes"] = {{"state", "frozen"}, {"rows", s.pane.rows}, {"cols", s.pane.columns}};
        } else if (s.pane.kind == PaneState::Kind::split) {
            js["panes"] = "split";
        }
        if (!s.validations.empty()) {
            Json vs = Json::array();
            for (const auto& v : s.validations) {
                Json jv = {{"range", rect_a1(v.range)}, {"kind", std::string(to_string(v.kind))}};
                if (v.prompt) jv["prompt"] = *v.prompt;
                vs.push_back(std::move(jv));
            }
            js["validations"] = std::move(vs);
        }
        if (s.form_controls) js["controls"] = s.form_controls;
        Json cells = Json::object();
        for (const auto& [pos, c] : s.cells) cells[a1(pos)] = write_cell(c);
        js["cells"] = std::move(cells);
        sheets.push_back(std::move(js));
    }
    doc["sheets"] = std::move(sheets);
    Json names = Json::object();
    for (const auto& dn : wb.defined_names) {
        const std::string key = dn.scope_sheet ? wb.sheets.at(*dn.scope_sheet).name + "!" + dn.name : dn.name;
        names[key] = dn.target;
    }
    doc["names"] = std::move(names);
    Json styles = Json::array();
    for (const auto& s : wb.style_table) styles.push_back(write_style(s));
    doc["styles"] = std::move(styles);
    return doc.dump(2) + "\n";
}

}  // namespace sheetcheck
