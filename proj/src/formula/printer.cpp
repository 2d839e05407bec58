#include <cctype>

#include "formula/lexer.hpp"
#include "sheetcheck/formula.hpp"
#include "sheetcheck/workbook.hpp"
#include "util/strings.hpp"

namespace sheetcheck::formula {
namespace {

bool simple_sheet_name(std::string_view s) {
    if (s.empty()) return false;
    if (std::isdigit(static_cast<unsigned char>(s.front())) || s.front() == '.') return false;
    for (char c : s) {
        if (!is_name_char(c) || c == '?' || c == '\\') return false;
    }
    // names that read as a cell, a column or R1C1 would be misread unquoted
    if (parse_a1(s)) return false;
    if (column_index(s)) return false;
    if (util::iequals(s, "TRUE") || util::iequals(s, "FALSE")) return false;
    const char first = util::upper(s.front());
    if ((first == 'R' || first == 'C') && s.size() > 1) {
        bool r1c1ish = true;
        for (char c : s) {
            const char u = util::upper(c);
            if (!(u == 'R' || u == 'C' || std::isdigit(static_cast<unsigned char>(c)))) r1c1ish = false;
        }
        if (r1c1ish) return false;
    }
    return true;
}

std::string ref_body(const CellRef& r) {
    std::string out;
    if (r.column != 0) {
        if (r.column_absolute) out += '$';
        out += column_name(r.column);
    }
    if (r.row != 0) {
        if (r.row_absolute) out += '$';
        out += std::to_string(r.row);
    }
    return out;
}

std::string sheet_prefix(const std::optional<std::string>& sheet) {
    return sheet ? quote_sheet(*sheet) + "!" : std::string();
}

void print(const Node& n, std::string& out);

struct Printer {
    std::string& out;

    void operator()(const NumberLit& v) { out += util::format_double(v.value); }
    void operator()(const TextLit& v) {
        out += '"';
        for (char c : v.value) {
            if (c == '"') out += '"';
            out += c;
        }
        out += '"';
    }
    void operator()(const BoolLit& v) { out += v.value ? "TRUE" : "FALSE"; }
    void operator()(const ErrorLit& v) { out += v.code; }
    void operator()(const CellRef& v) { out += sheet_prefix(v.sheet) + ref_body(v); }
    void operator()(const RangeRef& v) { out += sheet_prefix(v.start.sheet) + ref_body(v.start) + ":" + ref_body(v.end); }
    void operator()(const NameRef& v) { out += v.identifier; }
    void operator()(const MissingArg&) {}
    void operator()(const ArrayConstant& v) { out += v.text; }
    void operator()(const FunctionCall& v) {
        out += v.name;
        out += '(';
        for (std::size_t i = 0; i < v.args.size(); ++i) {
            if (i) out += ',';
            print(v.args[i], out);
        }
        out += ')';
    }
    void operator()(const BinaryOp& v) {
        print(*v.left, out);
        out += symbol(v.op);
        print(*v.right, out);
    }
    void operator()(const UnaryOp& v) {
        if (v.op == UnaryOperator::percent) {
            print(*v.operand, out);
            out += '%';
        } else {
            out += symbol(v.op);
            print(*v.operand, out);
        }
    }
    void operator()(const Paren& v) {
        out += '(';
        print(*v.inner, out);
        out += ')';
    }
};

void print(const Node& n, std::string& out) { std::visit(Printer{out}, n.value); }

}  // namespace

std::string quote_sheet(std::string_view sheet) {
    if (!sheet.empty() && sheet.front() == '[') {
        const auto close = sheet.find(']');
        if (close != std::string_view::npos) {
            const auto rest = sheet.substr(close + 1);
            if (rest.empty() || simple_sheet_name(rest)) return std::string(sheet);
        }
    } else if (simple_sheet_name(sheet)) {
        return std::string(sheet);
    }
    std::string out = "'";
    for (char c : sheet) {
        if (c == '\'') out += '\'';
        out += c;
    }
    out += '\'';
    return out;
}

std::string print_canonical(const Node& node) {
    std::string out = "=";
    print(node, out);
    return out;
}

std::string reference_text(const Reference& ref) {
    return std::visit(
        [](const auto& r) {
            std::string out;
            print(Node{r}, out);
            return out;
        },
        ref);
}

}  // namespace sheetcheck::formula
