#include <algorithm>

#include "sheetcheck/formula.hpp"
#include "sheetcheck/workbook.hpp"

namespace sheetcheck::formula {

std::vector<Reference> references(const Node& node) {
    std::vector<Reference> out;
    walk(node, [&](const Node& n) {
        if (const auto* c = n.as<CellRef>()) out.emplace_back(*c);
        else if (const auto* r = n.as<RangeRef>()) out.emplace_back(*r);
        else if (const auto* nm = n.as<NameRef>()) out.emplace_back(*nm);
    });
    return out;
}

std::string_view to_string(NestingSemantics s) {
    return s == NestingSemantics::builtin_only ? "builtin_only" : "operators_count";
}

std::optional<NestingSemantics> nesting_semantics_from_string(std::string_view text) {
    if (text == "builtin_only" || text == "builtin") return NestingSemantics::builtin_only;
    if (text == "operators_count" || text == "operator" || text == "operators") return NestingSemantics::operators_count;
    return std::nullopt;
}

std::size_t nesting_depth(const Node& node, NestingSemantics semantics) {
    const bool ops = semantics == NestingSemantics::operators_count;
    if (const auto* fc = node.as<FunctionCall>()) {
        std::size_t deepest = 0;
        for (const auto& a : fc->args) deepest = std::max(deepest, nesting_depth(a, semantics));
        return deepest + 1;
    }
    if (const auto* b = node.as<BinaryOp>()) {
        const std::size_t below = std::max(nesting_depth(*b->left, semantics), nesting_depth(*b->right, semantics));
        return below + (ops ? 1 : 0);
    }
    if (const auto* u = node.as<UnaryOp>()) return nesting_depth(*u->operand, semantics) + (ops ? 1 : 0);
    if (const auto* p = node.as<Paren>()) return nesting_depth(*p->inner, semantics);
    return 0;
}

namespace {
void collect_literals(const Node& n, NodePath& path, std::vector<NumericLiteral>& out) {
    auto child = [&](const Node& c, std::size_t idx) {
        path.push_back(idx);
        collect_literals(c, path, out);
        path.pop_back();
    };
    if (const auto* num = n.as<NumberLit>()) {
        out.push_back({num->value, path});
    } else if (const auto* fc = n.as<FunctionCall>()) {
        for (std::size_t i = 0; i < fc->args.size(); ++i) child(fc->args[i], i);
    } else if (const auto* b = n.as<BinaryOp>()) {
        child(*b->left, 0);
        child(*b->right, 1);
    } else if (const auto* u = n.as<UnaryOp>()) {
        child(*u->operand, 0);
    } else if (const auto* p = n.as<Paren>()) {
        child(*p->inner, 0);
    }
}

void shift_ref(CellRef& r, std::int64_t rows, std::int64_t columns) {
    if (r.row != 0 && !r.row_absolute) {
        const std::int64_t v = std::clamp<std::int64_t>(std::int64_t(r.row) + rows, 1, kMaxRows);
        r.row = static_cast<std::uint32_t>(v);
    }
    if (r.column != 0 && !r.column_absolute) {
        const std::int64_t v = std::clamp<std::int64_t>(std::int64_t(r.column) + columns, 1, kMaxColumns);
        r.column = static_cast<std::uint32_t>(v);
    }
}

void shift_in_place(Node& n, std::int64_t rows, std::int64_t columns) {
    if (auto* c = std::get_if<CellRef>(&n.value)) {
        shift_ref(*c, rows, columns);
    } else if (auto* r = std::get_if<RangeRef>(&n.value)) {
        shift_ref(r->start, rows, columns);
        shift_ref(r->end, rows, columns);
    } else if (auto* fc = std::get_if<FunctionCall>(&n.value)) {
        for (auto& a : fc->args) shift_in_place(a, rows, columns);
    } else if (auto* b = std::get_if<BinaryOp>(&n.value)) {
        shift_in_place(*b->left, rows, columns);
        shift_in_place(*b->right, rows, columns);
    } else if (auto* u = std::get_if<UnaryOp>(&n.value)) {
        shift_in_place(*u->operand, rows, columns);
    } else if (auto* p = std::get_if<Paren>(&n.value)) {
        shift_in_place(*p->inner, rows, columns);
    }
}
}  // namespace

std::vector<NumericLiteral> numeric_literals(const Node& node) {
    std::vector<NumericLiteral> out;
    NodePath path;
    collect_literals(node, path, out);
    return out;
}

Node shift_relative(const Node& node, std::int64_t rows, std::int64_t columns) {
    Node copy = node;
    shift_in_place(copy, rows, columns);
    return copy;
}

}  // namespace sheetcheck::formula
