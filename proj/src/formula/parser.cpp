#include <utility>

#include "formula/lexer.hpp"
#include "sheetcheck/formula.hpp"
#include "util/strings.hpp"

namespace sheetcheck::formula {

namespace {
std::string parse_error_message(ParseError::Code code, std::size_t pos, const std::string& expected,
                                const std::string& found) {
    if (code == ParseError::Code::unsupported_notation)
        return "UnsupportedNotation at " + std::to_string(pos) + ": " + found + " (only " + expected + " is supported)";
    return "ParseError at " + std::to_string(pos) + ": expected " + expected + ", found " + found;
}
}  // namespace

ParseError::ParseError(Code code, std::size_t position, std::string expected, std::string found)
    : std::runtime_error(parse_error_message(code, position, expected, found)),
      code_(code),
      position_(position),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

Node number(double v) { return Node{NumberLit{v}}; }
Node text(std::string v) { return Node{TextLit{std::move(v)}}; }
Node boolean(bool v) { return Node{BoolLit{v}}; }
Node error(std::string code) { return Node{ErrorLit{std::move(code)}}; }
Node cell(std::uint32_t column, std::uint32_t row, bool col_abs, bool row_abs, std::optional<std::string> sheet) {
    return Node{CellRef{std::move(sheet), column, row, col_abs, row_abs}};
}
Node range(CellRef start, CellRef end) {
    end.sheet = start.sheet;
    return Node{RangeRef{std::move(start), std::move(end)}};
}
Node name(std::string identifier) { return Node{NameRef{std::move(identifier)}}; }
Node call(std::string fn, std::vector<Node> args) {
    return Node{FunctionCall{util::to_upper(fn), std::move(args)}};
}
Node binary(BinaryOperator op, Node left, Node right) {
    return Node{BinaryOp{op, Box<Node>(std::move(left)), Box<Node>(std::move(right))}};
}
Node unary(UnaryOperator op, Node operand) { return Node{UnaryOp{op, Box<Node>(std::move(operand))}}; }
Node paren(Node inner) { return Node{Paren{Box<Node>(std::move(inner))}}; }

std::string_view symbol(BinaryOperator op) {
    switch (op) {
        case BinaryOperator::add: return "+";
        case BinaryOperator::subtract: return "-";
        case BinaryOperator::multiply: return "*";
        case BinaryOperator::divide: return "/";
        case BinaryOperator::power: return "^";
        case BinaryOperator::concat: return "&";
        case BinaryOperator::equal: return "=";
        case BinaryOperator::less: return "<";
        case BinaryOperator::greater: return ">";
        case BinaryOperator::less_equal: return "<=";
        case BinaryOperator::greater_equal: return ">=";
        case BinaryOperator::not_equal: return "<>";
        case BinaryOperator::union_: return ",";
    }
    return "?";
}

std::string_view symbol(UnaryOperator op) {
    switch (op) {
        case UnaryOperator::plus: return "+";
        case UnaryOperator::minus: return "-";
        case UnaryOperator::percent: return "%";
    }
    return "?";
}

int precedence(BinaryOperator op) {
    switch (op) {
        case BinaryOperator::union_: return 0;
        case BinaryOperator::equal:
        case BinaryOperator::less:
        case BinaryOperator::greater:
        case BinaryOperator::less_equal:
        case BinaryOperator::greater_equal:
        case BinaryOperator::not_equal: return 1;
        case BinaryOperator::concat: return 2;
        case BinaryOperator::add:
        case BinaryOperator::subtract: return 3;
        case BinaryOperator::multiply:
        case BinaryOperator::divide: return 4;
        case BinaryOperator::power: return 6;
    }
    return 0;
}

int precedence(const Node& node) {
    if (const auto* b = node.as<BinaryOp>()) return precedence(b->op);
    if (const auto* u = node.as<UnaryOp>()) return u->op == UnaryOperator::percent ? 7 : 5;
    return 8;
}

namespace {

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    Node formula() {
        Node n = comparison();
        if (peek().kind != TokenKind::end) fail("operator or end of formula");
        return n;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& take() { return toks_[pos_++]; }
    bool peek_op(std::string_view op) const { return peek().kind == TokenKind::op && peek().text == op; }

    [[noreturn]] void fail(std::string expected) const {
        const Token& t = peek();
        std::string found = t.kind == TokenKind::end ? "end of formula" : std::string(describe(t.kind));
        if (!t.text.empty() && t.kind != TokenKind::end) found += " '" + t.text + "'";
        throw ParseError(ParseError::Code::syntax, t.position, std::move(expected), std::move(found));
    }

    std::optional<BinaryOperator> comparison_op() const {
        if (peek().kind != TokenKind::op) return std::nullopt;
        const auto& s = peek().text;
        if (s == "=") return BinaryOperator::equal;
        if (s == "<") return BinaryOperator::less;
        if (s == ">") return BinaryOperator::greater;
        if (s == "<=") return BinaryOperator::less_equal;
        if (s == ">=") return BinaryOperator::greater_equal;
        if (s == "<>") return BinaryOperator::not_equal;
        return std::nullopt;
    }

    Node comparison() {
        Node left = concat();
        while (auto op = comparison_op()) {
            take();
            left = binary(*op, std::move(left), concat());
        }
        return left;
    }

    Node concat() {
        Node left = additive();
        while (peek_op("&")) {
            take();
            left = binary(BinaryOperator::concat, std::move(left), additive());
        }
        return left;
    }

    Node additive() {
        Node left = multiplicative();
        while (peek_op("+") || peek_op("-")) {
            const auto op = take().text == "+" ? BinaryOperator::add : BinaryOperator::subtract;
            left = binary(op, std::move(left), multiplicative());
        }
        return left;
    }

    Node multiplicative() {
        Node left = prefix();
        while (peek_op("*") || peek_op("/")) {
            const auto op = take().text == "*" ? BinaryOperator::multiply : BinaryOperator::divide;
            left = binary(op, std::move(left), prefix());
        }
        return left;
    }

    Node prefix() {
        if (peek_op("+") || peek_op("-")) {
            const auto op = take().text == "+" ? UnaryOperator::plus : UnaryOperator::minus;
            return unary(op, prefix());
        }
        return power();
    }

    Node power() {
        Node left = postfix();
        while (peek_op("^")) {
            take();
            left = binary(BinaryOperator::power, std::move(left), power_operand());
        }
        return left;
    }

    Node power_operand() {
        if (peek_op("+") || peek_op("-")) {
            const auto op = take().text == "+" ? UnaryOperator::plus : UnaryOperator::minus;
            return unary(op, power_operand());
        }
        return postfix();
    }

    Node postfix() {
        Node n = primary();
        while (peek_op("%")) {
            take();
            n = unary(UnaryOperator::percent, std::move(n));
        }
        return n;
    }

    Node primary() {
        const Token& t = peek();
        switch (t.kind) {
            case TokenKind::number: take(); return number(t.number);
            case TokenKind::string: take(); return text(t.text);
            case TokenKind::boolean: take(); return boolean(t.number != 0);
            case TokenKind::error: take(); return error(t.text);
            case TokenKind::array_constant: take(); return Node{ArrayConstant{t.text}};
            case TokenKind::name: {
                take();
                if (peek().kind == TokenKind::colon) {
                    throw ParseError(ParseError::Code::unsupported_notation, peek().position, "static A1 range",
                                     "range built from a name");
                }
                return name(t.text);
            }
            case TokenKind::area: {
                take();
                return range(t.ref, t.ref_end);
            }
            case TokenKind::cell: return reference();
            case TokenKind::function: return function_call();
            case TokenKind::lparen: return parenthesized();
            default: fail("operand");
        }
    }

    Node reference() {
        const Token first = take();
        if (peek().kind != TokenKind::colon) return Node{first.ref};
        const std::size_t colon_pos = take().position;
        const Token& second = peek();
        if (second.kind != TokenKind::cell) {
            if (second.kind == TokenKind::function || second.kind == TokenKind::name)
                throw ParseError(ParseError::Code::unsupported_notation, second.position, "static A1 range",
                                 "dynamic range");
            fail("cell reference after ':'");
        }
        take();
        CellRef end = second.ref;
        if (second.has_sheet) {
            if (!first.has_sheet || !util::iequals(*first.ref.sheet, *second.ref.sheet))
                throw ParseError(ParseError::Code::unsupported_notation, colon_pos, "single-sheet range",
                                 "range spanning sheets");
        }
        return range(first.ref, std::move(end));
    }

    Node function_call() {
        std::string fn = util::to_upper(take().text);
        for (std::string_view prefix : {"_XLFN._XLWS.", "_XLFN.", "_XLWS."}) {
            if (fn.rfind(prefix, 0) == 0) {
                fn.erase(0, prefix.size());
                break;
            }
        }
        if (peek().kind != TokenKind::lparen) fail("'('");
        take();
        std::vector<Node> args;
        if (peek().kind == TokenKind::rparen) {
            take();
            return call(std::move(fn), std::move(args));
        }
        while (true) {
            if (peek().kind == TokenKind::comma || peek().kind == TokenKind::rparen) args.push_back(Node{MissingArg{}});
            else args.push_back(comparison());
            if (peek().kind == TokenKind::comma) {
                take();
                continue;
            }
            if (peek().kind == TokenKind::rparen) {
                take();
                break;
            }
            fail("',' or ')'");
        }
        return call(std::move(fn), std::move(args));
    }

    Node parenthesized() {
        take();
        Node inner = comparison();
        while (peek().kind == TokenKind::comma) {
            take();
            inner = binary(BinaryOperator::union_, std::move(inner), comparison());
        }
        if (peek().kind != TokenKind::rparen) fail("')'");
        take();
        return paren(std::move(inner));
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

}  // namespace

Node parse(std::string_view source) {
    if (source.empty() || source.front() != '=')
        throw ParseError(ParseError::Code::syntax, 0, "'='", source.empty() ? "empty text" : std::string(1, source.front()));
    if (util::trim(source.substr(1)).empty()) throw ParseError(ParseError::Code::syntax, 1, "expression", "end of formula");
    auto tokens = tokenize(source.substr(1));
    for (auto& t : tokens) t.position += 1;
    return Parser(std::move(tokens)).formula();
}

}  // namespace sheetcheck::formula
