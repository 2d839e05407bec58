#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace sheetcheck::formula {

struct Node;

/// Owning, deep-copying pointer used for recursive AST children.
template <class T>
class Box {
public:
    Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}
    Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
    Box(Box&&) noexcept = default;
    Box& operator=(const Box& other) {
        if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
        return *this;
    }
    Box& operator=(Box&&) noexcept = default;
    ~Box() = default;

    T& operator*() { return *ptr_; }
    const T& operator*() const { return *ptr_; }
    T* operator->() { return ptr_.get(); }
    const T* operator->() const { return ptr_.get(); }

    friend bool operator==(const Box& a, const Box& b) { return *a.ptr_ == *b.ptr_; }

private:
    std::unique_ptr<T> ptr_;
};

struct NumberLit {
    double value = 0;
    friend bool operator==(const NumberLit&, const NumberLit&) = default;
};
struct TextLit {
    std::string value;
    friend bool operator==(const TextLit&, const TextLit&) = default;
};
struct BoolLit {
    bool value = false;
    friend bool operator==(const BoolLit&, const BoolLit&) = default;
};
struct ErrorLit {
    std::string code;  // "#REF!", "#DIV/0!", ...
    friend bool operator==(const ErrorLit&, const ErrorLit&) = default;
};

/// A1 reference. `column == 0` marks a whole-row endpoint and `row == 0` a
/// whole-column endpoint; both only occur inside a RangeRef.
struct CellRef {
    std::optional<std::string> sheet;  // unquoted; external refs keep their "[Book]" prefix
    std::uint32_t column = 1;
    std::uint32_t row = 1;
    bool column_absolute = false;
    bool row_absolute = false;

    bool is_external() const { return sheet && !sheet->empty() && sheet->front() == '['; }
    bool fully_absolute() const {
        return (column == 0 || column_absolute) && (row == 0 || row_absolute);
    }
    friend bool operator==(const CellRef&, const CellRef&) = default;
};

struct RangeRef {
    CellRef start;  // carries the sheet qualifier for both endpoints
    CellRef end;
    friend bool operator==(const RangeRef&, const RangeRef&) = default;
};

struct NameRef {
    std::string identifier;
    friend bool operator==(const NameRef&, const NameRef&) = default;
};

/// Function argument left blank, e.g. the last argument of "=VLOOKUP(A1,B:C,2,)".
struct MissingArg {
    friend bool operator==(const MissingArg&, const MissingArg&) = default;
};

/// Array constant such as {1,2;3,4}, kept as raw text.
struct ArrayConstant {
    std::string text;
    friend bool operator==(const ArrayConstant&, const ArrayConstant&) = default;
};

struct FunctionCall {
    std::string name;  // uppercase
    std::vector<Node> args;
    friend bool operator==(const FunctionCall&, const FunctionCall&);
};

enum class BinaryOperator {
    add, subtract, multiply, divide, power, concat,
    equal, less, greater, less_equal, greater_equal, not_equal,
    union_,  // "," inside parentheses
};

enum class UnaryOperator { plus, minus, percent };

struct BinaryOp {
    BinaryOperator op;
    Box<Node> left;
    Box<Node> right;
    friend bool operator==(const BinaryOp&, const BinaryOp&);
};

struct UnaryOp {
    UnaryOperator op;
    Box<Node> operand;
    friend bool operator==(const UnaryOp&, const UnaryOp&);
};

struct Paren {
    Box<Node> inner;
    friend bool operator==(const Paren&, const Paren&);
};

struct Node {
    std::variant<NumberLit, TextLit, BoolLit, ErrorLit, CellRef, RangeRef, NameRef, MissingArg,
                 ArrayConstant, FunctionCall, BinaryOp, UnaryOp, Paren>
        value;

    template <class T>
    const T* as() const { return std::get_if<T>(&value); }
    template <class T>
    bool is() const { return std::holds_alternative<T>(value); }

    friend bool operator==(const Node&, const Node&) = default;
};

inline bool operator==(const FunctionCall& a, const FunctionCall& b) {
    return a.name == b.name && a.args == b.args;
}
inline bool operator==(const BinaryOp& a, const BinaryOp& b) {
    return a.op == b.op && a.left == b.left && a.right == b.right;
}
inline bool operator==(const UnaryOp& a, const UnaryOp& b) {
    return a.op == b.op && a.operand == b.operand;
}
inline bool operator==(const Paren& a, const Paren& b) { return a.inner == b.inner; }

// Node factories; mostly for tests and generators.
Node number(double v);
Node text(std::string v);
Node boolean(bool v);
Node error(std::string code);
Node cell(std::uint32_t column, std::uint32_t row, bool col_abs = false, bool row_abs = false,
          std::optional<std::string> sheet = std::nullopt);
Node range(CellRef start, CellRef end);
Node name(std::string identifier);
Node call(std::string name, std::vector<Node> args);
Node binary(BinaryOperator op, Node left, Node right);
Node unary(UnaryOperator op, Node operand);
Node paren(Node inner);

std::string_view symbol(BinaryOperator op);
std::string_view symbol(UnaryOperator op);

/// Binding strength: larger binds tighter. Used by the parser and by AST generators.
int precedence(const Node& node);
int precedence(BinaryOperator op);

class ParseError : public std::runtime_error {
public:
    enum class Code { syntax, unsupported_notation };

    ParseError(Code code, std::size_t position, std::string expected, std::string found);

    Code code() const { return code_; }
    std::size_t position() const { return position_; }
    const std::string& expected() const { return expected_; }
    const std::string& found() const { return found_; }

private:
    Code code_;
    std::size_t position_;
    std::string expected_;
    std::string found_;
};

/// Parse a formula beginning with '='. A1 notation only.
Node parse(std::string_view text);

/// Deterministic text form starting with '='; parse(print_canonical(n)) == n.
std::string print_canonical(const Node& node);

/// Quote a sheet name for use in a reference when needed.
std::string quote_sheet(std::string_view sheet);

using Reference = std::variant<CellRef, RangeRef, NameRef>;

/// Reference leaves in left-to-right order, duplicates preserved.
std::vector<Reference> references(const Node& node);

enum class NestingSemantics { builtin_only, operators_count };
std::string_view to_string(NestingSemantics s);
std::optional<NestingSemantics> nesting_semantics_from_string(std::string_view text);

/// Maximum number of function nodes on a root-to-leaf path. Paren nodes are transparent.
std::size_t nesting_depth(const Node& node, NestingSemantics semantics);

/// Child indices from the root: call args by position, binary left=0/right=1, unary and paren 0.
using NodePath = std::vector<std::size_t>;

struct NumericLiteral {
    double value;
    NodePath path;
    friend bool operator==(const NumericLiteral&, const NumericLiteral&) = default;
};

std::vector<NumericLiteral> numeric_literals(const Node& node);

/// Call `visit(node)` for every node in pre-order.
template <class F>
void walk(const Node& node, F&& visit);

/// Shift every relative reference by (rows, columns). Used to expand shared formulas.
Node shift_relative(const Node& node, std::int64_t rows, std::int64_t columns);

std::string reference_text(const Reference& ref);

// ---- implementation of walk ----
namespace detail {
template <class F>
void walk_impl(const Node& node, F& visit) {
    visit(node);
    if (const auto* fc = node.as<FunctionCall>()) {
        for (const auto& a : fc->args) walk_impl(a, visit);
    } else if (const auto* b = node.as<BinaryOp>()) {
        walk_impl(*b->left, visit);
        walk_impl(*b->right, visit);
    } else if (const auto* u = node.as<UnaryOp>()) {
        walk_impl(*u->operand, visit);
    } else if (const auto* p = node.as<Paren>()) {
        walk_impl(*p->inner, visit);
    }
}
}  // namespace detail

template <class F>
void walk(const Node& node, F&& visit) {
    detail::walk_impl(node, visit);
}

}  // namespace sheetcheck::formula
