#include "formula/lexer.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <optional>

#include "sheetcheck/workbook.hpp"
#include "util/strings.hpp"

namespace sheetcheck::formula {
namespace {

constexpr std::array<std::string_view, 10> kErrorCodes = {
    "#NULL!", "#DIV/0!", "#VALUE!", "#REF!", "#NAME?", "#NUM!", "#N/A", "#GETTING_DATA", "#SPILL!", "#CALC!"};

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

[[noreturn]] void syntax(std::size_t pos, std::string expected, std::string found) {
    throw ParseError(ParseError::Code::syntax, pos, std::move(expected), std::move(found));
}

[[noreturn]] void unsupported(std::size_t pos, std::string what, std::string found) {
    throw ParseError(ParseError::Code::unsupported_notation, pos, std::move(what), std::move(found));
}

struct ColumnPart {
    std::uint32_t column;
    bool absolute;
    std::size_t end;
};

std::optional<ColumnPart> read_column(std::string_view s, std::size_t i) {
    bool abs = false;
    if (i < s.size() && s[i] == '$') {
        abs = true;
        ++i;
    }
    const std::size_t begin = i;
    while (i < s.size() && is_alpha(s[i]) && i - begin < 4) ++i;
    if (i == begin || i - begin > 3) return std::nullopt;
    auto col = column_index(s.substr(begin, i - begin));
    if (!col) return std::nullopt;
    return ColumnPart{*col, abs, i};
}

struct RowPart {
    std::uint32_t row;
    bool absolute;
    std::size_t end;
};

std::optional<RowPart> read_row(std::string_view s, std::size_t i) {
    bool abs = false;
    if (i < s.size() && s[i] == '$') {
        abs = true;
        ++i;
    }
    const std::size_t begin = i;
    while (i < s.size() && is_digit(s[i])) ++i;
    if (i == begin || i - begin > 7) return std::nullopt;
    std::uint32_t row = 0;
    std::from_chars(s.data() + begin, s.data() + i, row);
    if (row < 1 || row > kMaxRows) return std::nullopt;
    return RowPart{row, abs, i};
}

// A reference must not run straight into more identifier text or a call.
bool reference_ends_at(std::string_view s, std::size_t i) {
    return i >= s.size() || (!is_name_char(s[i]) && s[i] != '(' && s[i] != '!' && s[i] != '$');
}

bool looks_like_r1c1(std::string_view s, std::size_t i) {
    auto part = [&](char letter) {
        if (i >= s.size() || util::upper(s[i]) != letter) return false;
        ++i;
        if (i < s.size() && s[i] == '[') {
            ++i;
            if (i < s.size() && s[i] == '-') ++i;
            const std::size_t b = i;
            while (i < s.size() && is_digit(s[i])) ++i;
            if (i == b || i >= s.size() || s[i] != ']') return false;
            ++i;
        } else {
            while (i < s.size() && is_digit(s[i])) ++i;
        }
        return true;
    };
    const std::size_t start = i;
    if (!part('R')) return false;
    if (!part('C')) return false;
    // "RC" alone is legal only as R1C1; require something beyond the letters
    return i - start > 2 && (i >= s.size() || !is_name_char(s[i]));
}

class Lexer {
public:
    explicit Lexer(std::string_view text) : s_(text) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_space();
            if (i_ >= s_.size()) break;
            out.push_back(next());
        }
        Token end;
        end.kind = TokenKind::end;
        end.position = s_.size();
        out.push_back(end);
        return out;
    }

private:
    void skip_space() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }

    Token make(TokenKind k, std::size_t pos, std::string text = {}) {
        Token t;
        t.kind = k;
        t.position = pos;
        t.text = std::move(text);
        return t;
    }

    Token next() {
        const std::size_t pos = i_;
        const char c = s_[i_];

        if (auto sheet = sheet_prefix()) return qualified(pos, *sheet);

        switch (c) {
            case '"': return string_literal();
            case '#': return error_literal(pos);
            case '{': return array_constant();
            case '(': ++i_; return make(TokenKind::lparen, pos, "(");
            case ')': ++i_; return make(TokenKind::rparen, pos, ")");
            case ',': ++i_; return make(TokenKind::comma, pos, ",");
            case ':': ++i_; return make(TokenKind::colon, pos, ":");
            case '+': case '-': case '*': case '/': case '^': case '&': case '=': case '%':
                ++i_;
                return make(TokenKind::op, pos, std::string(1, c));
            case '<':
                ++i_;
                if (i_ < s_.size() && (s_[i_] == '=' || s_[i_] == '>')) return make(TokenKind::op, pos, std::string("<") + s_[i_++]);
                return make(TokenKind::op, pos, "<");
            case '>':
                ++i_;
                if (i_ < s_.size() && s_[i_] == '=') {
                    ++i_;
                    return make(TokenKind::op, pos, ">=");
                }
                return make(TokenKind::op, pos, ">");
            case '[':
                unsupported(pos, "A1 reference", "structured or external name reference");
            default: break;
        }

        if (auto ref = reference(pos, std::nullopt)) return *ref;
        if (is_digit(c) || (c == '.' && i_ + 1 < s_.size() && is_digit(s_[i_ + 1]))) return number(pos);
        if (is_name_char(c) && !is_digit(c) && c != '.') return identifier(pos);
        syntax(pos, "operand or operator", std::string(1, c));
    }

    // Returns the unquoted sheet text when a "sheet!" prefix starts at i_.
    std::optional<std::string> sheet_prefix() {
        const std::size_t start = i_;
        if (s_[i_] == '\'') {
            std::string name;
            std::size_t j = i_ + 1;
            while (true) {
                if (j >= s_.size()) syntax(start, "closing quote", "end of formula");
                if (s_[j] == '\'') {
                    if (j + 1 < s_.size() && s_[j + 1] == '\'') {
                        name += '\'';
                        j += 2;
                        continue;
                    }
                    break;
                }
                name += s_[j++];
            }
            ++j;
            if (j >= s_.size() || s_[j] != '!') {
                if (j < s_.size() && s_[j] == ':') unsupported(start, "single-sheet reference", "3-D reference");
                syntax(j, "'!' after quoted sheet name", j < s_.size() ? std::string(1, s_[j]) : "end");
            }
            if (name.find(':') != std::string::npos) unsupported(start, "single-sheet reference", "3-D reference");
            i_ = j + 1;
            return name;
        }
        std::size_t j = i_;
        if (s_[j] == '[') {
            const auto close = s_.find(']', j);
            if (close == std::string_view::npos) syntax(j, "']'", "end of formula");
            j = close + 1;
        }
        while (j < s_.size() && is_name_char(s_[j])) ++j;
        if (j < s_.size() && s_[j] == ':' && s_[start] != '[') {
            // "Sheet1:Sheet3!A1"
            std::size_t k = j + 1;
            while (k < s_.size() && is_name_char(s_[k])) ++k;
            if (k < s_.size() && s_[k] == '!' && k > j + 1) unsupported(start, "single-sheet reference", "3-D reference");
            return std::nullopt;
        }
        if (j == start || j >= s_.size() || s_[j] != '!') {
            if (s_[start] == '[') unsupported(start, "A1 reference", "external name or structured reference");
            return std::nullopt;
        }
        std::string name(s_.substr(start, j - start));
        i_ = j + 1;
        return name;
    }

    Token qualified(std::size_t pos, const std::string& sheet) {
        if (i_ < s_.size() && s_[i_] == '#') {
            Token t = error_literal(pos);
            return t;
        }
        if (auto ref = reference(pos, sheet)) return *ref;
        if (i_ < s_.size() && is_name_char(s_[i_]) && !is_digit(s_[i_])) {
            Token t = identifier(pos);
            if (t.kind != TokenKind::name) syntax(pos, "reference after sheet prefix", t.text);
            t.text = quote_sheet(sheet) + "!" + t.text;
            t.has_sheet = true;
            return t;
        }
        syntax(i_, "reference after sheet prefix", i_ < s_.size() ? std::string(1, s_[i_]) : "end");
    }

    std::optional<Token> reference(std::size_t pos, std::optional<std::string> sheet) {
        const std::size_t at = i_;
        // whole columns: A:C
        if (auto c1 = read_column(s_, at); c1 && c1->end < s_.size() && s_[c1->end] == ':') {
            if (auto c2 = read_column(s_, c1->end + 1); c2 && reference_ends_at(s_, c2->end)) {
                Token t = make(TokenKind::area, pos);
                t.ref = CellRef{sheet, c1->column, 0, c1->absolute, false};
                t.ref_end = CellRef{sheet, c2->column, 0, c2->absolute, false};
                t.has_sheet = sheet.has_value();
                i_ = c2->end;
                return t;
            }
        }
        // whole rows: 1:3
        if (auto r1 = read_row(s_, at); r1 && r1->end < s_.size() && s_[r1->end] == ':') {
            if (auto r2 = read_row(s_, r1->end + 1); r2 && reference_ends_at(s_, r2->end)) {
                Token t = make(TokenKind::area, pos);
                t.ref = CellRef{sheet, 0, r1->row, false, r1->absolute};
                t.ref_end = CellRef{sheet, 0, r2->row, false, r2->absolute};
                t.has_sheet = sheet.has_value();
                i_ = r2->end;
                return t;
            }
        }
        if (auto col = read_column(s_, at)) {
            if (auto row = read_row(s_, col->end); row && reference_ends_at(s_, row->end)) {
                Token t = make(TokenKind::cell, pos);
                t.ref = CellRef{sheet, col->column, row->row, col->absolute, row->absolute};
                t.has_sheet = sheet.has_value();
                i_ = row->end;
                return t;
            }
        }
        if (at < s_.size() && s_[at] == '$') syntax(at, "cell reference", std::string(s_.substr(at, 8)));
        return std::nullopt;
    }

    Token number(std::size_t pos) {
        std::size_t j = i_;
        while (j < s_.size() && is_digit(s_[j])) ++j;
        if (j < s_.size() && s_[j] == '.') {
            ++j;
            while (j < s_.size() && is_digit(s_[j])) ++j;
        }
        if (j < s_.size() && (s_[j] == 'e' || s_[j] == 'E')) {
            std::size_t k = j + 1;
            if (k < s_.size() && (s_[k] == '+' || s_[k] == '-')) ++k;
            if (k < s_.size() && is_digit(s_[k])) {
                while (k < s_.size() && is_digit(s_[k])) ++k;
                j = k;
            }
        }
        const std::string lexeme(s_.substr(i_, j - i_));
        double v = std::strtod(lexeme.c_str(), nullptr);
        Token t = make(TokenKind::number, pos, lexeme);
        t.number = v;
        i_ = j;
        if (i_ < s_.size() && (is_alpha(s_[i_]) || s_[i_] == '_')) syntax(i_, "operator", std::string(1, s_[i_]));
        return t;
    }

    Token identifier(std::size_t pos) {
        if (looks_like_r1c1(s_, i_)) unsupported(pos, "A1 reference", "R1C1 reference");
        std::size_t j = i_;
        while (j < s_.size() && is_name_char(s_[j])) ++j;
        std::string ident(s_.substr(i_, j - i_));
        i_ = j;
        std::size_t k = j;
        while (k < s_.size() && s_[k] == ' ') ++k;
        if (k < s_.size() && s_[k] == '(') {
            i_ = k;
            return make(TokenKind::function, pos, std::move(ident));
        }
        if (j < s_.size() && s_[j] == '[') unsupported(pos, "A1 reference", "structured reference");
        if (util::iequals(ident, "TRUE") || util::iequals(ident, "FALSE")) {
            Token t = make(TokenKind::boolean, pos, util::to_upper(ident));
            t.number = util::iequals(ident, "TRUE") ? 1 : 0;
            return t;
        }
        return make(TokenKind::name, pos, std::move(ident));
    }

    Token string_literal() {
        const std::size_t pos = i_;
        std::string value;
        std::size_t j = i_ + 1;
        while (true) {
            if (j >= s_.size()) syntax(pos, "closing '\"'", "end of formula");
            if (s_[j] == '"') {
                if (j + 1 < s_.size() && s_[j + 1] == '"') {
                    value += '"';
                    j += 2;
                    continue;
                }
                break;
            }
            value += s_[j++];
        }
        i_ = j + 1;
        return make(TokenKind::string, pos, std::move(value));
    }

    Token error_literal(std::size_t pos) {
        for (auto code : kErrorCodes) {
            if (util::starts_with_icase(s_.substr(i_), code)) {
                i_ += code.size();
                if (code == "#REF!") {
                    // "#REF!A1" is a reference to a deleted sheet: swallow the stale address
                    if (auto col = read_column(s_, i_)) {
                        if (auto row = read_row(s_, col->end); row && reference_ends_at(s_, row->end)) i_ = row->end;
                    }
                }
                return make(TokenKind::error, pos, std::string(code));
            }
        }
        syntax(pos, "error literal", std::string(s_.substr(i_, 8)));
    }

    Token array_constant() {
        const std::size_t pos = i_;
        std::size_t j = i_ + 1;
        bool in_string = false;
        while (j < s_.size()) {
            if (s_[j] == '"') in_string = !in_string;
            else if (s_[j] == '}' && !in_string) break;
            ++j;
        }
        if (j >= s_.size()) syntax(pos, "'}'", "end of formula");
        std::string raw(s_.substr(pos, j + 1 - pos));
        i_ = j + 1;
        return make(TokenKind::array_constant, pos, std::move(raw));
    }

    std::string_view s_;
    std::size_t i_ = 0;
};

}  // namespace

bool is_name_char(char c) {
    const auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || c == '_' || c == '.' || c == '\\' || c == '?' || u >= 0x80;
}

std::vector<Token> tokenize(std::string_view text) { return Lexer(text).run(); }

std::string_view describe(TokenKind k) {
    switch (k) {
        case TokenKind::number: return "number";
        case TokenKind::string: return "string";
        case TokenKind::boolean: return "boolean";
        case TokenKind::error: return "error literal";
        case TokenKind::cell: return "cell reference";
        case TokenKind::area: return "row/column range";
        case TokenKind::name: return "name";
        case TokenKind::function: return "function";
        case TokenKind::array_constant: return "array constant";
        case TokenKind::op: return "operator";
        case TokenKind::lparen: return "'('";
        case TokenKind::rparen: return "')'";
        case TokenKind::comma: return "','";
        case TokenKind::colon: return "':'";
        case TokenKind::end: return "end of formula";
    }
    return "token";
}

}  // namespace sheetcheck::formula
