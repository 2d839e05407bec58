#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sheetcheck/formula.hpp"

namespace sheetcheck::formula {

enum class TokenKind {
    number,
    string,
    boolean,
    error,
    cell,          // single cell reference, possibly sheet-qualified
    area,          // whole-column or whole-row range ("A:C", "1:3")
    name,
    function,      // identifier immediately followed by '('
    array_constant,
    op,            // + - * / ^ & = < > <= >= <> %
    lparen,
    rparen,
    comma,
    colon,
    end,
};

struct Token {
    TokenKind kind = TokenKind::end;
    std::size_t position = 0;
    std::string text;  // operator symbol, identifier, string value, error code, raw array text
    double number = 0;
    bool has_sheet = false;  // explicit sheet prefix on a reference or name
    CellRef ref;             // cell / area start
    CellRef ref_end;         // area end
};

/// Throws ParseError on unknown characters or unsupported notation.
std::vector<Token> tokenize(std::string_view text);

std::string_view describe(TokenKind k);

bool is_name_char(char c);

}  // namespace sheetcheck::formula
