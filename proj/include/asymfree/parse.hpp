#pragma once

#include <string>
#include <vector>

#include "asymfree/wordcore.hpp"

namespace asymfree::cli {

struct ParsedExpression {
    wordcore::AlternatingExpression expr;
    std::vector<int> slots;  // distinct observable slots in order of first use
};

// Grammar (whitespace-separated tokens):
//   expression := (word_token+ obs_token)+
//   word_token := "h" INT [ "^-1" ]
//   obs_token  := "x" INT
// Consecutive word tokens concatenate into one reduced word; a word that
// reduces to e is an error, as is a trailing word without an observable.
ParsedExpression parse_expression(const std::string& text);

// Canonical text form; parse_expression(format_expression(e)) == e.
std::string format_expression(const wordcore::AlternatingExpression& expr);

}  // namespace asymfree::cli
