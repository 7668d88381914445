#include "asymfree/parse.hpp"

#include <cctype>
#include <sstream>

namespace asymfree::cli {

namespace {

[[noreturn]] void syntax_error(std::size_t token_pos, const std::string& token,
                               const std::string& why) {
    throw_invalid("expression syntax error at token " + std::to_string(token_pos + 1) + " ('" +
                  token + "'): " + why);
}

// "h3" / "h3^-1" / "x2"; returns (kind, index, inverted).
struct Token {
    enum class Kind { Word, Obs } kind;
    int index;
    bool inverted;
};

Token lex(std::size_t pos, const std::string& tok) {
    if (tok.empty()) syntax_error(pos, tok, "empty token");
    Token out{Token::Kind::Word, 0, false};
    if (tok[0] == 'h')
        out.kind = Token::Kind::Word;
    else if (tok[0] == 'x')
        out.kind = Token::Kind::Obs;
    else
        syntax_error(pos, tok, "expected 'h<g>', 'h<g>^-1' or 'x<slot>'");
    std::size_t p = 1, start = p;
    while (p < tok.size() && std::isdigit(static_cast<unsigned char>(tok[p]))) ++p;
    if (p == start) syntax_error(pos, tok, "missing index");
    out.index = std::stoi(tok.substr(start, p - start));
    if (out.index < 1) syntax_error(pos, tok, "indices are 1-based");
    if (p < tok.size()) {
        if (out.kind != Token::Kind::Word || tok.substr(p) != "^-1")
            syntax_error(pos, tok, "unexpected suffix");
        out.inverted = true;
    }
    return out;
}

}  // namespace

ParsedExpression parse_expression(const std::string& text) {
    std::istringstream is(text);
    std::vector<std::pair<std::size_t, Token>> tokens;
    std::string raw;
    std::size_t pos = 0;
    while (is >> raw) tokens.emplace_back(pos++, lex(tokens.size(), raw));
    if (tokens.empty()) throw_invalid("expression syntax error: empty expression");

    std::vector<wordcore::AlternatingExpression::Term> terms;
    std::vector<int> slots;
    std::vector<wordcore::Letter> pending;
    for (const auto& [tpos, tok] : tokens) {
        if (tok.kind == Token::Kind::Word) {
            pending.push_back({tok.index, tok.inverted ? -1 : 1});
        } else {
            if (pending.empty())
                syntax_error(tpos, "x" + std::to_string(tok.index),
                             "observable without a preceding word");
            wordcore::ReducedWord word = wordcore::ReducedWord::reduce(pending);
            if (word.is_identity())
                throw_invalid("expression: word before x" + std::to_string(tok.index) +
                              " reduces to e (the g_i must lie in F_n \\ {e})");
            terms.push_back({std::move(word), tok.index});
            pending.clear();
            bool known = false;
            for (int s : slots) known = known || s == tok.index;
            if (!known) slots.push_back(tok.index);
        }
    }
    if (!pending.empty())
        throw_invalid("expression syntax error: trailing word without an observable");
    return ParsedExpression{wordcore::AlternatingExpression(std::move(terms)), std::move(slots)};
}

std::string format_expression(const wordcore::AlternatingExpression& expr) {
    std::ostringstream os;
    bool first = true;
    for (const auto& term : expr.terms()) {
        for (const auto& l : term.word.letters()) {
            if (!first) os << ' ';
            first = false;
            os << 'h' << l.generator;
            if (l.exponent < 0) os << "^-1";
        }
        os << " x" << term.slot;
        first = false;
    }
    return os.str();
}

}  // namespace asymfree::cli
