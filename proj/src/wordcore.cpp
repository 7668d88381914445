#include "asymfree/wordcore.hpp"

#include <algorithm>
#include <sstream>

namespace asymfree::wordcore {

namespace {

void validate_letter(const Letter& l) {
    if (l.generator < 1) throw_invalid("Letter: generator index must be >= 1");
    if (l.exponent != 1 && l.exponent != -1) throw_invalid("Letter: exponent must be +1 or -1");
}

}  // namespace

ReducedWord ReducedWord::reduce(std::span<const Letter> letters) {
    ReducedWord out;
    out.letters_.reserve(letters.size());
    for (const Letter& l : letters) {
        validate_letter(l);
        if (!out.letters_.empty() && out.letters_.back().generator == l.generator &&
            out.letters_.back().exponent == -l.exponent) {
            out.letters_.pop_back();
        } else {
            out.letters_.push_back(l);
        }
    }
    return out;
}

ReducedWord ReducedWord::from_letters(std::initializer_list<Letter> letters) {
    return reduce(std::span<const Letter>(letters.begin(), letters.size()));
}

ReducedWord ReducedWord::inverse() const {
    ReducedWord out;
    out.letters_.reserve(letters_.size());
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it)
        out.letters_.push_back({it->generator, -it->exponent});
    return out;
}

ReducedWord ReducedWord::concat(const ReducedWord& rhs) const {
    std::vector<Letter> all = letters_;
    all.insert(all.end(), rhs.letters_.begin(), rhs.letters_.end());
    return reduce(all);
}

int ReducedWord::max_generator() const {
    int g = 0;
    for (const Letter& l : letters_) g = std::max(g, l.generator);
    return g;
}

std::string ReducedWord::str() const {
    if (letters_.empty()) return "e";
    std::ostringstream os;
    for (std::size_t i = 0; i < letters_.size(); ++i) {
        if (i) os << ' ';
        os << 'h' << letters_[i].generator;
        if (letters_[i].exponent < 0) os << "^-1";
    }
    return os.str();
}

matcore::ComplexMatrix evaluate(const ReducedWord& w,
                                std::span<const matcore::UnitaryMatrix> us) {
    const int n = static_cast<int>(us.size());
    int k = 0;
    for (const auto& u : us) {
        if (k == 0) k = u.dim();
        if (u.dim() != k) throw_invalid("evaluate: unitary tuple dimension mismatch");
    }
    if (w.max_generator() > n) throw_invalid("evaluate: generator index out of range");
    if (w.is_identity() && k == 0)
        throw_invalid("evaluate: identity word needs at least one matrix to fix k");
    matcore::ComplexMatrix acc = matcore::ComplexMatrix::Identity(k, k);
    for (const Letter& l : w.letters()) {
        const matcore::ComplexMatrix& u = us[static_cast<std::size_t>(l.generator - 1)].matrix();
        if (l.exponent > 0)
            acc = acc * u;
        else
            acc = acc * u.adjoint();
    }
    return acc;
}

AlternatingExpression::AlternatingExpression(std::vector<Term> terms)
    : terms_(std::move(terms)) {
    if (terms_.empty()) throw_invalid("AlternatingExpression: needs at least one term");
    for (const Term& t : terms_) {
        if (t.slot < 1) throw_invalid("AlternatingExpression: observable slot must be >= 1");
        total_length_ += t.word.length();
    }
}

std::vector<int> AlternatingExpression::cumulative_lengths() const {
    std::vector<int> out;
    out.reserve(terms_.size());
    int acc = 0;
    for (const Term& t : terms_) {
        acc += t.word.length();
        out.push_back(acc);
    }
    return out;
}

int AlternatingExpression::max_generator() const {
    int g = 0;
    for (const Term& t : terms_) g = std::max(g, t.word.max_generator());
    return g;
}

int AlternatingExpression::max_slot() const {
    int s = 0;
    for (const Term& t : terms_) s = std::max(s, t.slot);
    return s;
}

void validate_expression(const AlternatingExpression& expr, int n, int declared_m) {
    for (const auto& t : expr.terms()) {
        if (t.word.is_identity())
            throw_invalid("expression: empty word (the g_i must lie in F_n \\ {e})");
        ReducedWord again = ReducedWord::reduce(t.word.letters());
        if (!(again == t.word)) throw_invalid("expression: word not reduced");
    }
    if (expr.max_generator() > n)
        throw_invalid("expression: generator index exceeds n = " + std::to_string(n));
    if (expr.total_length() != declared_m)
        throw_invalid("expression: length mismatch (sum of word lengths = " +
                      std::to_string(expr.total_length()) + ", declared m = " +
                      std::to_string(declared_m) + ")");
}

}  // namespace asymfree::wordcore
