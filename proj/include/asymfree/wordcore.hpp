#pragma once

#include <span>
#include <string>
#include <vector>

#include "asymfree/matcore.hpp"

namespace asymfree::wordcore {

// One letter h_g^e of the free group F_n; generators are 1-based.
struct Letter {
    int generator = 1;
    int exponent = 1;  // +1 or -1

    friend bool operator==(const Letter& a, const Letter& b) {
        return a.generator == b.generator && a.exponent == b.exponent;
    }
};

// Reduced word: no adjacent (g,+1)(g,-1) or (g,-1)(g,+1) pair; the empty word
// is the identity e. Instances are immutable once built.
class ReducedWord {
  public:
    ReducedWord() = default;  // identity

    // Free reduction of an arbitrary letter sequence; idempotent.
    static ReducedWord reduce(std::span<const Letter> letters);
    static ReducedWord from_letters(std::initializer_list<Letter> letters);

    ReducedWord inverse() const;
    ReducedWord concat(const ReducedWord& rhs) const;  // reduce(this || rhs)

    const std::vector<Letter>& letters() const { return letters_; }
    int length() const { return static_cast<int>(letters_.size()); }
    bool is_identity() const { return letters_.empty(); }
    int max_generator() const;

    std::string str() const;  // e.g. "h1 h2^-1", "e" for the identity

    friend bool operator==(const ReducedWord& a, const ReducedWord& b) {
        return a.letters_ == b.letters_;
    }

  private:
    std::vector<Letter> letters_;
};

// Homomorphic evaluation: letters map to the matrices (exponent -1 is the
// conjugate transpose), e maps to the identity.
matcore::ComplexMatrix evaluate(const ReducedWord& w,
                                std::span<const matcore::UnitaryMatrix> us);

// The theorem's object g_1 x_1 g_2 x_2 ... g_w x_w. Observables are slot
// references (1-based) into an externally supplied list, so one expression can
// be evaluated at many k.
class AlternatingExpression {
  public:
    struct Term {
        ReducedWord word;
        int slot = 1;
    };

    explicit AlternatingExpression(std::vector<Term> terms);

    const std::vector<Term>& terms() const { return terms_; }
    int word_count() const { return static_cast<int>(terms_.size()); }  // w
    int total_length() const { return total_length_; }                  // m
    // m_nu = cumulative letter counts m_1, ..., m_w (m_w == m).
    std::vector<int> cumulative_lengths() const;
    int max_generator() const;
    int max_slot() const;

  private:
    std::vector<Term> terms_;
    int total_length_ = 0;
};

// Accepts iff all words are nonempty and reduced, generator indices <= n, and
// the total letter count equals declared_m. Throws Error(InvalidArgument).
void validate_expression(const AlternatingExpression& expr, int n, int declared_m);

}  // namespace asymfree::wordcore
