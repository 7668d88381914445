#pragma once

#include <map>
#include <span>
#include <vector>

#include "asymfree/cyclo.hpp"
#include "asymfree/matcore.hpp"
#include "asymfree/permutations.hpp"
#include "asymfree/rationals.hpp"
#include "asymfree/wordcore.hpp"

namespace asymfree::weingarten {

inline constexpr int kDefaultOrderCap = 5;
inline constexpr long kDefaultIndexMapGuard = 10'000'000;

// Wg(pi, k) for pi in S_m, as exact rationals. Obtained by inverting the Gram
// matrix G[sigma, tau] = k^cycles(sigma tau^-1) and taking the identity row;
// values depend only on the cycle type, which is how they are stored.
class WeingartenTable {
  public:
    // Requires k >= m (the Gram matrix can be singular below that) and
    // m <= order_cap.
    static WeingartenTable build(int m, long k, int order_cap = kDefaultOrderCap);

    int order() const { return m_; }
    long dim() const { return k_; }
    const Rational& value(const Permutation& p) const;
    const Rational& value_by_type(const std::vector<int>& cycle_type) const;
    const std::map<std::vector<int>, Rational>& by_cycle_type() const { return table_; }

  private:
    WeingartenTable(int m, long k) : m_(m), k_(k) {}
    int m_;
    long k_;
    std::map<std::vector<int>, Rational> table_;
};

// Memoized per-(m, k) table; safe for concurrent readers.
const WeingartenTable& shared_table(int m, long k, int order_cap = kDefaultOrderCap);

// One factor f_{row, col}(u_gen) of an entry-moment integrand; 1-based indices.
struct EntryFactor {
    int row = 1;
    int col = 1;
    int gen = 1;
};

// Index data for integral of prod f_{i a j a}(u_iota) * prod conj(f_{s b t b}(u_eta)).
struct EntryMomentSpec {
    std::vector<EntryFactor> plain;
    std::vector<EntryFactor> conj;
    long k = 1;
};

// True iff the moment is forced to vanish: for some generator the plain and
// conjugated factor counts differ, or the row (or column) multisets disagree.
bool entry_moment_vanishes(const EntryMomentSpec& spec);

// Exact Haar entry moment. Factorizes over generators; per generator sums
// Wg(tau sigma^-1, k) over permutation pairs matching rows and columns. The
// sum is empty exactly in the vanishing cases, so those come out 0 without
// consulting the predicate. Always a real rational.
Rational exact_entry_moment(const EntryMomentSpec& spec, int order_cap = kDefaultOrderCap);

// Exact-arithmetic mirror of matcore::DiagonalObservable. Entries are either
// Gaussian rationals or scale * zeta_k^p (roots-of-unity pattern), so word
// moments stay exact for every constructible pattern.
class ExactDiagonal {
  public:
    struct Entry {
        RationalComplex scale;
        long power = 0;  // of zeta_root_order
    };

    static ExactDiagonal make(int k, matcore::DiagonalPattern pattern, const Rational& M);
    static ExactDiagonal explicit_list(std::vector<RationalComplex> entries, const Rational& M);

    int dim() const { return static_cast<int>(entries_.size()); }
    const Rational& norm_bound() const { return bound_; }
    long root_order() const { return root_order_; }
    const Entry& entry(int a) const { return entries_[static_cast<std::size_t>(a)]; }  // 0-based

    matcore::DiagonalObservable numeric() const;

  private:
    ExactDiagonal(std::vector<Entry> e, Rational b, long ord)
        : entries_(std::move(e)), bound_(std::move(b)), root_order_(ord) {}
    std::vector<Entry> entries_;
    Rational bound_;
    long root_order_;
};

// Exact value of integral over U_k^n of tau_k(g_1(u) x_1 ... g_w(u) x_w):
// enumerates index maps alpha with the cyclic successor, weights each by the
// observable diagonal entries, and sums exact entry moments. Requires expr
// valid for n generators, m <= order_cap, k >= m, k^m within the guard.
ExactScalar exact_word_moment(const wordcore::AlternatingExpression& expr,
                              std::span<const ExactDiagonal> observables, long k, int n,
                              int order_cap = kDefaultOrderCap,
                              long index_map_guard = kDefaultIndexMapGuard);

namespace detail {
// Same sum without the index-pattern memo; tests check the two paths agree.
ExactScalar exact_word_moment_nomemo(const wordcore::AlternatingExpression& expr,
                                     std::span<const ExactDiagonal> observables, long k, int n,
                                     int order_cap = kDefaultOrderCap,
                                     long index_map_guard = kDefaultIndexMapGuard);
}  // namespace detail

}  // namespace asymfree::weingarten
