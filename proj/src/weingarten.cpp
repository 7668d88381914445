#include "asymfree/weingarten.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>

namespace asymfree::weingarten {

namespace {

constexpr int kHardOrderCap = 8;

std::vector<std::vector<int>> partitions_of(int m) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    // Descending parts; recursion small (p(8) = 22).
    std::function<void(int, int)> rec = [&](int rest, int maxpart) {
        if (rest == 0) {
            out.push_back(cur);
            return;
        }
        for (int p = std::min(rest, maxpart); p >= 1; --p) {
            cur.push_back(p);
            rec(rest - p, p);
            cur.pop_back();
        }
    };
    rec(m, m);
    return out;
}

Permutation representative_of_type(const std::vector<int>& type, int m) {
    std::vector<int> img(static_cast<std::size_t>(m));
    int base = 0;
    for (int len : type) {
        for (int i = 0; i < len; ++i)
            img[static_cast<std::size_t>(base + i)] = base + (i + 1) % len;
        base += len;
    }
    return Permutation(img);
}

// Fraction-free (Bareiss) forward elimination, then rational back-substitution
// of A x = b over the integers. A is destroyed. Throws on a singular system.
std::vector<Rational> solve_integer_system(std::vector<std::vector<BigInt>> a,
                                           std::vector<BigInt> b) {
    const std::size_t n = a.size();
    BigInt prev = 1;
    for (std::size_t p = 0; p < n; ++p) {
        if (a[p][p] == 0) {
            std::size_t r = p + 1;
            while (r < n && a[r][p] == 0) ++r;
            if (r == n) throw_invalid("weingarten: singular Gram system (k too small?)");
            std::swap(a[p], a[r]);
            std::swap(b[p], b[r]);
        }
        for (std::size_t i = p + 1; i < n; ++i) {
            for (std::size_t j = p + 1; j < n; ++j) {
                a[i][j] = (a[p][p] * a[i][j] - a[i][p] * a[p][j]) / prev;
            }
            b[i] = (a[p][p] * b[i] - a[i][p] * b[p]) / prev;
            a[i][p] = 0;
        }
        prev = a[p][p];
    }
    std::vector<Rational> x(n);
    for (std::size_t i = n; i-- > 0;) {
        Rational acc(b[i]);
        for (std::size_t j = i + 1; j < n; ++j) acc -= Rational(a[i][j]) * x[j];
        if (a[i][i] == 0) throw_invalid("weingarten: singular Gram system");
        acc /= Rational(a[i][i]);
        acc.canonicalize();
        x[i] = acc;
    }
    return x;
}

}  // namespace

WeingartenTable WeingartenTable::build(int m, long k, int order_cap) {
    if (m < 1) throw_invalid("weingarten: order m must be >= 1");
    if (order_cap > kHardOrderCap) order_cap = kHardOrderCap;
    if (m > order_cap)
        throw_cap("weingarten: order " + std::to_string(m) + " exceeds cap " +
                  std::to_string(order_cap));
    if (k < m)
        throw_invalid("weingarten: requires k >= m (got k = " + std::to_string(k) +
                      ", m = " + std::to_string(m) + ")");

    // Wg is a class function and the delta at the identity is one too, so the
    // m! x m! Gram system collapses onto cycle types: one equation per type of
    // sigma, one unknown per type of tau.
    const auto types = partitions_of(m);
    const std::size_t n = types.size();
    std::vector<Permutation> reps;
    reps.reserve(n);
    for (const auto& t : types) reps.push_back(representative_of_type(t, m));

    std::map<std::vector<int>, std::size_t> type_index;
    for (std::size_t i = 0; i < n; ++i) type_index[types[i]] = i;

    std::vector<std::vector<BigInt>> gram(n, std::vector<BigInt>(n, BigInt(0)));
    const BigInt kz(k);
    Permutation::for_each(m, [&](const Permutation& tau) {
        const Permutation tau_inv = tau.inverse();
        const std::size_t col = type_index.at(tau.cycle_type());
        for (std::size_t row = 0; row < n; ++row) {
            int cycles = reps[row].compose(tau_inv).cycle_count();
            gram[row][col] += integer_pow(kz, static_cast<unsigned long>(cycles));
        }
    });

    std::vector<BigInt> rhs(n, BigInt(0));
    std::vector<int> identity_type(static_cast<std::size_t>(m), 1);
    rhs[type_index.at(identity_type)] = 1;

    std::vector<Rational> x = solve_integer_system(std::move(gram), std::move(rhs));

    WeingartenTable table(m, k);
    for (std::size_t i = 0; i < n; ++i) table.table_[types[i]] = x[i];
    return table;
}

const Rational& WeingartenTable::value(const Permutation& p) const {
    if (p.size() != m_) throw_invalid("WeingartenTable: permutation order mismatch");
    return value_by_type(p.cycle_type());
}

const Rational& WeingartenTable::value_by_type(const std::vector<int>& cycle_type) const {
    auto it = table_.find(cycle_type);
    if (it == table_.end()) throw_invalid("WeingartenTable: unknown cycle type");
    return it->second;
}

const WeingartenTable& shared_table(int m, long k, int order_cap) {
    static std::map<std::pair<int, long>, std::unique_ptr<WeingartenTable>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(m, k);
    auto it = cache.find(key);
    if (it == cache.end()) {
        auto table = std::make_unique<WeingartenTable>(WeingartenTable::build(m, k, order_cap));
        it = cache.emplace(key, std::move(table)).first;
    }
    return *it->second;
}

namespace {

struct GeneratorFactors {
    std::vector<const EntryFactor*> plain;
    std::vector<const EntryFactor*> conj;
};

std::map<int, GeneratorFactors> group_by_generator(const EntryMomentSpec& spec) {
    std::map<int, GeneratorFactors> out;
    for (const auto& f : spec.plain) out[f.gen].plain.push_back(&f);
    for (const auto& f : spec.conj) out[f.gen].conj.push_back(&f);
    return out;
}

// All bijections sigma: conj positions -> plain positions with
// key(plain[sigma(b)]) == key(conj[b]); emitted as image vectors.
template <typename KeyFn>
void matching_bijections(const std::vector<const EntryFactor*>& plain,
                         const std::vector<const EntryFactor*>& conj, KeyFn key,
                         std::vector<std::vector<int>>& out) {
    const int m = static_cast<int>(plain.size());
    std::vector<int> img(static_cast<std::size_t>(m), -1);
    std::vector<bool> used(static_cast<std::size_t>(m), false);
    std::function<void(int)> rec = [&](int b) {
        if (b == m) {
            out.push_back(img);
            return;
        }
        for (int a = 0; a < m; ++a) {
            if (used[static_cast<std::size_t>(a)]) continue;
            if (key(*plain[static_cast<std::size_t>(a)]) != key(*conj[static_cast<std::size_t>(b)]))
                continue;
            used[static_cast<std::size_t>(a)] = true;
            img[static_cast<std::size_t>(b)] = a;
            rec(b + 1);
            used[static_cast<std::size_t>(a)] = false;
        }
    };
    rec(0);
}

}  // namespace

bool entry_moment_vanishes(const EntryMomentSpec& spec) {
    for (const auto& [gen, fac] : group_by_generator(spec)) {
        (void)gen;
        if (fac.plain.size() != fac.conj.size()) return true;
        auto multiset_of = [](const std::vector<const EntryFactor*>& v, bool rows) {
            std::vector<int> out;
            out.reserve(v.size());
            for (const auto* f : v) out.push_back(rows ? f->row : f->col);
            std::sort(out.begin(), out.end());
            return out;
        };
        if (multiset_of(fac.plain, true) != multiset_of(fac.conj, true)) return true;
        if (multiset_of(fac.plain, false) != multiset_of(fac.conj, false)) return true;
    }
    return false;
}

Rational exact_entry_moment(const EntryMomentSpec& spec, int order_cap) {
    for (const auto& f : spec.plain)
        if (f.row < 1 || f.row > spec.k || f.col < 1 || f.col > spec.k)
            throw_invalid("entry moment: index out of range 1..k");
    for (const auto& f : spec.conj)
        if (f.row < 1 || f.row > spec.k || f.col < 1 || f.col > spec.k)
            throw_invalid("entry moment: index out of range 1..k");

    Rational result = 1;
    for (const auto& [gen, fac] : group_by_generator(spec)) {
        (void)gen;
        // Phase invariance u -> e^{i theta} u forces unbalanced factors to 0.
        if (fac.plain.size() != fac.conj.size()) return Rational(0);
        const int m = static_cast<int>(fac.plain.size());
        if (m == 0) continue;
        const WeingartenTable& table = shared_table(m, spec.k, order_cap);

        std::vector<std::vector<int>> sigmas, taus;
        matching_bijections(fac.plain, fac.conj, [](const EntryFactor& f) { return f.row; },
                            sigmas);
        if (sigmas.empty()) return Rational(0);
        matching_bijections(fac.plain, fac.conj, [](const EntryFactor& f) { return f.col; },
                            taus);
        if (taus.empty()) return Rational(0);

        Rational gen_sum = 0;
        for (const auto& simg : sigmas) {
            const Permutation sigma_inv = Permutation(simg).inverse();
            for (const auto& timg : taus) {
                gen_sum += table.value(Permutation(timg).compose(sigma_inv));
            }
        }
        result *= gen_sum;
        if (result == 0) return result;
    }
    result.canonicalize();
    return result;
}

ExactDiagonal ExactDiagonal::make(int k, matcore::DiagonalPattern pattern, const Rational& M) {
    if (k < 1) throw_invalid("ExactDiagonal: k must be positive");
    if (M <= 0) throw_invalid("ExactDiagonal: M must be positive");
    std::vector<Entry> e(static_cast<std::size_t>(k));
    long order = 1;
    switch (pattern) {
        case matcore::DiagonalPattern::Alternating:
            if (k % 2 != 0) throw_invalid("ExactDiagonal: alternating pattern requires even k");
            for (int a = 0; a < k; ++a)
                e[static_cast<std::size_t>(a)].scale = RationalComplex{a % 2 == 0 ? M : -M, 0};
            break;
        case matcore::DiagonalPattern::Balanced:
            for (int a = 0; a < k; ++a)
                e[static_cast<std::size_t>(a)].scale = RationalComplex{a % 2 == 0 ? M : -M, 0};
            if (k % 2 != 0) e.back().scale = RationalComplex{0, 0};
            break;
        case matcore::DiagonalPattern::RootsOfUnity:
            if (k < 2) throw_invalid("ExactDiagonal: roots_of_unity needs k >= 2 for trace 0");
            order = k;
            for (int a = 0; a < k; ++a) {
                e[static_cast<std::size_t>(a)].scale = RationalComplex{M, 0};
                e[static_cast<std::size_t>(a)].power = a;
            }
            break;
    }
    return ExactDiagonal(std::move(e), M, order);
}

ExactDiagonal ExactDiagonal::explicit_list(std::vector<RationalComplex> entries,
                                           const Rational& M) {
    if (entries.empty()) throw_invalid("ExactDiagonal: empty entry list");
    if (M <= 0) throw_invalid("ExactDiagonal: M must be positive");
    RationalComplex sum;
    const Rational trace_tol = rational_from_double(1e-12);
    const Rational norm_slack = rational_from_double(1e-12);
    for (const auto& v : entries) sum += v;
    if (sum.abs_upper() > trace_tol)
        throw_invalid("ExactDiagonal: trace not zero within 1e-12");
    Rational m2 = M * M * (1 + norm_slack);
    for (const auto& v : entries)
        if (v.abs2() > m2) throw_invalid("ExactDiagonal: entry modulus exceeds norm bound M");
    std::vector<Entry> e(entries.size());
    for (std::size_t a = 0; a < entries.size(); ++a) e[a].scale = std::move(entries[a]);
    return ExactDiagonal(std::move(e), M, 1);
}

matcore::DiagonalObservable ExactDiagonal::numeric() const {
    std::vector<std::complex<double>> out(entries_.size());
    for (std::size_t a = 0; a < entries_.size(); ++a) {
        const Entry& e = entries_[a];
        std::complex<double> v = e.scale.to_complex();
        if (root_order_ > 1 && e.power != 0) {
            double th = 2.0 * std::numbers::pi * static_cast<double>(e.power) /
                        static_cast<double>(root_order_);
            v *= std::complex<double>(std::cos(th), std::sin(th));
        }
        out[a] = v;
    }
    if (root_order_ > 1) {
        std::complex<double> sum = 0;
        for (const auto& v : out) sum += v;
        out[0] -= sum;  // snap the ~1e-16 float residue of the exact-zero trace
    }
    return matcore::DiagonalObservable::explicit_list(std::move(out), to_double(bound_));
}

namespace {

struct FlatLetter {
    int gen;
    int exp;
};

std::vector<int> rgs_pattern(const std::vector<int>& alpha) {
    std::vector<int> labels(alpha.size(), -1);
    std::vector<int> seen;  // value -> label by first occurrence
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        int lab = -1;
        for (std::size_t s = 0; s < seen.size(); ++s)
            if (seen[s] == alpha[i]) {
                lab = static_cast<int>(s);
                break;
            }
        if (lab < 0) {
            lab = static_cast<int>(seen.size());
            seen.push_back(alpha[i]);
        }
        labels[i] = lab;
    }
    return labels;
}

ExactScalar word_moment_impl(const wordcore::AlternatingExpression& expr,
                             std::span<const ExactDiagonal> observables, long k, int n,
                             int order_cap, long index_map_guard, bool use_pattern_memo) {
    wordcore::validate_expression(expr, n, expr.total_length());
    const int m = expr.total_length();
    const int w = expr.word_count();
    if (m > order_cap)
        throw_cap("exact_word_moment: m = " + std::to_string(m) + " exceeds cap " +
                  std::to_string(order_cap));
    if (expr.max_slot() > static_cast<int>(observables.size()))
        throw_invalid("exact_word_moment: observable slot out of range");
    for (const auto& obs : observables)
        if (obs.dim() != static_cast<int>(k))
            throw_invalid("exact_word_moment: observable dimension mismatch");

    // Every index map meets the same per-generator factor counts, so the
    // Weingarten order needed is the per-generator paired count, not m. A
    // generator with unequal plain/conjugated counts kills every term by
    // phase invariance.
    {
        std::map<int, std::pair<int, int>> counts;
        for (const auto& t : expr.terms())
            for (const auto& l : t.word.letters()) {
                if (l.exponent > 0)
                    counts[l.generator].first++;
                else
                    counts[l.generator].second++;
            }
        for (const auto& [gen, pc] : counts) {
            (void)gen;
            if (pc.first != pc.second) return ExactScalar();  // exact zero
            if (pc.first > k)
                throw_invalid("exact_word_moment: k too small for the per-generator order " +
                              std::to_string(pc.first));
        }
    }

    double log_maps = static_cast<double>(m) * std::log(static_cast<double>(k));
    if (log_maps > std::log(static_cast<double>(index_map_guard)))
        throw_cap("exact_word_moment: k^m exceeds the index-map guard");

    std::vector<FlatLetter> letters;
    letters.reserve(static_cast<std::size_t>(m));
    for (const auto& t : expr.terms())
        for (const auto& l : t.word.letters()) letters.push_back({l.generator, l.exponent});

    // Observable nu weighs position m_nu (+1 cyclically): 0-based m_nu % m.
    const std::vector<int> cum = expr.cumulative_lengths();
    std::vector<int> weight_pos(static_cast<std::size_t>(w));
    std::vector<const ExactDiagonal*> weight_obs(static_cast<std::size_t>(w));
    long root_order = 1;
    for (int nu = 0; nu < w; ++nu) {
        weight_pos[static_cast<std::size_t>(nu)] = cum[static_cast<std::size_t>(nu)] % m;
        const ExactDiagonal* obs =
            &observables[static_cast<std::size_t>(expr.terms()[static_cast<std::size_t>(nu)].slot - 1)];
        weight_obs[static_cast<std::size_t>(nu)] = obs;
        root_order = std::lcm(root_order, obs->root_order());
    }

    ExactScalar acc = ExactScalar::root_power(root_order, 0, RationalComplex{0, 0});

    std::map<std::vector<int>, Rational> pattern_memo;
    EntryMomentSpec spec;
    spec.k = k;
    std::vector<int> alpha(static_cast<std::size_t>(m), 1);  // digits 1..k
    for (;;) {
        RationalComplex scale{1, 0};
        long power = 0;
        bool zero = false;
        for (int nu = 0; nu < w && !zero; ++nu) {
            const auto& entry = weight_obs[static_cast<std::size_t>(nu)]->entry(
                alpha[static_cast<std::size_t>(weight_pos[static_cast<std::size_t>(nu)])] - 1);
            if (entry.scale.is_zero()) zero = true;
            scale = scale * entry.scale;
            power += entry.power;
        }
        if (!zero) {
            Rational moment;
            bool have = false;
            if (use_pattern_memo) {
                auto key = rgs_pattern(alpha);
                auto it = pattern_memo.find(key);
                if (it != pattern_memo.end()) {
                    moment = it->second;
                    have = true;
                } else {
                    spec.plain.clear();
                    spec.conj.clear();
                    for (int j = 0; j < m; ++j) {
                        int a = alpha[static_cast<std::size_t>(j)];
                        int b = alpha[static_cast<std::size_t>((j + 1) % m)];
                        const FlatLetter& l = letters[static_cast<std::size_t>(j)];
                        if (l.exp > 0)
                            spec.plain.push_back({a, b, l.gen});
                        else
                            spec.conj.push_back({b, a, l.gen});
                    }
                    moment = exact_entry_moment(spec, order_cap);
                    pattern_memo.emplace(std::move(key), moment);
                    have = true;
                }
            }
            if (!have) {
                spec.plain.clear();
                spec.conj.clear();
                for (int j = 0; j < m; ++j) {
                    int a = alpha[static_cast<std::size_t>(j)];
                    int b = alpha[static_cast<std::size_t>((j + 1) % m)];
                    const FlatLetter& l = letters[static_cast<std::size_t>(j)];
                    if (l.exp > 0)
                        spec.plain.push_back({a, b, l.gen});
                    else
                        spec.conj.push_back({b, a, l.gen});
                }
                moment = exact_entry_moment(spec, order_cap);
            }
            if (moment != 0) acc.add_scaled_power(power, scale * moment);
        }
        // Odometer over [1..k]^m.
        int pos = m - 1;
        while (pos >= 0 && alpha[static_cast<std::size_t>(pos)] == static_cast<int>(k)) {
            alpha[static_cast<std::size_t>(pos)] = 1;
            --pos;
        }
        if (pos < 0) break;
        ++alpha[static_cast<std::size_t>(pos)];
    }

    acc.scale(Rational(1, k));
    acc.canonicalize();
    return acc;
}

}  // namespace

ExactScalar exact_word_moment(const wordcore::AlternatingExpression& expr,
                              std::span<const ExactDiagonal> observables, long k, int n,
                              int order_cap, long index_map_guard) {
    return word_moment_impl(expr, observables, k, n, order_cap, index_map_guard, true);
}

namespace detail {
ExactScalar exact_word_moment_nomemo(const wordcore::AlternatingExpression& expr,
                                     std::span<const ExactDiagonal> observables, long k, int n,
                                     int order_cap, long index_map_guard) {
    return word_moment_impl(expr, observables, k, n, order_cap, index_map_guard, false);
}
}  // namespace detail

}  // namespace asymfree::weingarten
