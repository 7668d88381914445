#include "asymfree/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include "asymfree/parallel.hpp"

namespace asymfree::experiments {

// ---- monomials --------------------------------------------------------------

std::string monomial_key(const Monomial& mono) {
    std::ostringstream os;
    for (std::size_t i = 0; i < mono.size(); ++i) {
        if (i) os << ' ';
        os << (mono[i].is_x ? 'x' : 'u') << mono[i].index;
        if (mono[i].star) os << '*';
    }
    return os.str();
}

Monomial monomial_from_string(const std::string& text) {
    Monomial out;
    std::istringstream is(text);
    std::string tok;
    while (is >> tok) {
        MonomialLetter l;
        if (tok[0] == 'x')
            l.is_x = true;
        else if (tok[0] == 'u')
            l.is_x = false;
        else
            throw_invalid("monomial: letters must start with x or u: " + tok);
        std::size_t p = 1, start = p;
        while (p < tok.size() && std::isdigit(static_cast<unsigned char>(tok[p]))) ++p;
        if (p == start) throw_invalid("monomial: missing index in " + tok);
        l.index = std::stoi(tok.substr(start, p - start));
        if (p < tok.size()) {
            if (tok.substr(p) != "*") throw_invalid("monomial: bad suffix in " + tok);
            l.star = true;
        }
        if (l.index < 1) throw_invalid("monomial: indices are 1-based");
        out.push_back(l);
    }
    if (out.empty()) throw_invalid("monomial: empty");
    return out;
}

// ---- x-moment map -----------------------------------------------------------

std::string XMomentMap::key_of(std::vector<std::pair<int, bool>> letters) {
    std::sort(letters.begin(), letters.end());
    std::ostringstream os;
    for (std::size_t i = 0; i < letters.size(); ++i) {
        if (i) os << ' ';
        os << 'x' << letters[i].first << (letters[i].second ? "*" : "");
    }
    return os.str();
}

void XMomentMap::set(const std::vector<std::pair<int, bool>>& letters,
                     std::complex<double> value) {
    values_[key_of(letters)] = value;
}

std::complex<double> XMomentMap::get(const std::vector<std::pair<int, bool>>& letters) const {
    auto it = values_.find(key_of(letters));
    if (it == values_.end())
        throw_invalid("free_moment: unknown x moment tau(" + key_of(letters) + ")");
    return it->second;
}

XMomentMap XMomentMap::from_diagonals(std::span<const matcore::DiagonalObservable> xs,
                                      int max_degree) {
    const int s = static_cast<int>(xs.size());
    if (s == 0) return {};
    const int k = xs[0].dim();
    for (const auto& x : xs)
        if (x.dim() != k) throw_invalid("XMomentMap: matrices must share one dimension");

    XMomentMap out;
    // Multisets over 2s symbols (index, star), nondecreasing, degree 1..max.
    std::vector<std::pair<int, bool>> symbols;
    for (int i = 1; i <= s; ++i) {
        symbols.emplace_back(i, false);
        symbols.emplace_back(i, true);
    }
    std::vector<std::pair<int, bool>> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t from) {
        if (!cur.empty()) {
            std::complex<double> acc = 0;
            for (int a = 0; a < k; ++a) {
                std::complex<double> prod = 1;
                for (const auto& [idx, star] : cur) {
                    std::complex<double> e =
                        xs[static_cast<std::size_t>(idx - 1)].entries()[static_cast<std::size_t>(a)];
                    prod *= star ? std::conj(e) : e;
                }
                acc += prod;
            }
            out.set(cur, acc / static_cast<double>(k));
        }
        if (static_cast<int>(cur.size()) == max_degree) return;
        for (std::size_t j = from; j < symbols.size(); ++j) {
            cur.push_back(symbols[j]);
            rec(j);
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

// ---- free moments -----------------------------------------------------------

namespace {

struct Block {
    bool is_x = true;
    std::vector<std::pair<int, bool>> xs;  // when is_x
    int u_index = 0;                       // when !is_x
    long u_power = 0;
};

void normalize_blocks(std::vector<Block>& blocks) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            if (!blocks[i].is_x && blocks[i].u_power == 0) {
                blocks.erase(blocks.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
                break;
            }
            if (i + 1 < blocks.size()) {
                Block& a = blocks[i];
                Block& b = blocks[i + 1];
                if (a.is_x && b.is_x) {
                    a.xs.insert(a.xs.end(), b.xs.begin(), b.xs.end());
                    blocks.erase(blocks.begin() + static_cast<std::ptrdiff_t>(i) + 1);
                    changed = true;
                    break;
                }
                if (!a.is_x && !b.is_x && a.u_index == b.u_index) {
                    a.u_power += b.u_power;
                    blocks.erase(blocks.begin() + static_cast<std::ptrdiff_t>(i) + 1);
                    changed = true;
                    break;
                }
            }
        }
    }
}

std::string blocks_key(const std::vector<Block>& blocks) {
    std::ostringstream os;
    for (const Block& b : blocks) {
        if (b.is_x)
            os << "X[" << XMomentMap::key_of(b.xs) << "]";
        else
            os << "U" << b.u_index << "^" << b.u_power;
        os << '|';
    }
    return os.str();
}

std::complex<double> tau_block(const Block& b, const XMomentMap& xm) {
    if (b.is_x) return xm.get(b.xs);
    return 0.0;  // Haar unitary: tau(u^p) = 0 for p != 0
}

std::complex<double> tau_word(std::vector<Block> blocks, const XMomentMap& xm,
                              std::map<std::string, std::complex<double>>& memo) {
    normalize_blocks(blocks);
    if (blocks.empty()) return 1.0;
    if (blocks.size() == 1) return tau_block(blocks[0], xm);
    std::string key = blocks_key(blocks);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;

    // 0 = tau(prod (b_j - t_j)) since the centered word alternates between
    // distinct free algebras, so
    // tau(W) = -sum_{S nonempty} (-1)^|S| prod_{j in S} t_j tau(W minus S).
    std::vector<std::size_t> nz;
    std::vector<std::complex<double>> t(blocks.size());
    for (std::size_t j = 0; j < blocks.size(); ++j) {
        t[j] = tau_block(blocks[j], xm);
        if (t[j] != 0.0) nz.push_back(j);
    }
    std::complex<double> total = 0;
    const std::size_t subsets = static_cast<std::size_t>(1) << nz.size();
    for (std::size_t mask = 1; mask < subsets; ++mask) {
        std::complex<double> prod = 1;
        int bits = 0;
        std::vector<bool> drop(blocks.size(), false);
        for (std::size_t b = 0; b < nz.size(); ++b) {
            if (mask & (static_cast<std::size_t>(1) << b)) {
                prod *= t[nz[b]];
                drop[nz[b]] = true;
                ++bits;
            }
        }
        std::vector<Block> sub;
        sub.reserve(blocks.size());
        for (std::size_t j = 0; j < blocks.size(); ++j)
            if (!drop[j]) sub.push_back(blocks[j]);
        double sign = (bits % 2 == 0) ? 1.0 : -1.0;
        total += -sign * prod * tau_word(std::move(sub), xm, memo);
    }
    memo[key] = total;
    return total;
}

std::vector<Block> blocks_from_monomial(const Monomial& mono) {
    std::vector<Block> blocks;
    for (const MonomialLetter& l : mono) {
        if (l.is_x) {
            Block b;
            b.is_x = true;
            b.xs = {{l.index, l.star}};
            blocks.push_back(std::move(b));
        } else {
            Block b;
            b.is_x = false;
            b.u_index = l.index;
            b.u_power = l.star ? -1 : 1;
            blocks.push_back(std::move(b));
        }
    }
    return blocks;
}

}  // namespace

std::complex<double> free_moment(const Monomial& mono, const XMomentMap& x_moments,
                                 int degree_cap) {
    if (static_cast<int>(mono.size()) > degree_cap)
        throw_cap("free_moment: monomial degree exceeds cap " + std::to_string(degree_cap));
    std::map<std::string, std::complex<double>> memo;
    return tau_word(blocks_from_monomial(mono), x_moments, memo);
}

// ---- Monte Carlo ------------------------------------------------------------

matcore::ComplexMatrix evaluate_alternating(const wordcore::AlternatingExpression& expr,
                                            std::span<const matcore::UnitaryMatrix> us,
                                            std::span<const matcore::DiagonalObservable> obs) {
    if (expr.max_slot() > static_cast<int>(obs.size()))
        throw_invalid("evaluate_alternating: observable slot out of range");
    const int k = us.empty() ? (obs.empty() ? 0 : obs[0].dim()) : us[0].dim();
    if (k == 0) throw_invalid("evaluate_alternating: cannot infer dimension");
    for (const auto& o : obs)
        if (o.dim() != k) throw_invalid("evaluate_alternating: observable dimension mismatch");
    matcore::ComplexMatrix acc = matcore::ComplexMatrix::Identity(k, k);
    for (const auto& term : expr.terms()) {
        for (const auto& l : term.word.letters()) {
            const matcore::ComplexMatrix& u =
                us[static_cast<std::size_t>(l.generator - 1)].matrix();
            if (l.exponent > 0)
                acc = acc * u;
            else
                acc = acc * u.adjoint();
        }
        obs[static_cast<std::size_t>(term.slot - 1)].apply_right(acc);
    }
    return acc;
}

namespace {

// Per-sample trace values, filled in parallel, reduced in index order.
std::vector<std::complex<double>> trace_samples(const wordcore::AlternatingExpression& expr,
                                                std::span<const matcore::DiagonalObservable> obs,
                                                int k, int n, std::int64_t samples,
                                                const haarsample::SeededStream& stream,
                                                int threads) {
    wordcore::validate_expression(expr, n, expr.total_length());
    if (expr.max_slot() > static_cast<int>(obs.size()))
        throw_invalid("mc: observable slot out of range");
    for (const auto& o : obs)
        if (o.dim() != k) throw_invalid("mc: observable dimension mismatch");
    if (samples < 1) throw_invalid("mc: samples must be >= 1");

    std::vector<std::complex<double>> z(static_cast<std::size_t>(samples));
    parallel_chunks(samples, 64, threads, [&](std::int64_t begin, std::int64_t end) {
        for (std::int64_t i = begin; i < end; ++i) {
            auto us = haarsample::sample_tuple(k, n, stream.substream(static_cast<std::uint64_t>(i)));
            matcore::ComplexMatrix a = evaluate_alternating(expr, us, obs);
            z[static_cast<std::size_t>(i)] = a.trace() / static_cast<double>(k);
        }
    });
    return z;
}

}  // namespace

McEstimate mc_trace_moment(const wordcore::AlternatingExpression& expr,
                           std::span<const matcore::DiagonalObservable> obs, int k, int n,
                           std::int64_t samples, const haarsample::SeededStream& stream,
                           int threads) {
    std::vector<std::complex<double>> z = trace_samples(expr, obs, k, n, samples, stream, threads);
    McEstimate est;
    est.samples = samples;
    est.master_seed = stream.master_seed;
    std::complex<double> sum = 0;
    double sum2 = 0;
    for (const auto& v : z) {
        sum += v;
        sum2 += std::norm(v);
    }
    const double nn = static_cast<double>(samples);
    est.mean = sum / nn;
    est.second_abs_moment = sum2 / nn;
    if (samples > 1) {
        double dev_mean = 0, dev_second = 0;
        for (const auto& v : z) {
            dev_mean += std::norm(v - est.mean);
            double d2 = std::norm(v) - est.second_abs_moment;
            dev_second += d2 * d2;
        }
        est.std_error_mean = std::sqrt(dev_mean / (nn - 1)) / std::sqrt(nn);
        est.std_error_second = std::sqrt(dev_second / (nn - 1)) / std::sqrt(nn);
    }
    return est;
}

TailEstimate mc_tail_probability(const wordcore::AlternatingExpression& expr,
                                 std::span<const matcore::DiagonalObservable> obs, int k, int n,
                                 double eps, std::int64_t samples,
                                 const haarsample::SeededStream& stream, int threads) {
    if (eps <= 0) throw_invalid("mc_tail_probability: eps must be positive");
    std::vector<std::complex<double>> z = trace_samples(expr, obs, k, n, samples, stream, threads);
    TailEstimate est;
    est.samples = samples;
    for (const auto& v : z)
        if (std::abs(v) >= eps) ++est.hits;
    est.fraction = static_cast<double>(est.hits) / static_cast<double>(samples);
    est.std_error = std::sqrt(est.fraction * (1.0 - est.fraction) / static_cast<double>(samples));
    return est;
}

std::vector<DecayRow> decay_sweep(const wordcore::AlternatingExpression& expr,
                                  std::span<const SweepObservable> slots,
                                  std::span<const long> ks, int n, std::int64_t samples,
                                  const haarsample::SeededStream& stream,
                                  std::optional<double> eps, int threads) {
    if (expr.max_slot() > static_cast<int>(slots.size()))
        throw_invalid("decay_sweep: observable slot out of range");
    std::vector<DecayRow> rows;
    for (long k : ks) {
        std::vector<matcore::DiagonalObservable> obs;
        obs.reserve(slots.size());
        for (const auto& s : slots)
            obs.push_back(matcore::DiagonalObservable::make(static_cast<int>(k), s.pattern, s.M));
        rows.push_back(DecayRow{});
        DecayRow& row = rows.back();
        row.k = k;
        row.estimate = mc_trace_moment(expr, obs, static_cast<int>(k), n, samples, stream, threads);
        double big_m = 0;
        for (const auto& term : expr.terms())
            big_m = std::max(big_m, obs[static_cast<std::size_t>(term.slot - 1)].norm_bound());
        row.bound = bounds::theorem_bounds(expr.total_length(), big_m, expr.word_count(), k,
                                           eps.value_or(0.0));
        if (eps) {
            row.tail_fraction =
                mc_tail_probability(expr, obs, static_cast<int>(k), n, *eps, samples, stream, threads)
                    .fraction;
            row.has_tail = true;
        }
    }
    return rows;
}

// ---- microstate experiments -------------------------------------------------

namespace {

std::vector<MonomialLetter> gamma_alphabet(int s, int n) {
    std::vector<MonomialLetter> alphabet;
    for (int i = 1; i <= s; ++i) {
        alphabet.push_back({true, i, false});
        alphabet.push_back({true, i, true});
    }
    for (int i = 1; i <= n; ++i) {
        alphabet.push_back({false, i, false});
        alphabet.push_back({false, i, true});
    }
    return alphabet;
}

}  // namespace

std::vector<Monomial> enumerate_monomials(int s, int n, int m) {
    const std::vector<MonomialLetter> alphabet = gamma_alphabet(s, n);
    std::vector<Monomial> out;
    std::set<std::string> seen;
    Monomial cur;
    std::function<void()> rec = [&]() {
        if (!cur.empty() && seen.insert(monomial_key(cur)).second) out.push_back(cur);
        if (static_cast<int>(cur.size()) == m) return;
        for (const auto& l : alphabet) {
            cur.push_back(l);
            rec();
            cur.pop_back();
        }
    };
    rec();
    return out;
}

namespace {

struct GammaTargets {
    std::vector<Monomial> monomials;
    std::vector<std::complex<double>> values;
};

// Walks the monomial tree in the enumerate_monomials order, extending prefix
// products one letter at a time; fails fast on the first monomial outside the
// eps tube. `idx` tracks the pre-order position into targets.values.
bool gamma_membership(const GammaTargets& targets, const std::vector<MonomialLetter>& alphabet,
                      int max_degree,
                      const std::function<void(const MonomialLetter&, matcore::ComplexMatrix&)>&
                          apply_letter,
                      int k, double eps) {
    std::size_t idx = 0;
    std::function<bool(const matcore::ComplexMatrix&, int)> rec =
        [&](const matcore::ComplexMatrix& prefix, int depth) {
            if (depth == max_degree) return true;
            for (const auto& l : alphabet) {
                matcore::ComplexMatrix acc = prefix;
                apply_letter(l, acc);
                std::complex<double> tau = acc.trace() / static_cast<double>(k);
                if (std::abs(tau - targets.values[idx]) >= eps) return false;
                ++idx;
                if (!rec(acc, depth + 1)) return false;
            }
            return true;
        };
    return rec(matcore::ComplexMatrix::Identity(k, k), 0);
}

double max_entry_modulus(const matcore::DiagonalObservable& x) {
    double m = 0;
    for (const auto& e : x.entries()) m = std::max(m, std::abs(e));
    return m;
}

}  // namespace

double microstate_fraction(int k, int n, int s, const MicrostateSpec& spec,
                           std::span<const matcore::DiagonalObservable> xs,
                           std::int64_t samples, const haarsample::SeededStream& stream,
                           int threads) {
    if (static_cast<int>(xs.size()) != s)
        throw_invalid("microstate_fraction: expected s fixed matrices");
    if (spec.m < 1) throw_invalid("microstate_fraction: degree cap m must be >= 1");
    if (spec.eps <= 0) throw_invalid("microstate_fraction: eps must be positive");
    if (samples < 1) throw_invalid("microstate_fraction: samples must be >= 1");
    for (const auto& x : xs) {
        if (x.dim() != k) throw_invalid("microstate_fraction: matrix dimension mismatch");
        if (max_entry_modulus(x) > spec.R * (1.0 + 1e-12))
            throw_invalid("microstate_fraction: fixed matrix norm exceeds R");
    }
    // Unitaries have operator norm 1; R < 1 makes Gamma_R empty.
    if (n > 0 && spec.R < 1.0) return 0.0;

    GammaTargets targets;
    targets.monomials = enumerate_monomials(s, n, spec.m);
    XMomentMap xmap = XMomentMap::from_diagonals(xs, spec.m);
    for (const Monomial& mono : targets.monomials) {
        auto ov = spec.target_overrides.find(monomial_key(mono));
        if (ov != spec.target_overrides.end()) {
            targets.values.push_back(ov->second);
        } else {
            targets.values.push_back(free_moment(mono, xmap, spec.m));
        }
    }

    const std::vector<MonomialLetter> alphabet = gamma_alphabet(s, n);
    std::vector<char> pass(static_cast<std::size_t>(samples), 0);
    parallel_chunks(samples, 16, threads, [&](std::int64_t begin, std::int64_t end) {
        for (std::int64_t i = begin; i < end; ++i) {
            auto vs = haarsample::sample_tuple(k, n, stream.substream(static_cast<std::uint64_t>(i)));
            auto apply_letter = [&](const MonomialLetter& l, matcore::ComplexMatrix& acc) {
                if (l.is_x) {
                    const auto& x = xs[static_cast<std::size_t>(l.index - 1)];
                    if (!l.star) {
                        x.apply_right(acc);
                    } else {
                        for (int j = 0; j < k; ++j)
                            acc.col(j) *= std::conj(x.entries()[static_cast<std::size_t>(j)]);
                    }
                } else {
                    const auto& u = vs[static_cast<std::size_t>(l.index - 1)].matrix();
                    acc = l.star ? (acc * u.adjoint()).eval() : (acc * u).eval();
                }
            };
            pass[static_cast<std::size_t>(i)] =
                gamma_membership(targets, alphabet, spec.m, apply_letter, k, spec.eps) ? 1 : 0;
        }
    });
    std::int64_t hits = 0;
    for (char c : pass) hits += c;
    return static_cast<double>(hits) / static_cast<double>(samples);
}

double conjugation_freeness_fraction(int k, int s, const MicrostateSpec& spec,
                                     std::span<const matcore::DiagonalObservable> xs,
                                     std::int64_t samples,
                                     const haarsample::SeededStream& stream, int threads) {
    if (static_cast<int>(xs.size()) != s)
        throw_invalid("conjugation_freeness_fraction: expected s fixed matrices");
    if (spec.m < 1) throw_invalid("conjugation_freeness_fraction: degree cap m must be >= 1");
    if (spec.eps <= 0) throw_invalid("conjugation_freeness_fraction: eps must be positive");
    if (samples < 1) throw_invalid("conjugation_freeness_fraction: samples must be >= 1");
    for (const auto& x : xs) {
        if (x.dim() != k) throw_invalid("conjugation_freeness_fraction: dimension mismatch");
        if (max_entry_modulus(x) > spec.R * (1.0 + 1e-12))
            throw_invalid("conjugation_freeness_fraction: fixed matrix norm exceeds R");
    }

    GammaTargets targets;
    targets.monomials = enumerate_monomials(s, 0, spec.m);
    XMomentMap xmap = XMomentMap::from_diagonals(xs, spec.m);
    for (const Monomial& mono : targets.monomials) {
        auto ov = spec.target_overrides.find(monomial_key(mono));
        if (ov != spec.target_overrides.end()) {
            targets.values.push_back(ov->second);
            continue;
        }
        // Free normal targets via the u-sandwich encoding y_i = u_i* x_i u_i.
        Monomial expanded;
        for (const MonomialLetter& l : mono) {
            expanded.push_back({false, l.index, true});
            expanded.push_back({true, l.index, l.star});
            expanded.push_back({false, l.index, false});
        }
        targets.values.push_back(free_moment(expanded, xmap, 3 * spec.m));
    }

    const std::vector<MonomialLetter> alphabet = gamma_alphabet(s, 0);
    std::vector<char> pass(static_cast<std::size_t>(samples), 0);
    parallel_chunks(samples, 16, threads, [&](std::int64_t begin, std::int64_t end) {
        std::vector<matcore::ComplexMatrix> y(static_cast<std::size_t>(s)),
            y_adj(static_cast<std::size_t>(s));
        for (std::int64_t i = begin; i < end; ++i) {
            auto vs = haarsample::sample_tuple(k, s, stream.substream(static_cast<std::uint64_t>(i)));
            for (int j = 0; j < s; ++j) {
                matcore::ComplexMatrix b = vs[static_cast<std::size_t>(j)].matrix().adjoint();
                xs[static_cast<std::size_t>(j)].apply_right(b);  // b = v* x
                y[static_cast<std::size_t>(j)] = b * vs[static_cast<std::size_t>(j)].matrix();
                y_adj[static_cast<std::size_t>(j)] = y[static_cast<std::size_t>(j)].adjoint();
            }
            auto apply_letter = [&](const MonomialLetter& l, matcore::ComplexMatrix& acc) {
                const auto& m = l.star ? y_adj[static_cast<std::size_t>(l.index - 1)]
                                       : y[static_cast<std::size_t>(l.index - 1)];
                acc = (acc * m).eval();
            };
            pass[static_cast<std::size_t>(i)] =
                gamma_membership(targets, alphabet, spec.m, apply_letter, k, spec.eps) ? 1 : 0;
        }
    });
    std::int64_t hits = 0;
    for (char c : pass) hits += c;
    return static_cast<double>(hits) / static_cast<double>(samples);
}

}  // namespace asymfree::experiments
