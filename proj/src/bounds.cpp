#include "asymfree/bounds.hpp"

#include <cmath>
#include <functional>

namespace asymfree::bounds {

BigInt bell(int m) {
    if (m < 0) throw_invalid("bell: m must be >= 0");
    if (m > kBellCap) throw_cap("bell: m exceeds cap " + std::to_string(kBellCap));
    // Bell triangle: row r starts with the last entry of row r-1; each entry
    // adds its left neighbor and the entry above it. B(m) = first of row m.
    std::vector<BigInt> row = {BigInt(1)};  // row for m = 0
    for (int r = 1; r <= m; ++r) {
        std::vector<BigInt> next;
        next.reserve(row.size() + 1);
        next.push_back(row.back());
        for (std::size_t i = 0; i < row.size(); ++i) next.push_back(next.back() + row[i]);
        row = std::move(next);
    }
    return row.front();
}

BigInt bell_by_enumeration(int m) {
    if (m < 0) throw_invalid("bell_by_enumeration: m must be >= 0");
    if (m > 12) throw_cap("bell_by_enumeration: m too large for enumeration");
    if (m == 0) return BigInt(1);
    // Count restricted growth strings: a_1 = 0, a_{i+1} <= max(a_1..a_i) + 1.
    BigInt count = 0;
    std::function<void(int, int)> rec = [&](int pos, int max_label) {
        if (pos == m) {
            count += 1;
            return;
        }
        for (int lab = 0; lab <= max_label + 1; ++lab) rec(pos + 1, std::max(max_label, lab));
    };
    rec(1, 0);
    return count;
}

BigInt falling_factorial(long k, long d) {
    if (d < 0) throw_invalid("falling_factorial: d must be >= 0");
    if (d > k) throw_invalid("falling_factorial: requires d <= k");
    BigInt out = 1;
    for (long i = 0; i < d; ++i) out *= BigInt(k - i);
    return out;
}

MomentBounds moment_integral_bounds(int m, int d, long k) {
    if (m < 1 || d < 1) throw_invalid("moment_integral_bounds: m, d must be >= 1");
    if (k < d || k < m) throw_invalid("moment_integral_bounds: requires k >= d and k >= m");
    MomentBounds out;
    out.lemma3 = Rational(1) / Rational(falling_factorial(k, d));
    out.lemma5 = Rational(integer_pow(BigInt(4), static_cast<unsigned long>(m) *
                                                     static_cast<unsigned long>(m))) /
                 Rational(integer_pow(BigInt(k), static_cast<unsigned long>(m)));
    out.lemma3.canonicalize();
    out.lemma5.canonicalize();
    return out;
}

std::complex<double> brute_injection_sum(const InjectionInstance& inst) {
    const int n = static_cast<int>(inst.zero_sum.size());
    const int m = static_cast<int>(inst.plain.size());
    const int total = n + m;
    if (total > 6 || inst.k > 9)
        throw_cap("brute_injection_sum: caps are n + m <= 6 and k <= 9");
    if (inst.k < 1) throw_invalid("brute_injection_sum: k must be >= 1");
    for (const auto& f : inst.zero_sum) {
        if (static_cast<int>(f.size()) != inst.k)
            throw_invalid("brute_injection_sum: function domain size must be k");
        std::complex<double> s = 0;
        for (const auto& v : f) s += v;
        if (std::abs(s) > 1e-12)
            throw_invalid("brute_injection_sum: an F-function does not sum to 0");
    }
    for (const auto& g : inst.plain)
        if (static_cast<int>(g.size()) != inst.k)
            throw_invalid("brute_injection_sum: function domain size must be k");
    if (total > inst.k) return 0.0;  // no injections exist

    // DFS over injections; functions ordered F then G.
    std::complex<double> sum = 0;
    std::vector<int> image(static_cast<std::size_t>(total), -1);
    std::vector<bool> used(static_cast<std::size_t>(inst.k), false);
    std::function<void(int, std::complex<double>)> rec = [&](int idx, std::complex<double> prod) {
        if (idx == total) {
            sum += prod;
            return;
        }
        const auto& f = idx < n ? inst.zero_sum[static_cast<std::size_t>(idx)]
                                : inst.plain[static_cast<std::size_t>(idx - n)];
        for (int a = 0; a < inst.k; ++a) {
            if (used[static_cast<std::size_t>(a)]) continue;
            used[static_cast<std::size_t>(a)] = true;
            rec(idx + 1, prod * f[static_cast<std::size_t>(a)]);
            used[static_cast<std::size_t>(a)] = false;
        }
    };
    rec(0, 1.0);
    return sum;
}

double injection_sum_bound(int n, int m, long k, std::span<const double> norms) {
    if (n < 0 || m < 0 || k < 1) throw_invalid("injection_sum_bound: bad parameters");
    if (static_cast<int>(norms.size()) != n + m)
        throw_invalid("injection_sum_bound: expected n + m norms");
    double out = std::pow(static_cast<double>(k), static_cast<double>(m) + n / 2.0);
    out *= std::pow(static_cast<double>(n + m), static_cast<double>(n));
    for (double v : norms) out *= v;
    return out;
}

TheoremBoundsExact theorem_bounds_exact(int m, const Rational& M, int w, long k,
                                        const Rational& eps) {
    if (m < 1 || w < 1 || k < 1) throw_invalid("theorem_bounds: m, w, k must be positive");
    if (M <= 0) throw_invalid("theorem_bounds: M must be positive");
    const unsigned long m2 = static_cast<unsigned long>(m) * static_cast<unsigned long>(m);
    const Rational mw = M * w;

    TheoremBoundsExact out;
    Rational a = Rational(bell(m)) * Rational(integer_pow(BigInt(2), m2)) *
                 rational_pow(mw, w);  // A = B(m) 2^{m^2} (Mw)^w
    out.mean_bound = a / k;
    Rational b = Rational(bell(2 * m)) * Rational(integer_pow(BigInt(4), m2)) *
                 rational_pow(2 * mw, 2 * w);  // B = B(2m) 4^{m^2} (2Mw)^{2w}
    out.second_moment_bound = b / (Rational(k) * k);
    if (eps > 0) {
        out.tail_bound = 4 * b / (Rational(k) * k * eps * eps);
        out.tail_valid = Rational(k) > 2 * a / eps;
    } else {
        out.tail_bound = 0;
        out.tail_valid = false;
    }
    out.mean_bound.canonicalize();
    out.second_moment_bound.canonicalize();
    out.tail_bound.canonicalize();
    return out;
}

BoundReport theorem_bounds(int m, double M, int w, long k, double eps) {
    TheoremBoundsExact exact =
        theorem_bounds_exact(m, rational_from_double(M), w, k,
                             eps > 0 ? rational_from_double(eps) : Rational(0));
    BoundReport out;
    out.mean_bound = to_double(exact.mean_bound);
    out.second_moment_bound = to_double(exact.second_moment_bound);
    out.tail_bound = to_double(exact.tail_bound);
    out.tail_valid = exact.tail_valid;
    out.m = m;
    out.w = w;
    out.k = k;
    out.M = M;
    out.eps = eps;
    return out;
}

double corollary_intersection_bound(long card_E, int m, double M, int w, long k, double eps) {
    if (card_E < 0) throw_invalid("corollary_intersection_bound: card_E must be >= 0");
    if (eps <= 0) throw_invalid("corollary_intersection_bound: eps must be positive");
    if (card_E == 0) return 1.0;
    TheoremBoundsExact exact =
        theorem_bounds_exact(m, rational_from_double(M), w, k, rational_from_double(eps));
    Rational measure = 1 - Rational(card_E) * exact.tail_bound;
    if (measure < 0) return 0.0;
    return to_double(measure);
}

}  // namespace asymfree::bounds
