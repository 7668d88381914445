#pragma once

#include <complex>
#include <span>
#include <vector>

#include "asymfree/rationals.hpp"

namespace asymfree::bounds {

inline constexpr int kBellCap = 30;

// Bell number B(m) via the Bell-triangle recurrence; B(0) = 1. m <= 30.
BigInt bell(int m);

// Independent route: counts set partitions by direct enumeration (restricted
// growth strings). Practical for m <= 12.
BigInt bell_by_enumeration(int m);

// P(k, d) = k (k-1) ... (k-d+1); P(k, 0) = 1. Requires 0 <= d <= k.
BigInt falling_factorial(long k, long d);

struct MomentBounds {
    Rational lemma3;  // 1 / P(k, d)
    Rational lemma5;  // 4^{m^2} / k^m
};

// Requires k >= d and k >= m.
MomentBounds moment_integral_bounds(int m, int d, long k);

// Instance of the injection-sum lemma: zero_sum holds the F-functions (each
// sums to 0 within 1e-12), plain holds the G-functions; all map {1..k} -> C.
struct InjectionInstance {
    int k = 1;
    std::vector<std::vector<std::complex<double>>> zero_sum;  // F
    std::vector<std::vector<std::complex<double>>> plain;     // G
};

// Exact enumeration of sum over injections F u G -> {1..k} of the product.
// Caps: n + m <= 6, k <= 9.
std::complex<double> brute_injection_sum(const InjectionInstance& inst);

// k^{m + n/2} (n + m)^n prod(norms); the n = 0 convention reads (n+m)^0 = 1.
double injection_sum_bound(int n, int m, long k, std::span<const double> norms);

// The theorem's three bounds for given (m, M, w, k, eps), evaluated in exact
// rational arithmetic and converted for reporting.
struct BoundReport {
    double mean_bound = 0;           // statement 1: B(m) 2^{m^2} (M w)^w / k
    double second_moment_bound = 0;  // statement 2: B(2m) 4^{m^2} (2 M w)^{2w} / k^2
    double tail_bound = 0;           // statement 3: 4 B(2m) 4^{m^2} (2 M w)^{2w} / (k^2 eps^2)
    bool tail_valid = false;         // the hypothesis k > 2 B(m) 2^{m^2} (M w)^w / eps
    int m = 0;
    int w = 0;
    long k = 0;
    double M = 0;
    double eps = 0;
};

struct TheoremBoundsExact {
    Rational mean_bound;
    Rational second_moment_bound;
    Rational tail_bound;
    bool tail_valid = false;
};

TheoremBoundsExact theorem_bounds_exact(int m, const Rational& M, int w, long k,
                                        const Rational& eps);
BoundReport theorem_bounds(int m, double M, int w, long k, double eps);

// Corollary bound 1 - card(E) 4 B(2m) 4^{m^2} (2Mw)^{2w} / (k^2 eps^2),
// clamped below at 0 for reporting.
double corollary_intersection_bound(long card_E, int m, double M, int w, long k, double eps);

}  // namespace asymfree::bounds
