#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "asymfree/experiments.hpp"
#include "asymfree/parse.hpp"
#include "asymfree/weingarten.hpp"

using namespace asymfree;
using experiments::Monomial;
using experiments::XMomentMap;
using haarsample::SeededStream;
using matcore::DiagonalObservable;
using matcore::DiagonalPattern;

namespace {

Monomial mono(const std::string& s) { return experiments::monomial_from_string(s); }

XMomentMap single_x_map(std::complex<double> tau_x, std::complex<double> tau_xx,
                        std::complex<double> tau_xxx = 0.0) {
    XMomentMap m;
    m.set({{1, false}}, tau_x);
    m.set({{1, true}}, std::conj(tau_x));
    m.set({{1, false}, {1, false}}, tau_xx);
    m.set({{1, false}, {1, true}}, tau_xx);
    m.set({{1, true}, {1, true}}, std::conj(tau_xx));
    m.set({{1, false}, {1, false}, {1, false}}, tau_xxx);
    return m;
}

}  // namespace

TEST_CASE("monomial key round trip") {
    CHECK(experiments::monomial_key(mono("x1 u2* x1*")) == "x1 u2* x1*");
    CHECK_THROWS_AS(mono("y1"), Error);
    CHECK_THROWS_AS(mono("x0"), Error);
    CHECK_THROWS_AS(mono(""), Error);
}

TEST_CASE("free moments of Haar unitaries") {
    XMomentMap xm = single_x_map(0.0, 1.0);
    CHECK(experiments::free_moment(mono("u1 u1"), xm) == std::complex<double>(0, 0));
    CHECK(experiments::free_moment(mono("u1 u1*"), xm) == std::complex<double>(1, 0));
    CHECK(experiments::free_moment(mono("u1"), xm) == std::complex<double>(0, 0));
    CHECK(experiments::free_moment(mono("u1 u2*"), xm) == std::complex<double>(0, 0));
}

TEST_CASE("free moment centering recursion: tau(u x u* x)") {
    // tau(X) = 0 -> alternating centered product of length 4 vanishes.
    CHECK(experiments::free_moment(mono("u1 x1 u1* x1"), single_x_map(0.0, 1.0)) ==
          std::complex<double>(0, 0));
    // tau(X) = c -> c^2 by the centering expansion.
    std::complex<double> c{0.3, 0.1};
    auto v = experiments::free_moment(mono("u1 x1 u1* x1"), single_x_map(c, 0.5));
    CHECK(std::abs(v - c * c) < 1e-15);
    // tau(u x u*) = tau(x)
    auto w = experiments::free_moment(mono("u1 x1 u1*"), single_x_map(c, 0.5));
    CHECK(std::abs(w - c) < 1e-15);
}

TEST_CASE("free moment degree cap and unknown moments") {
    XMomentMap xm = single_x_map(0.0, 1.0);
    CHECK_THROWS_AS(experiments::free_moment(mono("u1 u1 u1 u1 u1 u1 u1"), xm), Error);
    XMomentMap empty;
    CHECK_THROWS_AS(experiments::free_moment(mono("x1"), empty), Error);
}

TEST_CASE("free alternating centered products vanish (50 random descriptors)") {
    // Random alternating words u/x with centered x (tau x = 0) and the u's
    // already centered: the moment must be exactly 0.
    haarsample::CounterRng rng(SeededStream{1001, 0});
    XMomentMap xm = single_x_map(0.0, 0.7, 0.2);
    int checked = 0;
    for (int t = 0; t < 50; ++t) {
        int len = 2 + static_cast<int>(rng.next_u64() % 4);
        Monomial m;
        bool use_x = (rng.next_u64() & 1) != 0;
        for (int i = 0; i < len; ++i) {
            if (use_x)
                m.push_back({true, 1, false});
            else
                m.push_back({false, 1, (rng.next_u64() & 1) != 0});
            use_x = !use_x;
        }
        // skip words whose u-runs cancel to nothing when len is odd-shaped
        auto v = experiments::free_moment(m, xm);
        // Alternating single letters: every factor centered -> tau = 0,
        // unless adjacent u u* cancellation produced a shorter non-alternating
        // word; with strict alternation that cannot happen.
        CHECK(std::abs(v) == 0.0);
        ++checked;
    }
    CHECK(checked == 50);
}

TEST_CASE("free moments match large-k sampled moments (asymptotic route)") {
    // tau_k of words in one Haar unitary and one traceless diagonal converges
    // to the free value; at k = 300 the gap is O(1/k).
    const int k = 300;
    auto u = haarsample::sample_unitary(k, SeededStream{777, 0});
    auto x = DiagonalObservable::make(k, DiagonalPattern::Alternating, 1.0);
    std::vector<DiagonalObservable> xs = {x};
    XMomentMap xm = XMomentMap::from_diagonals(xs, 4);

    auto tau_k = [&](const Monomial& m) {
        matcore::ComplexMatrix acc = matcore::ComplexMatrix::Identity(k, k);
        for (const auto& l : m) {
            if (l.is_x) {
                for (int j = 0; j < k; ++j)
                    acc.col(j) *= l.star ? std::conj(x.entries()[static_cast<std::size_t>(j)])
                                         : x.entries()[static_cast<std::size_t>(j)];
            } else {
                acc = l.star ? (acc * u.matrix().adjoint()).eval() : (acc * u.matrix()).eval();
            }
        }
        return acc.trace() / static_cast<double>(k);
    };

    for (const char* text : {"u1 x1 u1* x1", "u1 u1 x1 u1* x1", "x1 u1 x1 u1*",
                             "u1 x1 x1 u1* x1", "u1 u1 u1*"}) {
        Monomial m = mono(text);
        std::complex<double> free_v = experiments::free_moment(m, xm, 6);
        CHECK(std::abs(tau_k(m) - free_v) < 0.06);
    }
}

TEST_CASE("XMomentMap::from_diagonals joint moments") {
    auto x1 = DiagonalObservable::make(4, DiagonalPattern::Alternating, 1.0);
    auto x2 = DiagonalObservable::explicit_list({{0.5, 0}, {0.5, 0}, {-0.5, 0}, {-0.5, 0}}, 0.5);
    std::vector<DiagonalObservable> xs = {x1, x2};
    XMomentMap xm = XMomentMap::from_diagonals(xs, 3);
    CHECK(xm.get({{1, false}}) == std::complex<double>(0, 0));
    CHECK(xm.get({{1, false}, {1, false}}) == std::complex<double>(1, 0));
    // tau(x1 x2) = mean(1*.5, -1*.5, 1*-.5, -1*-.5) = 0
    CHECK(xm.get({{1, false}, {2, false}}) == std::complex<double>(0, 0));
    CHECK(xm.get({{2, false}, {2, false}}) == std::complex<double>(0.25, 0));
}

TEST_CASE("mc_trace_moment at k = 1 with the zero observable") {
    auto parsed = cli::parse_expression("h1 x1");
    std::vector<DiagonalObservable> obs = {DiagonalObservable::make(1, DiagonalPattern::Balanced, 1.0)};
    auto est = experiments::mc_trace_moment(parsed.expr, obs, 1, 1, 50, SeededStream{5, 5});
    CHECK(est.mean == std::complex<double>(0, 0));
    CHECK(est.second_abs_moment == 0.0);
}

TEST_CASE("mc_trace_moment matches the exact zero mean within 4 se") {
    for (const char* text : {"h1 x1", "h1 x1 h1^-1 x2"}) {
        auto parsed = cli::parse_expression(text);
        std::vector<DiagonalObservable> obs(
            static_cast<std::size_t>(parsed.expr.max_slot()),
            DiagonalObservable::make(4, DiagonalPattern::Alternating, 1.0));
        auto est = experiments::mc_trace_moment(parsed.expr, obs, 4, 1, 20000, SeededStream{31, 0});
        CHECK(std::abs(est.mean) <= 4.0 * est.std_error_mean);
        CHECK(est.second_abs_moment >= std::norm(est.mean) - 1e-12);
    }
}

TEST_CASE("mc mean agrees with the exact oracle at k = 5") {
    // k = 4 is covered by the acceptance run; this keeps the k = 5 leg of the
    // oracle-equivalence invariant.
    for (const char* text : {"h1 x1 h1^-1 x2", "h1 x1 h1 x2 h1^-1 x3 h1^-1 x4",
                             "h1 x1 h2 x2 h1^-1 x3 h2^-1 x4"}) {
        auto parsed = cli::parse_expression(text);
        const int n = parsed.expr.max_generator();
        std::vector<weingarten::ExactDiagonal> exact_obs(
            static_cast<std::size_t>(parsed.expr.max_slot()),
            weingarten::ExactDiagonal::make(5, DiagonalPattern::Balanced, 1));
        std::vector<DiagonalObservable> obs;
        for (const auto& e : exact_obs) obs.push_back(e.numeric());
        std::complex<double> exact =
            weingarten::exact_word_moment(parsed.expr, exact_obs, 5, n).to_complex();
        auto est =
            experiments::mc_trace_moment(parsed.expr, obs, 5, n, 20000, SeededStream{64, 2});
        CHECK(std::abs(est.mean - exact) <= 4.0 * est.std_error_mean + 1e-12);
    }
}

TEST_CASE("mc determinism across thread counts") {
    auto parsed = cli::parse_expression("h1 x1 h1^-1 x2");
    std::vector<DiagonalObservable> obs(2, DiagonalObservable::make(4, DiagonalPattern::Alternating, 1.0));
    auto a = experiments::mc_trace_moment(parsed.expr, obs, 4, 1, 500, SeededStream{9, 9}, 1);
    auto b = experiments::mc_trace_moment(parsed.expr, obs, 4, 1, 500, SeededStream{9, 9}, 8);
    CHECK(a.mean == b.mean);
    CHECK(a.second_abs_moment == b.second_abs_moment);
    CHECK(a.std_error_mean == b.std_error_mean);
}

TEST_CASE("mc_tail_probability: eps above the sup bound gives fraction 0") {
    auto parsed = cli::parse_expression("h1 x1 h1^-1 x2");
    std::vector<DiagonalObservable> obs(2, DiagonalObservable::make(4, DiagonalPattern::Alternating, 1.0));
    auto tail = experiments::mc_tail_probability(parsed.expr, obs, 4, 1, 1.5, 500, SeededStream{3, 1});
    CHECK(tail.fraction == 0.0);
    CHECK(tail.hits == 0);
    CHECK_THROWS_AS(
        experiments::mc_tail_probability(parsed.expr, obs, 4, 1, 0.0, 10, SeededStream{3, 1}),
        Error);
}

TEST_CASE("decay_sweep produces one row per k with bounds attached") {
    auto parsed = cli::parse_expression("h1 x1 h1^-1 x2");
    std::vector<experiments::SweepObservable> slots(2, {DiagonalPattern::Alternating, 1.0});
    std::vector<long> ks = {4};
    auto rows = experiments::decay_sweep(parsed.expr, slots, ks, 1, 400, SeededStream{12, 0});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].k == 4);
    CHECK(rows[0].bound.mean_bound > 0);
    CHECK_FALSE(rows[0].has_tail);
}

TEST_CASE("enumerate_monomials counts the finite Gamma alphabet") {
    CHECK(experiments::enumerate_monomials(1, 1, 3).size() == 4 + 16 + 64);
    CHECK(experiments::enumerate_monomials(2, 0, 2).size() == 4 + 16);
    CHECK(experiments::enumerate_monomials(0, 1, 1).size() == 2);
}

TEST_CASE("microstate_fraction trivial regimes") {
    auto x = DiagonalObservable::make(8, DiagonalPattern::Alternating, 1.0);
    std::vector<DiagonalObservable> xs = {x};

    // n = 0: only x-monomials, targets are the matrices' own moments.
    experiments::MicrostateSpec spec;
    spec.R = 1.0;
    spec.m = 3;
    spec.eps = 1e-9;
    CHECK(experiments::microstate_fraction(8, 0, 1, spec, xs, 20, SeededStream{4, 4}) == 1.0);

    // eps >= 2 R^m: every monomial trivially inside the tube.
    experiments::MicrostateSpec loose;
    loose.R = 1.0;
    loose.m = 2;
    loose.eps = 2.5;
    CHECK(experiments::microstate_fraction(8, 1, 1, loose, xs, 20, SeededStream{4, 5}) == 1.0);

    // R < 1 makes Gamma empty once unitaries are included.
    experiments::MicrostateSpec small_r;
    small_r.R = 0.5;
    small_r.m = 1;
    small_r.eps = 0.5;
    std::vector<DiagonalObservable> xs_small = {
        DiagonalObservable::make(8, DiagonalPattern::Alternating, 0.5)};
    CHECK(experiments::microstate_fraction(8, 1, 1, small_r, xs_small, 5, SeededStream{4, 6}) ==
          0.0);

    // Fixed matrices violating the norm cap are a precondition error.
    CHECK_THROWS_AS(
        experiments::microstate_fraction(8, 1, 1, small_r, xs, 5, SeededStream{4, 7}), Error);
}

TEST_CASE("conjugation preserves single-matrix moments (s = 1)") {
    auto x = DiagonalObservable::make(8, DiagonalPattern::Alternating, 1.0);
    std::vector<DiagonalObservable> xs = {x};
    experiments::MicrostateSpec spec;
    spec.R = 1.0;
    spec.m = 3;
    spec.eps = 1e-9;  // conjugation error is pure roundoff
    CHECK(experiments::conjugation_freeness_fraction(8, 1, spec, xs, 10, SeededStream{6, 0}) ==
          1.0);
}

TEST_CASE("microstate and conjugation fractions are thread-count independent") {
    auto x = DiagonalObservable::make(8, DiagonalPattern::Alternating, 1.0);
    std::vector<DiagonalObservable> xs = {x, x};
    experiments::MicrostateSpec spec;
    spec.R = 1.0;
    spec.m = 2;
    spec.eps = 0.3;
    double a = experiments::conjugation_freeness_fraction(8, 2, spec, xs, 40, SeededStream{8, 1}, 1);
    double b = experiments::conjugation_freeness_fraction(8, 2, spec, xs, 40, SeededStream{8, 1}, 8);
    CHECK(a == b);
}

TEST_CASE("microstate target overrides are honored") {
    auto x = DiagonalObservable::make(4, DiagonalPattern::Alternating, 1.0);
    std::vector<DiagonalObservable> xs = {x};
    experiments::MicrostateSpec spec;
    spec.R = 1.0;
    spec.m = 1;
    spec.eps = 0.5;
    // Impossible target for tau(x1): |0 - 9| > eps always.
    spec.target_overrides["x1"] = 9.0;
    CHECK(experiments::microstate_fraction(4, 0, 1, spec, xs, 5, SeededStream{2, 2}) == 0.0);
}
