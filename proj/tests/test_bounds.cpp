#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "asymfree/bounds.hpp"
#include "asymfree/haarsample.hpp"

using namespace asymfree;

TEST_CASE("bell numbers: recurrence, enumeration, caps") {
    CHECK(bounds::bell(0) == 1);
    CHECK(bounds::bell(1) == 1);
    CHECK(bounds::bell(3) == 5);
    CHECK(bounds::bell(10) == 115975);
    CHECK(bounds::bell(30) == BigInt("846749014511809332450147"));
    for (int m = 0; m <= 8; ++m) CHECK(bounds::bell(m) == bounds::bell_by_enumeration(m));
    CHECK_THROWS_AS(bounds::bell(31), Error);
    CHECK_THROWS_AS(bounds::bell(-1), Error);
}

TEST_CASE("falling factorial") {
    CHECK(bounds::falling_factorial(5, 2) == 20);
    CHECK(bounds::falling_factorial(7, 0) == 1);
    CHECK(bounds::falling_factorial(4, 4) == 24);
    CHECK_THROWS_AS(bounds::falling_factorial(3, 4), Error);
}

TEST_CASE("moment integral bounds") {
    auto b = bounds::moment_integral_bounds(2, 2, 6);
    CHECK(b.lemma3 == Rational(1, 30));
    auto c = bounds::moment_integral_bounds(2, 2, 4);
    CHECK(c.lemma5 == Rational(16));
    // chain: 1/P(4,2) = 1/12 <= m^m/k^m = 4/16
    CHECK(c.lemma3 == Rational(1, 12));
    CHECK(c.lemma3 <= Rational(4, 16));
    CHECK_THROWS_AS(bounds::moment_integral_bounds(3, 2, 2), Error);
}

TEST_CASE("brute injection sum worked examples") {
    bounds::InjectionInstance a;
    a.k = 3;
    a.zero_sum = {{1.0, -2.0, 1.0}};
    CHECK(std::abs(bounds::brute_injection_sum(a)) < 1e-14);

    bounds::InjectionInstance b;
    b.k = 3;
    b.plain = {{{2.5, 0}, {2.5, 0}, {2.5, 0}}};
    CHECK(bounds::brute_injection_sum(b).real() == doctest::Approx(7.5));

    bounds::InjectionInstance c;
    c.k = 2;
    c.zero_sum = {{1.0, -1.0}, {1.0, -1.0}};
    CHECK(bounds::brute_injection_sum(c).real() == doctest::Approx(-2.0));

    // More functions than points: no injections exist.
    bounds::InjectionInstance d;
    d.k = 2;
    d.plain = {{{1, 0}, {1, 0}}, {{1, 0}, {1, 0}}, {{1, 0}, {1, 0}}};
    CHECK(bounds::brute_injection_sum(d) == std::complex<double>(0, 0));

    bounds::InjectionInstance caps;
    caps.k = 10;
    CHECK_THROWS_AS(bounds::brute_injection_sum(caps), Error);

    bounds::InjectionInstance notzero;
    notzero.k = 2;
    notzero.zero_sum = {{1.0, 1.0}};
    CHECK_THROWS_AS(bounds::brute_injection_sum(notzero), Error);
}

TEST_CASE("injection sum bound formula") {
    std::vector<double> one = {1.0};
    CHECK(bounds::injection_sum_bound(1, 0, 3, one) == doctest::Approx(std::sqrt(3.0)));
    std::vector<double> two = {1.0, 1.0};
    CHECK(bounds::injection_sum_bound(0, 2, 5, two) == doctest::Approx(25.0));
    std::vector<double> three = {1.0, 1.0, 2.0};
    CHECK(bounds::injection_sum_bound(2, 1, 4, three) == doctest::Approx(288.0));
    CHECK_THROWS_AS(bounds::injection_sum_bound(1, 1, 4, one), Error);
}

TEST_CASE("theorem bounds: frozen worked example") {
    auto rep = bounds::theorem_bounds(2, 1.0, 2, 100, 0.1);
    CHECK(rep.mean_bound == doctest::Approx(1.28).epsilon(1e-14));
    CHECK(rep.second_moment_bound == doctest::Approx(98.304).epsilon(1e-14));
    CHECK(rep.tail_bound == doctest::Approx(4.0 * 98.304 / 0.01).epsilon(1e-12));
    CHECK_FALSE(rep.tail_valid);  // needs k > 2560
    CHECK(bounds::theorem_bounds(2, 1.0, 2, 2561, 0.1).tail_valid);

    auto exact = bounds::theorem_bounds_exact(2, Rational(1), 2, 100, Rational(1, 10));
    CHECK(exact.mean_bound == Rational(32, 25));
    Rational second(15 * 256 * 256, 10000);
    second.canonicalize();
    CHECK(exact.second_moment_bound == second);
}

TEST_CASE("theorem bounds monotonicity") {
    for (int m : {1, 2, 3}) {
        for (int w : {1, 2, 4}) {
            double prev_k = 0;
            for (long k : {4L, 8L, 16L, 64L}) {
                auto rep = bounds::theorem_bounds(m, 1.0, w, k, 0.1);
                if (prev_k > 0) {
                    CHECK(rep.mean_bound < prev_k);  // antitone in k
                }
                prev_k = rep.mean_bound;
            }
            auto small_m = bounds::theorem_bounds(m, 0.5, w, 8, 0.1);
            auto large_m = bounds::theorem_bounds(m, 2.0, w, 8, 0.1);
            CHECK(small_m.mean_bound < large_m.mean_bound);  // monotone in M
        }
        auto w1 = bounds::theorem_bounds(m, 1.0, 1, 8, 0.1);
        auto w2 = bounds::theorem_bounds(m, 1.0, 3, 8, 0.1);
        CHECK(w1.mean_bound < w2.mean_bound);  // monotone in w
    }
}

TEST_CASE("corollary intersection bound") {
    double v = bounds::corollary_intersection_bound(3, 1, 1.0, 1, 1000, 1.0);
    CHECK(v == doctest::Approx(0.999616).epsilon(1e-12));
    CHECK(bounds::corollary_intersection_bound(0, 1, 1.0, 1, 10, 1.0) == 1.0);
    CHECK(bounds::corollary_intersection_bound(3, 2, 1.0, 2, 3, 0.05) == 0.0);  // clamps
    CHECK_THROWS_AS(bounds::corollary_intersection_bound(-1, 1, 1.0, 1, 10, 1.0), Error);
}

TEST_CASE("randomized |brute sum| <= bound (property)") {
    haarsample::CounterRng rng(haarsample::SeededStream{321, 0});
    for (int t = 0; t < 60; ++t) {
        int total = 1 + static_cast<int>(rng.next_u64() % 5);
        int n = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(total + 1));
        int m = total - n;
        int k = 2 + static_cast<int>(rng.next_u64() % 6);
        bounds::InjectionInstance inst;
        inst.k = k;
        std::vector<double> norms;
        for (int f = 0; f < total; ++f) {
            std::vector<std::complex<double>> fn(static_cast<std::size_t>(k));
            for (auto& v : fn) v = {2 * rng.next_unit() - 1, 2 * rng.next_unit() - 1};
            if (f < n) {
                std::complex<double> mean = 0;
                for (auto& v : fn) mean += v;
                mean /= static_cast<double>(k);
                for (auto& v : fn) v -= mean;
            }
            double norm = 0;
            for (auto& v : fn) norm = std::max(norm, std::abs(v));
            norms.push_back(norm);
            (f < n ? inst.zero_sum : inst.plain).push_back(std::move(fn));
        }
        double bound = bounds::injection_sum_bound(n, m, k, norms);
        CHECK(std::abs(bounds::brute_injection_sum(inst)) <= bound + 1e-9 * std::max(1.0, bound));
    }
}
