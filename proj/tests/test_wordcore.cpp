#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "asymfree/haarsample.hpp"
#include "asymfree/wordcore.hpp"

using namespace asymfree;
using wordcore::AlternatingExpression;
using wordcore::Letter;
using wordcore::ReducedWord;

namespace {

ReducedWord w(std::initializer_list<Letter> ls) { return ReducedWord::from_letters(ls); }

}  // namespace

TEST_CASE("reduce cancels adjacent inverse pairs") {
    CHECK(w({{1, 1}, {1, -1}}).is_identity());
    CHECK(w({{1, 1}, {2, 1}, {2, -1}, {1, 1}}) == w({{1, 1}, {1, 1}}));
    CHECK(w({{1, 1}, {2, 1}}) == w({{1, 1}, {2, 1}}));
    CHECK(w({{1, 1}, {2, 1}}).length() == 2);
}

TEST_CASE("reduce is idempotent on random letter sequences") {
    haarsample::CounterRng rng(haarsample::SeededStream{42, 1});
    for (int t = 0; t < 300; ++t) {
        int len = static_cast<int>(rng.next_u64() % 21);
        std::vector<Letter> ls;
        for (int i = 0; i < len; ++i)
            ls.push_back({1 + static_cast<int>(rng.next_u64() % 3),
                          (rng.next_u64() & 1) ? 1 : -1});
        ReducedWord once = ReducedWord::reduce(ls);
        ReducedWord twice = ReducedWord::reduce(once.letters());
        CHECK(once == twice);
        // no adjacent inverse pair survives
        const auto& v = once.letters();
        for (std::size_t i = 1; i < v.size(); ++i) {
            bool cancel = v[i - 1].generator == v[i].generator &&
                          v[i - 1].exponent == -v[i].exponent;
            CHECK_FALSE(cancel);
        }
    }
}

TEST_CASE("concat length is subadditive") {
    haarsample::CounterRng rng(haarsample::SeededStream{43, 1});
    for (int t = 0; t < 200; ++t) {
        auto mk = [&]() {
            std::vector<Letter> ls;
            int len = static_cast<int>(rng.next_u64() % 11);
            for (int i = 0; i < len; ++i)
                ls.push_back({1 + static_cast<int>(rng.next_u64() % 2),
                              (rng.next_u64() & 1) ? 1 : -1});
            return ReducedWord::reduce(ls);
        };
        ReducedWord a = mk(), b = mk();
        CHECK(a.concat(b).length() <= a.length() + b.length());
    }
}

TEST_CASE("inverse reverses and negates; involution") {
    ReducedWord ab = w({{1, 1}, {2, 1}});
    ReducedWord expect = w({{2, -1}, {1, -1}});
    CHECK(ab.inverse() == expect);
    CHECK(ab.inverse().inverse() == ab);
    CHECK(ReducedWord().inverse().is_identity());
    CHECK(w({{1, -1}}).inverse() == w({{1, 1}}));
}

TEST_CASE("evaluate: identity, single letters, inverse is adjoint") {
    auto us = haarsample::sample_tuple(5, 2, {7, 0});
    matcore::ComplexMatrix id = wordcore::evaluate(ReducedWord(), us);
    CHECK((id - matcore::ComplexMatrix::Identity(5, 5)).norm() == 0.0);
    CHECK((wordcore::evaluate(w({{1, 1}}), us) - us[0].matrix()).norm() == 0.0);
    CHECK((wordcore::evaluate(w({{1, -1}}), us) - us[0].matrix().adjoint()).norm() == 0.0);

    haarsample::CounterRng rng(haarsample::SeededStream{44, 1});
    for (int t = 0; t < 20; ++t) {
        std::vector<Letter> ls;
        int len = 1 + static_cast<int>(rng.next_u64() % 6);
        for (int i = 0; i < len; ++i)
            ls.push_back({1 + static_cast<int>(rng.next_u64() % 2),
                          (rng.next_u64() & 1) ? 1 : -1});
        ReducedWord word = ReducedWord::reduce(ls);
        matcore::ComplexMatrix lhs = wordcore::evaluate(word.inverse(), us);
        matcore::ComplexMatrix rhs = wordcore::evaluate(word, us).adjoint();
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("evaluate is a homomorphism under concat") {
    auto us = haarsample::sample_tuple(4, 2, {9, 3});
    haarsample::CounterRng rng(haarsample::SeededStream{45, 1});
    for (int t = 0; t < 20; ++t) {
        auto mk = [&]() {
            std::vector<Letter> ls;
            int len = static_cast<int>(rng.next_u64() % 5);
            for (int i = 0; i < len; ++i)
                ls.push_back({1 + static_cast<int>(rng.next_u64() % 2),
                              (rng.next_u64() & 1) ? 1 : -1});
            return ReducedWord::reduce(ls);
        };
        ReducedWord a = mk(), b = mk();
        matcore::ComplexMatrix lhs = wordcore::evaluate(a.concat(b), us);
        matcore::ComplexMatrix rhs = wordcore::evaluate(a, us) * wordcore::evaluate(b, us);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("evaluate rejects out-of-range generators and mismatched dims") {
    auto us = haarsample::sample_tuple(3, 1, {1, 0});
    CHECK_THROWS_AS((void)wordcore::evaluate(w({{2, 1}}), us), Error);
    std::vector<matcore::UnitaryMatrix> mixed;
    mixed.push_back(haarsample::sample_unitary(3, {1, 0}));
    mixed.push_back(haarsample::sample_unitary(4, {1, 1}));
    CHECK_THROWS_AS((void)wordcore::evaluate(w({{1, 1}, {2, 1}}), mixed), Error);
}

TEST_CASE("validate_expression enforces the theorem hypotheses") {
    AlternatingExpression good({{w({{1, 1}}), 1}, {w({{1, -1}}), 2}});
    CHECK(good.word_count() == 2);
    CHECK(good.total_length() == 2);
    CHECK_NOTHROW(wordcore::validate_expression(good, 1, 2));
    CHECK(good.cumulative_lengths() == std::vector<int>{1, 2});

    // EmptyWord: some g_i = e
    AlternatingExpression empty_word({{w({{1, 1}}), 1}, {ReducedWord(), 2}});
    CHECK_THROWS_WITH_AS(wordcore::validate_expression(empty_word, 1, 1),
                         doctest::Contains("empty word"), Error);

    // LengthMismatch
    AlternatingExpression two({{w({{1, 1}, {2, 1}}), 1}});
    CHECK_THROWS_WITH_AS(wordcore::validate_expression(two, 2, 1),
                         doctest::Contains("length mismatch"), Error);

    // GeneratorOutOfRange
    CHECK_THROWS_WITH_AS(wordcore::validate_expression(two, 1, 2),
                         doctest::Contains("generator index"), Error);
}
