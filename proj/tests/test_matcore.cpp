#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>

#include "asymfree/haarsample.hpp"
#include "asymfree/matcore.hpp"

using namespace asymfree;
using matcore::ComplexMatrix;
using matcore::DiagonalObservable;
using matcore::DiagonalPattern;

TEST_CASE("normalized_trace basics") {
    CHECK(matcore::normalized_trace(ComplexMatrix::Identity(4, 4)) == std::complex<double>(1, 0));
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = 1;
    d(1, 1) = -1;
    CHECK(matcore::normalized_trace(d) == std::complex<double>(0, 0));
    ComplexMatrix g = ComplexMatrix::Zero(3, 3);
    g(0, 0) = {1, 1};
    g(1, 1) = {2, -1};
    g(2, 2) = {3, 0};
    CHECK(matcore::normalized_trace(g) == std::complex<double>(2, 0));
}

TEST_CASE("normalized_trace is tracial on products") {
    auto us = haarsample::sample_tuple(6, 2, {11, 0});
    ComplexMatrix a = us[0].matrix();
    ComplexMatrix b = us[1].matrix();
    auto ab = matcore::normalized_trace(a * b);
    auto ba = matcore::normalized_trace(b * a);
    CHECK(std::abs(ab - ba) < 1e-13);
}

TEST_CASE("check_unitary accepts unitaries and reports violations") {
    CHECK(matcore::check_unitary(ComplexMatrix::Identity(3, 3), 1e-10).pass);

    ComplexMatrix h(2, 2);
    double s = 1.0 / std::sqrt(2.0);
    h << s, s, s, -s;
    CHECK(matcore::check_unitary(h, 1e-10).pass);

    ComplexMatrix bad = ComplexMatrix::Identity(2, 2);
    bad(0, 0) = 2;
    auto rep = matcore::check_unitary(bad, 1e-10);
    CHECK_FALSE(rep.pass);
    CHECK(rep.worst == doctest::Approx(3.0));  // |sum - 1| = |4 - 1|
    CHECK((rep.condition == matcore::UnitarityCondition::RowNorm ||
           rep.condition == matcore::UnitarityCondition::ColNorm));
    CHECK(rep.first == 1);
}

TEST_CASE("check_unitary pass implies max-norm closeness of u u* to I") {
    const double tol = 1e-10;
    for (int k : {2, 5, 9}) {
        auto u = haarsample::sample_unitary(k, {21, static_cast<std::uint64_t>(k)});
        auto rep = matcore::check_unitary(u.matrix(), tol);
        CHECK(rep.pass);
        ComplexMatrix res = u.matrix() * u.matrix().adjoint() - ComplexMatrix::Identity(k, k);
        CHECK(res.cwiseAbs().maxCoeff() <= k * tol);
    }
}

TEST_CASE("trace conjugation invariance tau(u a u*) = tau(a)") {
    auto u = haarsample::sample_unitary(7, {31, 0});
    haarsample::CounterRng rng(haarsample::SeededStream{31, 9});
    ComplexMatrix a(7, 7);
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) a(i, j) = rng.next_standard_complex_gaussian();
    auto lhs = matcore::normalized_trace(u.matrix() * a * u.matrix().adjoint());
    auto rhs = matcore::normalized_trace(a);
    CHECK(std::abs(lhs - rhs) < 1e-10);
}

TEST_CASE("UnitaryMatrix::verified rejects non-unitaries") {
    CHECK_THROWS_AS(matcore::UnitaryMatrix::verified(ComplexMatrix::Zero(2, 2)), Error);
    CHECK_NOTHROW(matcore::UnitaryMatrix::verified(ComplexMatrix::Identity(2, 2)));
}

TEST_CASE("make_traceless_diagonal patterns") {
    auto alt = DiagonalObservable::make(4, DiagonalPattern::Alternating, 1.0);
    CHECK(alt.entries() == std::vector<std::complex<double>>{1.0, -1.0, 1.0, -1.0});

    auto bal = DiagonalObservable::make(3, DiagonalPattern::Balanced, 1.0);
    CHECK(bal.entries() == std::vector<std::complex<double>>{1.0, -1.0, 0.0});

    auto roots = DiagonalObservable::make(3, DiagonalPattern::RootsOfUnity, 1.0);
    std::complex<double> sum = 0;
    for (auto e : roots.entries()) {
        sum += e;
        CHECK(std::abs(e) <= 1.0 + 1e-12);
    }
    CHECK(std::abs(sum) < 1e-12);
    CHECK(std::abs(roots.entries()[1] - std::complex<double>(-0.5, std::sqrt(3.0) / 2)) < 1e-12);

    CHECK_THROWS_AS(DiagonalObservable::make(3, DiagonalPattern::Alternating, 1.0), Error);
    CHECK_THROWS_AS(DiagonalObservable::make(1, DiagonalPattern::RootsOfUnity, 1.0), Error);
}

TEST_CASE("explicit observable lists are validated") {
    CHECK_THROWS_AS(DiagonalObservable::explicit_list({1.0, 1.0}, 1.0), Error);   // trace
    CHECK_THROWS_AS(DiagonalObservable::explicit_list({2.0, -2.0}, 1.0), Error);  // norm
    auto ok = DiagonalObservable::explicit_list({{0.5, 0}, {-0.25, 0}, {-0.25, 0}}, 0.5);
    CHECK(ok.norm_bound() == 0.5);
}

TEST_CASE("apply_right equals dense right multiplication") {
    auto x = DiagonalObservable::make(5, DiagonalPattern::Balanced, 2.0);
    auto u = haarsample::sample_unitary(5, {77, 0});
    ComplexMatrix lhs = u.matrix();
    x.apply_right(lhs);
    ComplexMatrix rhs = u.matrix() * x.as_matrix();
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() == 0.0);
}
