#pragma once

#include <gmpxx.h>

#include <complex>
#include <string>

#include "asymfree/errors.hpp"

namespace asymfree {

using Rational = mpq_class;
using BigInt = mpz_class;

inline BigInt integer_pow(const BigInt& base, unsigned long e) {
    BigInt out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
    return out;
}

inline Rational rational_pow(const Rational& base, long e) {
    if (e < 0) {
        if (base == 0) throw_invalid("rational_pow: zero base with negative exponent");
        Rational inv = 1 / base;
        return rational_pow(inv, -e);
    }
    Rational out = 1;
    Rational acc = base;
    unsigned long n = static_cast<unsigned long>(e);
    while (n > 0) {
        if (n & 1) out *= acc;
        if (n >>= 1) acc *= acc;
    }
    return out;
}

// Exact: every finite double is a dyadic rational.
inline Rational rational_from_double(double x) { return Rational(x); }

inline double to_double(const Rational& q) { return q.get_d(); }

inline std::string to_string(const Rational& q) { return q.get_str(); }

// Element of Q(i): complex number with exact rational real/imaginary parts.
struct RationalComplex {
    Rational re = 0;
    Rational im = 0;

    RationalComplex() = default;
    RationalComplex(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    explicit RationalComplex(long r) : re(r), im(0) {}

    bool is_zero() const { return re == 0 && im == 0; }

    RationalComplex conj() const { return {re, -im}; }

    Rational abs2() const { return re * re + im * im; }

    // |re| + |im| >= |z|; used for exact one-sided modulus bounds.
    Rational abs_upper() const { return abs(re) + abs(im); }

    std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }

    RationalComplex& operator+=(const RationalComplex& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    RationalComplex& operator-=(const RationalComplex& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    friend RationalComplex operator+(RationalComplex a, const RationalComplex& b) { return a += b; }
    friend RationalComplex operator-(RationalComplex a, const RationalComplex& b) { return a -= b; }
    friend RationalComplex operator*(const RationalComplex& a, const RationalComplex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend RationalComplex operator*(const RationalComplex& a, const Rational& s) {
        return {a.re * s, a.im * s};
    }
    friend bool operator==(const RationalComplex& a, const RationalComplex& b) {
        return a.re == b.re && a.im == b.im;
    }
};

}  // namespace asymfree
