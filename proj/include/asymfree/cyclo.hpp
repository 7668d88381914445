#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "asymfree/rationals.hpp"

namespace asymfree {

// Coefficients of the k-th cyclotomic polynomial (monic, degree phi(k)).
std::vector<BigInt> cyclotomic_polynomial(long k);

// Exact scalar of the form sum_e c_e zeta_r^e with Gaussian-rational
// coefficients c_e; order 1 is a plain element of Q(i). Closed under +, *,
// conjugation, so entry moments weighted by root-of-unity observables stay
// exact. Canonical form reduces modulo the r-th cyclotomic polynomial.
class ExactScalar {
  public:
    ExactScalar() : order_(1), c_(1) {}  // zero

    static ExactScalar from_rational(RationalComplex v);
    static ExactScalar from_rational(const Rational& re, const Rational& im = 0);
    // scale * zeta_order^power
    static ExactScalar root_power(long order, long power, RationalComplex scale = RationalComplex(1));

    long order() const { return order_; }

    // Accumulation at a fixed root order; power is taken mod order.
    void add_scaled_power(long power, const RationalComplex& scale);

    ExactScalar conj() const;
    void scale(const Rational& s);
    void scale(const RationalComplex& s);

    ExactScalar operator+(const ExactScalar& o) const;
    ExactScalar operator-(const ExactScalar& o) const;
    ExactScalar operator*(const ExactScalar& o) const;

    // Reduce modulo the cyclotomic polynomial; afterwards coefficients with
    // index >= phi(order) are zero and representation is unique.
    void canonicalize();

    bool is_zero() const;
    // Present iff the canonical form has degree 0 (value lies in Q(i)).
    std::optional<RationalComplex> as_rational() const;

    // Exact |z| <= q / |z| > q decision. Rational values compare exactly;
    // otherwise tries the triangle upper bound, then exact |z|^2 when that is
    // rational. Unknown means the value is genuinely irrational and too close
    // to q for the one-sided bounds.
    enum class Cmp { LessOrEqual, Greater, Unknown };
    Cmp abs_le(const Rational& q) const;

    // z * conj(z); real by construction.
    ExactScalar abs2() const;

    std::complex<double> to_complex() const;
    std::string str() const;

    friend bool operator==(const ExactScalar& a, const ExactScalar& b);

  private:
    explicit ExactScalar(long order) : order_(order), c_(static_cast<std::size_t>(order)) {}
    static long lcm(long a, long b);
    ExactScalar lifted(long order) const;  // re-index into a multiple order
    Rational abs_upper() const;            // sum_e |c_e| bounds |z| from above

    long order_;
    std::vector<RationalComplex> c_;  // size == order_
};

}  // namespace asymfree
