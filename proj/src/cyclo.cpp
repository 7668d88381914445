#include "asymfree/cyclo.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <sstream>

namespace asymfree {

namespace {

// Exact division of integer polynomials, used by the cyclotomic recursion:
// Phi_k = (x^k - 1) / prod_{d | k, d < k} Phi_d.
std::vector<BigInt> poly_div_exact(std::vector<BigInt> num, const std::vector<BigInt>& den) {
    std::vector<BigInt> q(num.size() - den.size() + 1, BigInt(0));
    for (std::size_t i = q.size(); i-- > 0;) {
        BigInt c = num[i + den.size() - 1] / den.back();
        q[i] = c;
        if (c == 0) continue;
        for (std::size_t j = 0; j < den.size(); ++j) num[i + j] -= c * den[j];
    }
    for (const BigInt& r : num)
        if (r != 0) throw_invalid("cyclotomic: non-exact polynomial division");
    return q;
}

}  // namespace

std::vector<BigInt> cyclotomic_polynomial(long k) {
    if (k < 1 || k > 512) throw_invalid("cyclotomic_polynomial: order out of range");
    static std::map<long, std::vector<BigInt>> cache = {{1, {BigInt(-1), BigInt(1)}}};
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(k);
    if (it != cache.end()) return it->second;
    // Fill divisors bottom-up: Phi_d = (x^d - 1) / prod_{e | d, e < d} Phi_e.
    for (long d = 2; d <= k; ++d) {
        if (k % d != 0 || cache.count(d)) continue;
        std::vector<BigInt> num(static_cast<std::size_t>(d) + 1, BigInt(0));
        num[0] = -1;
        num[static_cast<std::size_t>(d)] = 1;
        for (long e = 1; e < d; ++e)
            if (d % e == 0) num = poly_div_exact(std::move(num), cache.at(e));
        cache[d] = std::move(num);
    }
    return cache.at(k);
}

ExactScalar ExactScalar::from_rational(RationalComplex v) {
    ExactScalar s(1);
    s.c_[0] = std::move(v);
    return s;
}

ExactScalar ExactScalar::from_rational(const Rational& re, const Rational& im) {
    return from_rational(RationalComplex{re, im});
}

ExactScalar ExactScalar::root_power(long order, long power, RationalComplex scale) {
    if (order < 1) throw_invalid("ExactScalar: root order must be >= 1");
    ExactScalar s(order);
    s.add_scaled_power(power, scale);
    return s;
}

void ExactScalar::add_scaled_power(long power, const RationalComplex& scale) {
    long e = power % order_;
    if (e < 0) e += order_;
    c_[static_cast<std::size_t>(e)] += scale;
}

ExactScalar ExactScalar::conj() const {
    ExactScalar out(order_);
    for (long e = 0; e < order_; ++e) {
        long f = (order_ - e) % order_;
        out.c_[static_cast<std::size_t>(f)] = c_[static_cast<std::size_t>(e)].conj();
    }
    return out;
}

void ExactScalar::scale(const Rational& s) {
    for (auto& v : c_) v = v * s;
}

void ExactScalar::scale(const RationalComplex& s) {
    for (auto& v : c_) v = v * s;
}

long ExactScalar::lcm(long a, long b) { return std::lcm(a, b); }

ExactScalar ExactScalar::lifted(long order) const {
    if (order == order_) return *this;
    if (order % order_ != 0) throw_invalid("ExactScalar: incompatible root orders");
    ExactScalar out(order);
    const long stride = order / order_;
    for (long e = 0; e < order_; ++e)
        out.c_[static_cast<std::size_t>(e * stride)] = c_[static_cast<std::size_t>(e)];
    return out;
}

ExactScalar ExactScalar::operator+(const ExactScalar& o) const {
    long r = lcm(order_, o.order_);
    ExactScalar a = lifted(r), b = o.lifted(r);
    for (long e = 0; e < r; ++e)
        a.c_[static_cast<std::size_t>(e)] += b.c_[static_cast<std::size_t>(e)];
    return a;
}

ExactScalar ExactScalar::operator-(const ExactScalar& o) const {
    long r = lcm(order_, o.order_);
    ExactScalar a = lifted(r), b = o.lifted(r);
    for (long e = 0; e < r; ++e)
        a.c_[static_cast<std::size_t>(e)] -= b.c_[static_cast<std::size_t>(e)];
    return a;
}

ExactScalar ExactScalar::operator*(const ExactScalar& o) const {
    long r = lcm(order_, o.order_);
    ExactScalar a = lifted(r), b = o.lifted(r);
    ExactScalar out(r);
    for (long e = 0; e < r; ++e) {
        if (a.c_[static_cast<std::size_t>(e)].is_zero()) continue;
        for (long f = 0; f < r; ++f) {
            if (b.c_[static_cast<std::size_t>(f)].is_zero()) continue;
            long g = (e + f) % r;
            out.c_[static_cast<std::size_t>(g)] +=
                a.c_[static_cast<std::size_t>(e)] * b.c_[static_cast<std::size_t>(f)];
        }
    }
    return out;
}

void ExactScalar::canonicalize() {
    if (order_ == 1) return;
    const std::vector<BigInt> phi = cyclotomic_polynomial(order_);
    const std::size_t deg = phi.size() - 1;  // phi(order)
    // Polynomial remainder modulo the monic phi; leading coefficient is 1.
    for (std::size_t i = c_.size(); i-- > deg;) {
        RationalComplex lead = c_[i];
        if (lead.is_zero()) continue;
        c_[i] = RationalComplex();
        for (std::size_t j = 0; j < deg; ++j) {
            Rational pj(phi[j]);
            c_[i - deg + j] -= lead * pj;
        }
    }
}

bool ExactScalar::is_zero() const {
    ExactScalar t = *this;
    t.canonicalize();
    for (const auto& v : t.c_)
        if (!v.is_zero()) return false;
    return true;
}

std::optional<RationalComplex> ExactScalar::as_rational() const {
    ExactScalar t = *this;
    t.canonicalize();
    // Order 4 stays in Q(i): zeta_4 = i, so c0 + c1 zeta is still rational
    // complex.
    if (t.order_ == 4 && !t.c_[1].is_zero()) {
        for (std::size_t e = 2; e < t.c_.size(); ++e)
            if (!t.c_[e].is_zero()) return std::nullopt;
        const RationalComplex& c0 = t.c_[0];
        const RationalComplex& c1 = t.c_[1];
        return RationalComplex{c0.re - c1.im, c0.im + c1.re};
    }
    for (std::size_t e = 1; e < t.c_.size(); ++e)
        if (!t.c_[e].is_zero()) return std::nullopt;
    return t.c_[0];
}

Rational ExactScalar::abs_upper() const {
    Rational s = 0;
    for (const auto& v : c_) s += v.abs_upper();
    return s;
}

ExactScalar ExactScalar::abs2() const { return (*this) * conj(); }

ExactScalar::Cmp ExactScalar::abs_le(const Rational& q) const {
    if (q < 0) return Cmp::Greater;
    ExactScalar t = *this;
    t.canonicalize();
    if (auto r = t.as_rational()) {
        return r->abs2() <= q * q ? Cmp::LessOrEqual : Cmp::Greater;
    }
    if (t.abs_upper() <= q) return Cmp::LessOrEqual;
    if (auto a2 = t.abs2().as_rational()) {
        if (a2->im != 0) return Cmp::Unknown;
        return a2->re <= q * q ? Cmp::LessOrEqual : Cmp::Greater;
    }
    return Cmp::Unknown;
}

std::complex<double> ExactScalar::to_complex() const {
    std::complex<double> acc = 0;
    for (long e = 0; e < order_; ++e) {
        const auto& v = c_[static_cast<std::size_t>(e)];
        if (v.is_zero()) continue;
        double th = 2.0 * std::numbers::pi * static_cast<double>(e) / static_cast<double>(order_);
        acc += v.to_complex() * std::complex<double>(std::cos(th), std::sin(th));
    }
    return acc;
}

std::string ExactScalar::str() const {
    ExactScalar t = *this;
    t.canonicalize();
    if (auto r = t.as_rational()) {
        std::ostringstream os;
        os << r->re.get_str();
        if (r->im != 0) os << (r->im > 0 ? "+" : "") << r->im.get_str() << "i";
        return os.str();
    }
    std::ostringstream os;
    bool first = true;
    for (long e = 0; e < t.order_; ++e) {
        const auto& v = t.c_[static_cast<std::size_t>(e)];
        if (v.is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        os << "(" << v.re.get_str();
        if (v.im != 0) os << (v.im > 0 ? "+" : "") << v.im.get_str() << "i";
        os << ")";
        if (e > 0) os << "*z" << t.order_ << "^" << e;
    }
    if (first) os << "0";
    return os.str();
}

bool operator==(const ExactScalar& a, const ExactScalar& b) {
    return (a - b).is_zero();
}

}  // namespace asymfree
