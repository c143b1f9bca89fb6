#pragma once

// The coefficient field Q(q): fractions of integer polynomials in the
// deformation parameter q, kept in a canonical form so that equality is a
// plain comparison of representations.
//
// Canonical form: num/den have no common polynomial factor, the leading
// coefficient of den is positive, and the integer contents of num and den
// are coprime.  That pins the representation down uniquely.

#include <optional>
#include <string>
#include <utility>

#include "qmx/errors.hpp"
#include "qmx/poly.hpp"

namespace qmx {

class Scalar {
  public:
    Scalar() : num_(), den_(IntPoly::constant(1)) {}
    Scalar(const IntPoly& num, const IntPoly& den) : num_(num), den_(den) { normalize(); }
    Scalar(long long v) : num_(IntPoly::constant(Int(v))), den_(IntPoly::constant(1)) {}

    static Scalar zero() { return Scalar(); }
    static Scalar one() { return Scalar(1); }
    static Scalar from_int(Int v) { return Scalar(IntPoly::constant(std::move(v)), IntPoly::constant(1)); }
    static Scalar from_fraction(Int n, Int d) {
        return Scalar(IntPoly::constant(std::move(n)), IntPoly::constant(std::move(d)));
    }
    static Scalar q() { return Scalar(IntPoly::monomial(1, 1), IntPoly::constant(1)); }
    // q^m for any integer m, negative exponents landing in the denominator
    static Scalar q_power(long long m) {
        if (m >= 0) return Scalar(IntPoly::monomial(1, static_cast<std::size_t>(m)), IntPoly::constant(1));
        return Scalar(IntPoly::constant(1), IntPoly::monomial(1, static_cast<std::size_t>(-m)));
    }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_ == den_; }
    const IntPoly& num() const { return num_; }
    const IntPoly& den() const { return den_; }

    bool operator==(const Scalar& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    Scalar operator-() const {
        Scalar r(*this);
        r.num_ = -r.num_;
        return r;
    }

    Scalar operator+(const Scalar& o) const {
        return Scalar(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
    }
    Scalar operator-(const Scalar& o) const {
        return Scalar(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
    }
    Scalar operator*(const Scalar& o) const { return Scalar(num_ * o.num_, den_ * o.den_); }
    Scalar operator/(const Scalar& o) const {
        if (o.is_zero()) throw division_by_zero();
        return Scalar(num_ * o.den_, den_ * o.num_);
    }

    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

    Scalar inverse() const {
        if (is_zero()) throw division_by_zero();
        return Scalar(den_, num_);
    }

    Scalar pow(long long e) const {
        if (e < 0) return inverse().pow(-e);
        Scalar r = one();
        Scalar b = *this;
        while (e) {
            if (e & 1) r *= b;
            b *= b;
            e >>= 1;
        }
        return r;
    }

    // If this scalar is exactly +-q^m, report (sign, m); otherwise nothing.
    std::optional<std::pair<int, long long>> as_q_power() const {
        if (is_zero()) return std::nullopt;
        auto single_term = [](const IntPoly& p) {
            for (long long i = 0; i < p.degree(); ++i)
                if (p.coeff(static_cast<std::size_t>(i)) != 0) return false;
            return true;
        };
        if (!single_term(num_) || !single_term(den_)) return std::nullopt;
        const Int& a = num_.leading();
        const Int& b = den_.leading();
        if (a != 1 && a != -1) return std::nullopt;
        if (b != 1) return std::nullopt;
        int sign = (a == 1) ? 1 : -1;
        return std::make_pair(sign, num_.degree() - den_.degree());
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::string n = num_.to_string();
        if (den_ == IntPoly::constant(1)) return n;
        std::string d = den_.to_string();
        auto wrap = [](const std::string& s) {
            return s.find_first_of("+- ") == std::string::npos ? s : "(" + s + ")";
        };
        return wrap(n) + "/" + wrap(d);
    }

  private:
    void normalize() {
        if (den_.is_zero()) throw division_by_zero();
        if (num_.is_zero()) {
            den_ = IntPoly::constant(1);
            return;
        }
        IntPoly g = IntPoly::gcd(num_, den_);
        if (g.degree() > 0 || g.leading() != 1) {
            num_ = num_.div_exact(g);
            den_ = den_.div_exact(g);
        }
        Int cn = num_.content();
        Int cd = den_.content();
        Int c = int_gcd(cn, cd);
        if (den_.leading() < 0) c = -c;
        if (c != 1) {
            num_ = num_.div_int(c);
            den_ = den_.div_int(c);
        }
    }

    IntPoly num_;
    IntPoly den_;
};

inline Scalar operator*(long long k, const Scalar& s) { return Scalar(k) * s; }

// [r]_base = 1 + base + ... + base^(r-1), with [0] = 1 by our convention.
inline Scalar q_integer(unsigned r, const Scalar& base) {
    if (r == 0) return Scalar::one();
    Scalar sum = Scalar::zero();
    Scalar p = Scalar::one();
    for (unsigned i = 0; i < r; ++i) {
        sum += p;
        p *= base;
    }
    return sum;
}
inline Scalar q_integer(unsigned r) { return q_integer(r, Scalar::q()); }

// [r]! = [1][2]...[r], empty product for r = 0
inline Scalar q_factorial(unsigned r, const Scalar& base) {
    Scalar f = Scalar::one();
    for (unsigned i = 1; i <= r; ++i) f *= q_integer(i, base);
    return f;
}
inline Scalar q_factorial(unsigned r) { return q_factorial(r, Scalar::q()); }

// Coefficient of the r-th term in the deleting-derivation series:
//   (1 - q^-2)^-r / [r]!_{q^-2}
// First few values: 1, q^2/(q^2-1), q^6/((q^2-1)^2 (q^2+1)).
inline Scalar cauchon_coeff(unsigned r) {
    Scalar base = Scalar::q_power(-2);
    Scalar u = Scalar::one() - base; // 1 - q^-2
    return u.pow(-static_cast<long long>(r)) / q_factorial(r, base);
}

} // namespace qmx
