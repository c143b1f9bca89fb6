#pragma once

// Dense univariate polynomials over arbitrary-precision integers.
// Coefficient layer underneath the fraction field Q(q); only the handful of
// operations the fraction field needs (ring ops, content, exact division,
// primitive-PRS gcd) are provided.

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

#include "qmx/errors.hpp"

namespace qmx {

using Int = boost::multiprecision::cpp_int;

inline Int int_gcd(Int a, Int b) {
    using boost::multiprecision::abs;
    a = abs(a);
    b = abs(b);
    while (b != 0) {
        Int t = a % b;
        a = b;
        b = t;
    }
    return a;
}

class IntPoly {
  public:
    IntPoly() = default;
    IntPoly(std::initializer_list<Int> ascending) : c_(ascending) { trim(); }
    explicit IntPoly(std::vector<Int> ascending) : c_(std::move(ascending)) { trim(); }

    static IntPoly constant(Int v) {
        IntPoly p;
        if (v != 0) p.c_.push_back(std::move(v));
        return p;
    }
    // c * q^e
    static IntPoly monomial(Int coeff, std::size_t e) {
        IntPoly p;
        if (coeff != 0) {
            p.c_.assign(e + 1, Int(0));
            p.c_[e] = std::move(coeff);
        }
        return p;
    }

    bool is_zero() const { return c_.empty(); }
    // degree of the zero polynomial is -1 by convention
    long long degree() const { return static_cast<long long>(c_.size()) - 1; }
    const std::vector<Int>& coeffs() const { return c_; }
    Int coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Int(0); }
    const Int& leading() const { return c_.back(); }

    bool operator==(const IntPoly& o) const { return c_ == o.c_; }
    bool operator!=(const IntPoly& o) const { return !(*this == o); }

    IntPoly operator-() const {
        IntPoly r(*this);
        for (auto& x : r.c_) x = -x;
        return r;
    }

    IntPoly operator+(const IntPoly& o) const {
        IntPoly r;
        r.c_.resize(std::max(c_.size(), o.c_.size()), Int(0));
        for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i];
        for (std::size_t i = 0; i < o.c_.size(); ++i) r.c_[i] += o.c_[i];
        r.trim();
        return r;
    }
    IntPoly operator-(const IntPoly& o) const { return *this + (-o); }
    IntPoly& operator+=(const IntPoly& o) { return *this = *this + o; }

    IntPoly operator*(const IntPoly& o) const {
        if (is_zero() || o.is_zero()) return {};
        IntPoly r;
        r.c_.assign(c_.size() + o.c_.size() - 1, Int(0));
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            for (std::size_t j = 0; j < o.c_.size(); ++j) r.c_[i + j] += c_[i] * o.c_[j];
        }
        r.trim();
        return r;
    }

    IntPoly scaled(const Int& k) const {
        if (k == 0) return {};
        IntPoly r(*this);
        for (auto& x : r.c_) x *= k;
        return r;
    }

    // multiply by q^e
    IntPoly shifted(std::size_t e) const {
        if (is_zero() || e == 0) return *this;
        IntPoly r;
        r.c_.assign(c_.size() + e, Int(0));
        for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i + e] = c_[i];
        return r;
    }

    IntPoly pow(unsigned e) const {
        IntPoly r = constant(1);
        IntPoly b = *this;
        while (e) {
            if (e & 1u) r = r * b;
            b = b * b;
            e >>= 1u;
        }
        return r;
    }

    // gcd of coefficients, nonnegative; 0 for the zero polynomial
    Int content() const {
        Int g = 0;
        for (const auto& x : c_) {
            g = int_gcd(g, x);
            if (g == 1) break;
        }
        return g;
    }

    // divide out the content and force a positive leading coefficient
    IntPoly primitive() const {
        if (is_zero()) return {};
        Int g = content();
        if (leading() < 0) g = -g;
        return div_int(g);
    }

    IntPoly div_int(const Int& k) const {
        IntPoly r(*this);
        for (auto& x : r.c_) {
            Int quo = x / k;
            if (quo * k != x) throw error("non-exact integer division of polynomial content");
            x = quo;
        }
        r.trim();
        return r;
    }

    // exact polynomial division; throws if the remainder is nonzero
    IntPoly div_exact(const IntPoly& d) const {
        if (d.is_zero()) throw division_by_zero();
        if (is_zero()) return {};
        if (degree() < d.degree()) throw error("non-exact polynomial division");
        std::vector<Int> rem = c_;
        std::vector<Int> quo(c_.size() - d.c_.size() + 1, Int(0));
        const Int& lead = d.leading();
        for (long long i = static_cast<long long>(rem.size()) - 1;
             i >= static_cast<long long>(d.c_.size()) - 1; --i) {
            if (rem[static_cast<std::size_t>(i)] == 0) continue;
            Int f = rem[static_cast<std::size_t>(i)] / lead;
            if (f * lead != rem[static_cast<std::size_t>(i)])
                throw error("non-exact polynomial division");
            std::size_t off = static_cast<std::size_t>(i) - (d.c_.size() - 1);
            quo[off] = f;
            for (std::size_t j = 0; j < d.c_.size(); ++j) rem[off + j] -= f * d.c_[j];
        }
        for (const auto& x : rem)
            if (x != 0) throw error("non-exact polynomial division");
        IntPoly q(std::move(quo));
        return q;
    }

    // primitive polynomial gcd (positive leading coefficient); gcd(0,0) = 0
    static IntPoly gcd(IntPoly a, IntPoly b) {
        if (a.is_zero()) return b.primitive();
        if (b.is_zero()) return a.primitive();
        a = a.primitive();
        b = b.primitive();
        if (a.degree() < b.degree()) std::swap(a, b);
        while (!b.is_zero()) {
            IntPoly r = pseudo_rem(a, b).primitive();
            a = std::move(b);
            b = std::move(r);
        }
        return a.primitive();
    }

    std::string to_string(const std::string& var = "q") const {
        if (is_zero()) return "0";
        std::string s;
        for (long long i = degree(); i >= 0; --i) {
            const Int& x = c_[static_cast<std::size_t>(i)];
            if (x == 0) continue;
            if (!s.empty()) s += (x > 0) ? " + " : " - ";
            else if (x < 0) s += "-";
            Int a = boost::multiprecision::abs(x);
            bool show_coeff = (a != 1) || (i == 0);
            if (show_coeff) s += a.str();
            if (i > 0) {
                if (show_coeff) s += "*";
                s += var;
                if (i > 1) s += "^" + std::to_string(i);
            }
        }
        return s;
    }

  private:
    // prem(a, b): remainder of lc(b)^(deg a - deg b + 1) * a under division by b
    static IntPoly pseudo_rem(IntPoly a, const IntPoly& b) {
        long long d = a.degree() - b.degree() + 1;
        while (!a.is_zero() && a.degree() >= b.degree()) {
            std::size_t off = static_cast<std::size_t>(a.degree() - b.degree());
            IntPoly t = b.shifted(off).scaled(a.leading());
            a = a.scaled(b.leading()) - t;
            --d;
        }
        if (d > 0) a = a.scaled(b.leading().is_zero() ? Int(0) : pow_int(b.leading(), d));
        return a;
    }

    static Int pow_int(Int base, long long e) {
        Int r = 1;
        while (e-- > 0) r *= base;
        return r;
    }

    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    std::vector<Int> c_;
};

} // namespace qmx
