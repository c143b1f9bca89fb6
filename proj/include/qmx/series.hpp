#pragma once

// Truncated elements of the graded completion of a quantum torus: finitely
// many homogeneous components, everything of degree above the cutoff
// quotiented away. Under that quotient a geometric series against a
// positive-degree element is a finite sum, which is what makes the unipotent
// automorphism calculus effective.

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qmx/errors.hpp"
#include "qmx/qtorus.hpp"
#include "qmx/scalar.hpp"

namespace qmx {

class TruncatedSeries {
  public:
    TruncatedSeries(ExpMatPtr a, std::vector<long long> d, long long cutoff)
        : a_(std::move(a)), d_(std::move(d)), cutoff_(cutoff) {
        if (!a_) throw matrix_mismatch("series needs an exponent matrix");
        if (d_.size() != a_->size()) throw matrix_mismatch("degree vector of wrong length");
        for (long long x : d_)
            if (x <= 0) throw not_positively_graded("degree vector entries must be positive");
    }

    static TruncatedSeries zero(ExpMatPtr a, std::vector<long long> d, long long cutoff) {
        return TruncatedSeries(std::move(a), std::move(d), cutoff);
    }
    static TruncatedSeries unit(ExpMatPtr a, std::vector<long long> d, long long cutoff) {
        TruncatedSeries s(std::move(a), std::move(d), cutoff);
        s.add(TorusElement::unit(s.a_));
        return s;
    }
    // sort e's terms into homogeneous components, dropping what the cutoff kills
    static TruncatedSeries from_element(ExpMatPtr a, std::vector<long long> d, long long cutoff,
                                        const TorusElement& e) {
        TruncatedSeries s(std::move(a), std::move(d), cutoff);
        if (!same_matrix(s.a_, e.matrix())) throw matrix_mismatch();
        s.add(e);
        return s;
    }

    long long cutoff() const { return cutoff_; }
    const std::vector<long long>& degree_vector() const { return d_; }
    const ExpMatPtr& matrix() const { return a_; }
    const std::map<long long, TorusElement>& components() const { return comp_; }
    bool is_zero() const { return comp_.empty(); }

    TorusElement component(long long r) const {
        auto it = comp_.find(r);
        return it == comp_.end() ? TorusElement::zero(a_) : it->second;
    }
    long long min_degree() const {
        if (comp_.empty()) throw zero_element("minimal degree of the zero series");
        return comp_.begin()->first;
    }

    bool operator==(const TruncatedSeries& o) const {
        return cutoff_ == o.cutoff_ && d_ == o.d_ && same_matrix(a_, o.a_) && comp_ == o.comp_;
    }
    bool operator!=(const TruncatedSeries& o) const { return !(*this == o); }

    TruncatedSeries operator-() const {
        TruncatedSeries r(*this);
        for (auto& [deg, e] : r.comp_) e = -e;
        return r;
    }
    TruncatedSeries operator+(const TruncatedSeries& o) const {
        require_same(o);
        TruncatedSeries r(*this);
        for (const auto& [deg, e] : o.comp_) r.add_component(deg, e);
        return r;
    }
    TruncatedSeries operator-(const TruncatedSeries& o) const { return *this + (-o); }
    TruncatedSeries& operator+=(const TruncatedSeries& o) { return *this = *this + o; }
    TruncatedSeries& operator-=(const TruncatedSeries& o) { return *this = *this - o; }

    TruncatedSeries operator*(const Scalar& s) const {
        TruncatedSeries r = zero(a_, d_, cutoff_);
        if (s.is_zero()) return r;
        for (const auto& [deg, e] : comp_) r.comp_.emplace(deg, e * s);
        return r;
    }

    TruncatedSeries operator*(const TruncatedSeries& o) const {
        require_same(o);
        TruncatedSeries r = zero(a_, d_, cutoff_);
        for (const auto& [da, ea] : comp_) {
            if (da + o.min_degree_or(cutoff_ + 1) > cutoff_) continue;
            for (const auto& [db, eb] : o.comp_) {
                if (da + db > cutoff_) break;
                r.add_component(da + db, ea * eb);
            }
        }
        return r;
    }

    // right multiplication by the monomial c Y^m; components shift by deg(m)
    TruncatedSeries times_monomial(const ExpVec& m, const Scalar& c) const {
        TruncatedSeries r = zero(a_, d_, cutoff_);
        if (c.is_zero()) return r;
        TorusElement mono = TorusElement::monomial(a_, m, c);
        long long shift = torus_degree(d_, mono.terms().begin()->first);
        for (const auto& [deg, e] : comp_)
            if (deg + shift <= cutoff_) r.add_component(deg + shift, e * mono);
        return r;
    }

    std::string to_string() const {
        if (comp_.empty()) return "0";
        std::string s;
        for (const auto& [deg, e] : comp_) {
            if (!s.empty()) s += " + ";
            s += "[" + std::to_string(deg) + "] " + e.to_string();
        }
        return s;
    }

  private:
    void require_same(const TruncatedSeries& o) const {
        if (!same_matrix(a_, o.a_)) throw matrix_mismatch();
        if (cutoff_ != o.cutoff_ || d_ != o.d_) throw cutoff_mismatch();
    }
    long long min_degree_or(long long fallback) const {
        return comp_.empty() ? fallback : comp_.begin()->first;
    }
    void add_component(long long deg, const TorusElement& e) {
        if (deg > cutoff_ || e.is_zero()) return;
        auto it = comp_.find(deg);
        if (it == comp_.end()) {
            comp_.emplace(deg, e);
            return;
        }
        it->second += e;
        if (it->second.is_zero()) comp_.erase(it);
    }
    void add(const TorusElement& e) {
        for (const auto& [m, c] : e.terms())
            add_component(torus_degree(d_, m), TorusElement::monomial(a_, m, c));
    }

    ExpMatPtr a_;
    std::vector<long long> d_;
    long long cutoff_;
    std::map<long long, TorusElement> comp_;
};

inline TruncatedSeries operator*(const Scalar& s, const TruncatedSeries& e) { return e * s; }

// v with (1+v)(1+u) = (1+u)(1+v) = 1 in the quotient: v = sum of (-u)^k
inline TruncatedSeries invert_one_plus(const TruncatedSeries& u) {
    if (!u.is_zero() && u.min_degree() < 1)
        throw not_positively_graded("inverting 1+u needs u of positive degree");
    TruncatedSeries v = TruncatedSeries::zero(u.matrix(), u.degree_vector(), u.cutoff());
    TruncatedSeries pw = TruncatedSeries::unit(u.matrix(), u.degree_vector(), u.cutoff());
    for (long long k = 1; k <= u.cutoff(); ++k) {
        pw = pw * u;
        if (pw.is_zero()) break;
        v += (k % 2 ? -pw : pw);
    }
    return v;
}

} // namespace qmx
