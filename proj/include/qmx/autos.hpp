#pragma once

// Unipotent automorphisms of a (completed, truncated) quantum torus:
// phi(Y_i) = (1 + u_i) Y_i with u_i of positive degree. Everything phi does
// is expressed through the u_i: negative powers go through the geometric
// series, monomials through ordered products of conjugated unit factors.
// The consistency invariant -- the images must satisfy the defining torus
// relations up to the cutoff -- is checked at construction.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qmx/errors.hpp"
#include "qmx/qmatrix.hpp"
#include "qmx/qtorus.hpp"
#include "qmx/series.hpp"

namespace qmx {

namespace detail {

// kappa with Y^p Y^w = q^kappa Y^w Y^p
inline long long commutation_pairing(const ExponentMatrix& a, const ExpVec& p, const ExpVec& w) {
    long long k = 0;
    for (std::size_t s = 0; s < p.size(); ++s) {
        if (!p[s]) continue;
        for (std::size_t t = 0; t < w.size(); ++t)
            if (w[t]) k += p[s] * a.rows()[s][t] * w[t];
    }
    return k;
}

// Y^p s Y^-p: a degree-preserving rescaling of every monomial
inline TruncatedSeries conjugate_by(const TruncatedSeries& s, const ExpVec& p) {
    TruncatedSeries out = TruncatedSeries::zero(s.matrix(), s.degree_vector(), s.cutoff());
    for (const auto& [deg, comp] : s.components()) {
        TorusElement e = TorusElement::zero(s.matrix());
        for (const auto& [m, c] : comp.terms())
            e += TorusElement::monomial(s.matrix(),  m,
                                        c * Scalar::q_power(commutation_pairing(*s.matrix(), p, m)));
        out += TruncatedSeries::from_element(s.matrix(), s.degree_vector(), s.cutoff(), e);
    }
    return out;
}

} // namespace detail

struct UnipotentAut {
    std::vector<TruncatedSeries> u; // phi(Y_i) = (1 + u_i) Y_i

    const ExpMatPtr& matrix() const { return u.front().matrix(); }
    const std::vector<long long>& degree_vector() const { return u.front().degree_vector(); }
    long long cutoff() const { return u.front().cutoff(); }

    bool operator==(const UnipotentAut& o) const { return u == o.u; }
    bool operator!=(const UnipotentAut& o) const { return !(*this == o); }
};

inline bool is_identity(const UnipotentAut& phi) {
    for (const auto& ui : phi.u)
        if (!ui.is_zero()) return false;
    return true;
}

inline UnipotentAut make_unipotent(std::vector<TruncatedSeries> u, bool check = true) {
    if (u.empty()) throw error("unipotent automorphism needs at least one generator image");
    const ExpMatPtr& a = u.front().matrix();
    if (u.size() != a->size())
        throw error("unipotent automorphism needs one series per generator");
    for (const auto& ui : u) {
        if (!same_matrix(ui.matrix(), a)) throw matrix_mismatch();
        if (ui.cutoff() != u.front().cutoff() || ui.degree_vector() != u.front().degree_vector())
            throw cutoff_mismatch();
        if (!ui.is_zero() && ui.min_degree() < 1)
            throw not_positively_graded("unipotent shift must have positive degree");
    }
    UnipotentAut phi{std::move(u)};
    if (check) {
        // (1+u_i) Y_i (1+u_j) Y_j = q^(A_ij) (1+u_j) Y_j (1+u_i) Y_i reduces,
        // after pulling the Y's to the right, to an identity between the u's
        const auto& d = phi.degree_vector();
        const long long cut = phi.cutoff();
        TruncatedSeries one = TruncatedSeries::unit(a, d, cut);
        const int n = static_cast<int>(a->size());
        for (int i = 1; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j) {
                ExpVec ei(a->size(), 0), ej(a->size(), 0);
                ei[static_cast<std::size_t>(i - 1)] = 1;
                ej[static_cast<std::size_t>(j - 1)] = 1;
                TruncatedSeries lhs = (one + phi.u[static_cast<std::size_t>(i - 1)]) *
                                      detail::conjugate_by(one + phi.u[static_cast<std::size_t>(j - 1)], ei);
                TruncatedSeries rhs = (one + phi.u[static_cast<std::size_t>(j - 1)]) *
                                      detail::conjugate_by(one + phi.u[static_cast<std::size_t>(i - 1)], ej);
                if (lhs != rhs)
                    throw consistency_violation("images of generators " + std::to_string(i) +
                                                " and " + std::to_string(j) +
                                                " violate the torus relation");
            }
    }
    return phi;
}

inline UnipotentAut identity_aut(ExpMatPtr a, std::vector<long long> d, long long cutoff) {
    std::vector<TruncatedSeries> u(a->size(), TruncatedSeries::zero(a, d, cutoff));
    return UnipotentAut{std::move(u)};
}

// image of a truncated series: each monomial Y^m goes to W Y^m where W is the
// ordered product of the unit factors (1+u_i)^(+-1), each conjugated past the
// monomial prefix already emitted
inline TruncatedSeries apply_unipotent(const UnipotentAut& phi, const TruncatedSeries& e) {
    const ExpMatPtr& a = phi.matrix();
    if (!same_matrix(a, e.matrix())) throw matrix_mismatch();
    if (phi.cutoff() != e.cutoff() || phi.degree_vector() != e.degree_vector())
        throw cutoff_mismatch();
    const auto& d = phi.degree_vector();
    const long long cut = phi.cutoff();
    TruncatedSeries one = TruncatedSeries::unit(a, d, cut);
    TruncatedSeries out = TruncatedSeries::zero(a, d, cut);
    for (const auto& [deg, comp] : e.components())
        for (const auto& [m, c] : comp.terms()) {
            TruncatedSeries w = one;
            ExpVec prefix(a->size(), 0);
            for (std::size_t t = 0; t < m.size(); ++t) {
                if (!m[t]) continue;
                const TruncatedSeries& ut = phi.u[t];
                if (m[t] > 0) {
                    TruncatedSeries base = one + ut;
                    for (long long s = 0; s < m[t]; ++s) {
                        w = w * detail::conjugate_by(base, prefix);
                        ++prefix[t];
                    }
                } else {
                    TruncatedSeries base = one + invert_one_plus(ut);
                    for (long long s = 0; s < -m[t]; ++s) {
                        --prefix[t];
                        w = w * detail::conjugate_by(base, prefix);
                    }
                }
            }
            out += w.times_monomial(m, c);
        }
    return out;
}

// (f after g)(Y_i) = f((1+u^g_i) Y_i) = [f(1+u^g_i) (1+u^f_i)] Y_i
inline UnipotentAut compose(const UnipotentAut& f, const UnipotentAut& g) {
    if (!same_matrix(f.matrix(), g.matrix())) throw matrix_mismatch();
    if (f.cutoff() != g.cutoff() || f.degree_vector() != g.degree_vector())
        throw cutoff_mismatch();
    TruncatedSeries one = TruncatedSeries::unit(f.matrix(), f.degree_vector(), f.cutoff());
    std::vector<TruncatedSeries> u;
    u.reserve(f.u.size());
    for (std::size_t i = 0; i < f.u.size(); ++i)
        u.push_back(apply_unipotent(f, one + g.u[i]) * (one + f.u[i]) - one);
    return make_unipotent(std::move(u));
}

// order-by-order: the degree-r defect of f(1+v_i)(1+u_i) = 1 fixes v_i at r
inline UnipotentAut inverse(const UnipotentAut& f) {
    TruncatedSeries one = TruncatedSeries::unit(f.matrix(), f.degree_vector(), f.cutoff());
    std::vector<TruncatedSeries> v;
    v.reserve(f.u.size());
    for (std::size_t i = 0; i < f.u.size(); ++i) {
        TruncatedSeries vi = TruncatedSeries::zero(f.matrix(), f.degree_vector(), f.cutoff());
        for (long long r = 1; r <= f.cutoff(); ++r) {
            TruncatedSeries defect = apply_unipotent(f, one + vi) * (one + f.u[i]) - one;
            vi -= TruncatedSeries::from_element(f.matrix(), f.degree_vector(), f.cutoff(),
                                                defect.component(r));
        }
        v.push_back(std::move(vi));
    }
    return make_unipotent(std::move(v));
}

// true iff every exponent vector occurring in the u_i lies in ker A
inline bool central_unit_check(const UnipotentAut& phi) {
    for (const auto& ui : phi.u)
        for (const auto& [deg, comp] : ui.components())
            for (const auto& [m, c] : comp.terms())
                if (!is_central_exponent(*phi.matrix(), m)) return false;
    return true;
}

// can 1 + u have an inverse 1 + v with v a FINITE central element? Only for
// u = 0: otherwise the top homogeneous parts multiply to a nonzero element of
// degree top(u) + top(v) >= 1, while the right hand side sits in degree 0.
// The nonvanishing of the top product is exhibited on the forced candidate,
// the inverse series truncated at twice the top degree of u.
inline bool polynomial_inverse_obstruction(const TorusElement& u, const std::vector<long long>& d) {
    if (u.is_zero()) return true;
    long long top = 0;
    for (const auto& [m, c] : u.terms()) {
        long long deg = torus_degree(d, m);
        if (deg < 1)
            throw not_positively_graded("unit shift has a component of degree " +
                                        std::to_string(deg));
        if (!is_central_exponent(*u.matrix(), m))
            throw not_central("unit shift has a noncentral monomial");
        if (deg > top) top = deg;
    }
    TruncatedSeries su = TruncatedSeries::from_element(u.matrix(), d, 2 * top, u);
    TruncatedSeries w = invert_one_plus(su);
    TorusElement cert = w.components().rbegin()->second * graded_component(u, d, top);
    if (cert.is_zero())
        throw consistency_violation("top product of the unit shift and its forced inverse vanished");
    return false;
}

// the degree vector attached to the distinguished minors, d_i = minor size;
// it must agree with the all-ones generator grading along each successor
// chain, since the i-th minor is the chain product of the torus generators
inline std::vector<long long> delta_degree_vector(const MatrixIndexing& ix) {
    std::vector<long long> d;
    d.reserve(static_cast<std::size_t>(ix.N));
    for (int i = 1; i <= ix.N; ++i) {
        if (static_cast<long long>(ix.chain(i).size()) != ix.d(i))
            throw consistency_violation("minor size disagrees with the successor chain length at " +
                                        std::to_string(i));
        d.push_back(ix.d(i));
    }
    return d;
}

// the quantum torus on the distinguished minors
inline ExpMatPtr minor_torus(const PresPtr& p, const MatrixIndexing& ix) {
    return std::make_shared<const ExponentMatrix>(minor_commutation_exponents(p, ix));
}

// given the prescribed image (1+u) Y^m of a torus generator, recover u; the
// result is exact in degrees up to cutoff - deg(Y^m)
inline TruncatedSeries unit_cofactor(const TruncatedSeries& image, const ExpVec& m) {
    TorusElement inv = TorusElement::monomial(image.matrix(), m, Scalar::one()).monomial_inverse();
    TruncatedSeries s = TruncatedSeries::zero(image.matrix(), image.degree_vector(), image.cutoff());
    for (const auto& [deg, comp] : image.components())
        s += TruncatedSeries::from_element(image.matrix(), image.degree_vector(), image.cutoff(),
                                           comp * inv);
    return s - TruncatedSeries::unit(image.matrix(), image.degree_vector(), image.cutoff());
}

} // namespace qmx
