#pragma once

// The order-by-order rigidity solver. A candidate endomorphism moves each
// generator by unknown higher-degree terms, Phi(X_g) = X_g + sum of c_{g,m} m
// over normal monomials m of degrees 2..D. The defining relations (and,
// optionally, fixing the border minors) are imposed one degree at a time:
// given the lower-degree solution, the current block of coefficients enters
// the residual linearly, so each stage is an affine system over Q(q). Free
// coefficients become named parameters; anything a later degree couples
// nonlinearly is carried as a polynomial in those parameters and reported,
// never dropped.

#include <algorithm>
#include <functional>
#include <iterator>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qmx/errors.hpp"
#include "qmx/pbw.hpp"
#include "qmx/qmatrix.hpp"

namespace qmx {

// a monomial in the named parameters: sorted ids with multiplicity
using ParamMono = std::vector<int>;
// a polynomial in the named parameters
using PolyExpr = std::map<ParamMono, Scalar>;

namespace detail {

template <typename Poly>
inline void pe_add(Poly& p, const ParamMono& m, const typename Poly::mapped_type& c) {
    if (c.is_zero()) return;
    auto it = p.find(m);
    if (it == p.end()) {
        p.emplace(m, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) p.erase(it);
}

inline void pe_axpy(PolyExpr& p, const PolyExpr& src, const Scalar& f) {
    if (f.is_zero()) return;
    for (const auto& [m, c] : src) pe_add(p, m, c * f);
}

inline ParamMono pm_merge(const ParamMono& a, const ParamMono& b) {
    ParamMono out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

template <typename Poly>
inline Poly pe_mul(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) pe_add(out, pm_merge(ma, mb), ca * cb);
    return out;
}

// graded reverse-lexicographic order on the sorted id multisets, with the
// smaller parameter id the more significant variable: compare total degree,
// then scan from the back, where a larger id at the first difference marks
// the smaller monomial
struct PmOrder {
    bool operator()(const ParamMono& a, const ParamMono& b) const noexcept {
        if (a.size() != b.size()) return a.size() < b.size();
        for (std::size_t k = a.size(); k-- > 0;)
            if (a[k] != b[k]) return a[k] > b[k];
        return false;
    }
};

// a parameter polynomial kept in term order, so the leading term is rbegin().
// Coefficients are fraction-free: integer polynomials in q, with the whole
// element held primitive (coefficient gcd one, positive leading coefficient),
// so the expensive gcds run once per polynomial instead of once per operation
using GbPoly = std::map<ParamMono, IntPoly, PmOrder>;

inline bool pm_divides(const ParamMono& d, const ParamMono& m) {
    std::size_t j = 0;
    for (int x : d) {
        while (j < m.size() && m[j] < x) ++j;
        if (j == m.size() || m[j] != x) return false;
        ++j;
    }
    return true;
}

inline ParamMono pm_div(const ParamMono& m, const ParamMono& d) {
    ParamMono out;
    std::set_difference(m.begin(), m.end(), d.begin(), d.end(), std::back_inserter(out));
    return out;
}

inline ParamMono pm_lcm(const ParamMono& a, const ParamMono& b) {
    return pm_merge(a, pm_div(b, a));
}

// divide out the common coefficient factor (integer content times primitive
// polynomial gcd) and fix the sign of the lead
inline void gb_reduce_content(GbPoly& f) {
    if (f.empty()) return;
    IntPoly g;
    Int ic = 0;
    for (const auto& [m, c] : f) {
        if (!(g.degree() == 0 && g.leading() == 1)) g = IntPoly::gcd(g, c);
        if (ic != 1) ic = int_gcd(ic, c.content());
    }
    g = g.scaled(ic);
    if (f.rbegin()->second.leading() < 0) g = -g;
    if (!(g.degree() == 0 && g.leading() == 1))
        for (auto& [m, c] : f) c = c.div_exact(g);
}

// clear denominators: lift a rational-coefficient constraint to a primitive
// integer one spanning the same hypersurface
inline GbPoly gb_from(const PolyExpr& pe) {
    IntPoly den = IntPoly::constant(1);
    for (const auto& [m, c] : pe) den = (den * c.den()).div_exact(IntPoly::gcd(den, c.den()));
    GbPoly out;
    for (const auto& [m, c] : pe) out.emplace(m, c.num() * den.div_exact(c.den()));
    gb_reduce_content(out);
    return out;
}

// full normal form against the basis: cancel the leading term while some
// basis lead divides it, otherwise retire it to the (fully reduced) remainder.
// Fraction-free: the running polynomial scales by the reducer's leading
// coefficient instead of dividing, and sheds accumulated content at the end
inline GbPoly gb_nf(GbPoly f, const std::vector<GbPoly>& basis, long long& fuel) {
    GbPoly rem;
    while (!f.empty()) {
        if (--fuel < 0)
            throw degree_budget_exceeded("parameter constraint resolution ran out of budget");
        const GbPoly* red = nullptr;
        for (const auto& g : basis)
            if (!g.empty() && pm_divides(g.rbegin()->first, f.rbegin()->first)) {
                red = &g;
                break;
            }
        if (!red) {
            auto last = std::prev(f.end());
            rem.emplace(last->first, std::move(last->second));
            f.erase(last);
            continue;
        }
        const ParamMono t = pm_div(f.rbegin()->first, red->rbegin()->first);
        const IntPoly& a = f.rbegin()->second;
        const IntPoly& b = red->rbegin()->second;
        const IntPoly d = IntPoly::gcd(a, b);
        const IntPoly ca = a.div_exact(d);
        const IntPoly cb = b.div_exact(d);
        if (!(cb.degree() == 0 && cb.leading() == 1)) {
            for (auto& [m, c] : f) c = c * cb;
            for (auto& [m, c] : rem) c = c * cb;
        }
        for (const auto& [m, c] : *red) pe_add(f, pm_merge(m, t), -(c * ca));
    }
    gb_reduce_content(rem);
    return rem;
}

inline GbPoly gb_spoly(const GbPoly& f, const GbPoly& g) {
    const ParamMono l = pm_lcm(f.rbegin()->first, g.rbegin()->first);
    const ParamMono tf = pm_div(l, f.rbegin()->first), tg = pm_div(l, g.rbegin()->first);
    const IntPoly d = IntPoly::gcd(f.rbegin()->second, g.rbegin()->second);
    const IntPoly cf = g.rbegin()->second.div_exact(d);
    const IntPoly cg = f.rbegin()->second.div_exact(d);
    GbPoly s;
    for (const auto& [m, c] : f) pe_add(s, pm_merge(m, tf), c * cf);
    for (const auto& [m, c] : g) pe_add(s, pm_merge(m, tg), -(c * cg));
    gb_reduce_content(s);
    return s;
}

inline std::string gb_key(const GbPoly& f) {
    std::string k;
    for (const auto& [m, c] : f) {
        for (int id : m) k += std::to_string(id) + ",";
        k += ":" + c.to_string() + ";";
    }
    return k;
}

// Buchberger with the normal selection strategy: critical pairs queue by
// their lcm and the smallest resolves first. Generators are interreduced on
// the way in and the returned basis is fully reduced, hence canonical for
// the ideal whatever order the constraints arrived in. An optional watcher
// runs whenever the basis grows; returning true stops the run early and
// hands back the (still valid, merely incomplete) basis.
inline std::vector<GbPoly> groebner(std::vector<GbPoly> basis, long long& fuel,
                                    const std::function<bool(const std::vector<GbPoly>&)>& watcher = {}) {
    {
        std::set<std::string> seen;
        std::vector<GbPoly> uniq;
        for (auto& g : basis) {
            if (g.empty()) continue;
            gb_reduce_content(g);
            if (seen.insert(gb_key(g)).second) uniq.push_back(std::move(g));
        }
        basis = std::move(uniq);
    }
    for (bool again = true; again;) {
        again = false;
        for (std::size_t i = 0; i < basis.size(); ++i) {
            GbPoly g = std::move(basis[i]);
            basis[i].clear();
            const std::string before = gb_key(g);
            GbPoly r = gb_nf(std::move(g), basis, fuel);
            if (r.empty()) {
                basis.erase(basis.begin() + static_cast<std::ptrdiff_t>(i--));
                again = true;
                continue;
            }
            if (gb_key(r) != before) again = true;
            basis[i] = std::move(r);
        }
    }
    if (watcher && watcher(basis)) return basis;

    // (lcm degree, lcm, i, j): set order gives the selection strategy
    std::set<std::tuple<std::size_t, ParamMono, std::size_t, std::size_t>> pairs;
    auto queue_pair = [&](std::size_t i, std::size_t j) {
        const ParamMono& mi = basis[i].rbegin()->first;
        const ParamMono& mj = basis[j].rbegin()->first;
        ParamMono l = pm_lcm(mi, mj);
        // coprime leading monomials reduce to zero (Buchberger's criterion)
        if (l.size() == mi.size() + mj.size()) return;
        pairs.emplace(l.size(), std::move(l), i, j);
    };
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i + 1; j < basis.size(); ++j) queue_pair(i, j);
    while (!pairs.empty()) {
        const auto [deg, l, i, j] = *pairs.begin();
        pairs.erase(pairs.begin());
        GbPoly r = gb_nf(gb_spoly(basis[i], basis[j]), basis, fuel);
        if (r.empty()) continue;
        if (basis.size() >= 2000)
            throw degree_budget_exceeded("parameter constraint resolution ran out of budget");
        basis.push_back(std::move(r));
        for (std::size_t k = 0; k + 1 < basis.size(); ++k) queue_pair(k, basis.size() - 1);
        if (watcher && watcher(basis)) return basis;
    }

    // strip members whose lead another member covers, then reduce the tails
    std::vector<bool> covered(basis.size(), false);
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = 0; j < basis.size() && !covered[i]; ++j)
            covered[i] = i != j && !covered[j] &&
                         pm_divides(basis[j].rbegin()->first, basis[i].rbegin()->first) &&
                         !(j > i && basis[j].rbegin()->first == basis[i].rbegin()->first);
    std::vector<GbPoly> kept;
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (!covered[i]) kept.push_back(std::move(basis[i]));
    for (std::size_t i = 0; i < kept.size(); ++i) {
        GbPoly g = std::move(kept[i]);
        kept[i].clear();
        kept[i] = gb_nf(std::move(g), kept, fuel);
    }
    std::sort(kept.begin(), kept.end(), [](const GbPoly& a, const GbPoly& b) {
        return PmOrder()(a.rbegin()->first, b.rbegin()->first);
    });
    return kept;
}

// cheap half of radical membership: does some power of the parameter reduce
// to zero? Repeated squaring reaches exponent 64 in six normal forms, and a
// zero against any set of ideal members is a certificate, complete or not
inline bool param_power_vanishes(int id, const std::vector<GbPoly>& gb, long long& fuel) {
    GbPoly pw{{ParamMono{id}, IntPoly::constant(1)}};
    for (int round = 0; round <= 6; ++round) {
        pw = gb_nf(std::move(pw), gb, fuel);
        if (pw.empty()) return true;
        if (pw.size() > 512) break; // the quotient is too roomy, stop squaring
        pw = pe_mul(pw, pw);
        gb_reduce_content(pw);
    }
    return false;
}

// exact half: p vanishes on the whole variety iff adjoining y with 1 - y*p
// collapses the ideal to the unit ideal (Rabinowitsch), decided by a basis
// that is reduced, so the unit ideal shows up as exactly {1}
inline bool param_vanishes_on_variety(int id, const std::vector<GbPoly>& gb, long long& fuel) {
    constexpr int RAD_VAR = 1 << 23; // sorts after every real parameter id
    std::vector<GbPoly> ext = gb;
    GbPoly sat{{ParamMono{}, IntPoly::constant(1)}};
    sat.emplace(ParamMono{id, RAD_VAR}, IntPoly::constant(-1));
    ext.push_back(std::move(sat));
    auto g2 = groebner(std::move(ext), fuel);
    return g2.size() == 1 && g2.front().size() == 1 && g2.front().begin()->first.empty();
}

// symbolic algebra element, organized degree -> param monomial -> PBW part
using SymParts = std::map<long long, std::map<ParamMono, PBWElement>>;

inline void sym_add(SymParts& s, long long deg, const ParamMono& pm, const PBWElement& e) {
    if (e.is_zero()) return;
    auto& slot = s[deg];
    auto it = slot.find(pm);
    if (it == slot.end()) {
        slot.emplace(pm, e);
        return;
    }
    it->second += e;
    if (it->second.is_zero()) {
        slot.erase(it);
        if (slot.empty()) s.erase(deg);
    }
}

// degree-(target) part of the product of the letters' images; every image
// has minimal degree 1, which prunes the fold
inline std::map<ParamMono, PBWElement> word_image_component(const std::vector<SymParts>& images,
                                                            const Word& w, long long target,
                                                            const PresPtr& p) {
    SymParts acc;
    sym_add(acc, 0, {}, PBWElement::one(p));
    long long done = 0;
    for (int g : w) {
        ++done;
        const long long remaining = static_cast<long long>(w.size()) - done;
        SymParts next;
        const SymParts& factor = images[static_cast<std::size_t>(g - 1)];
        for (const auto& [da, amap] : acc)
            for (const auto& [db, bmap] : factor) {
                if (da + db + remaining > target) break;
                for (const auto& [pma, ea] : amap)
                    for (const auto& [pmb, eb] : bmap) sym_add(next, da + db, pm_merge(pma, pmb), ea * eb);
            }
        acc = std::move(next);
    }
    auto it = acc.find(target);
    return it == acc.end() ? std::map<ParamMono, PBWElement>{} : std::move(it->second);
}

// degree-(target) part of Phi(e) for a plain element e
inline std::map<ParamMono, PBWElement> endo_image_component(const std::vector<SymParts>& images,
                                                            const PBWElement& e, long long target,
                                                            const PresPtr& p) {
    std::map<ParamMono, PBWElement> out;
    for (const auto& [w, c] : e.terms()) {
        if (static_cast<long long>(w.size()) > target) continue;
        for (auto& [pm, el] : word_image_component(images, w, target, p)) {
            auto it = out.find(pm);
            if (it == out.end())
                out.emplace(pm, el * c);
            else
                it->second += el * c;
        }
    }
    for (auto it = out.begin(); it != out.end();)
        it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
}

// degree-(target) part of the (j,i) relation residual under Phi
inline std::map<ParamMono, PBWElement> relation_component(const std::vector<SymParts>& images,
                                                          const PresPtr& p, int j, int i,
                                                          long long target) {
    auto out = word_image_component(images, {j, i}, target, p);
    auto sub = [&](const std::map<ParamMono, PBWElement>& m, const Scalar& f) {
        for (const auto& [pm, e] : m) {
            auto it = out.find(pm);
            if (it == out.end())
                out.emplace(pm, e * (-f));
            else
                it->second -= e * f;
        }
    };
    sub(word_image_component(images, {i, j}, target, p), Scalar::q_power(p->a(j, i)));
    for (const auto& ct : p->corr(j, i))
        sub(word_image_component(images, {ct.u, ct.v}, target, p), ct.coeff);
    for (auto it = out.begin(); it != out.end();)
        it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
}

// all sorted words of the given length over [1, N]
inline void sorted_words(int N, int len, int min_letter, Word& cur, std::vector<Word>& out) {
    if (len == 0) {
        out.push_back(cur);
        return;
    }
    for (int g = min_letter; g <= N; ++g) {
        cur.push_back(g);
        sorted_words(N, len - 1, g, cur, out);
        cur.pop_back();
    }
}

// sparse row echelon over Q(q) with polynomial right-hand sides; a row whose
// linear part dies but whose right-hand side survives is a constraint on the
// parameters and is kept, never dropped
struct SpRow {
    std::map<int, Scalar> lin;
    PolyExpr rhs;
};

struct Echelon {
    std::map<int, SpRow> pivots; // leading column -> row, lead coefficient 1
    std::vector<PolyExpr> constraints;

    void insert(SpRow row) {
        while (!row.lin.empty()) {
            const int lead = row.lin.begin()->first;
            auto it = pivots.find(lead);
            if (it == pivots.end()) {
                const Scalar inv = row.lin.begin()->second.inverse();
                for (auto& [c, v] : row.lin) v *= inv;
                PolyExpr rhs;
                pe_axpy(rhs, row.rhs, inv);
                row.rhs = std::move(rhs);
                pivots.emplace(lead, std::move(row));
                return;
            }
            const Scalar f = row.lin.begin()->second;
            for (const auto& [c, v] : it->second.lin) {
                auto jt = row.lin.find(c);
                if (jt == row.lin.end()) {
                    row.lin.emplace(c, -(f * v));
                    continue;
                }
                jt->second -= f * v;
                if (jt->second.is_zero()) row.lin.erase(jt);
            }
            pe_axpy(row.rhs, it->second.rhs, -f);
        }
        if (!row.rhs.empty()) constraints.push_back(std::move(row.rhs));
    }
};

} // namespace detail

// one solved degree: the unknown block, the stage matrix's rank, and the
// echelon rows for membership queries against the homogeneous solution space
struct StageSystem {
    long long degree = 0;
    std::vector<std::pair<int, Word>> columns; // column -> (generator, monomial)
    std::map<int, std::map<int, Scalar>> rows; // leading column -> linear row

    bool annihilates(const std::map<std::pair<int, Word>, Scalar>& v) const {
        std::map<std::pair<int, Word>, int> col_of;
        for (int c = 0; c < static_cast<int>(columns.size()); ++c)
            col_of.emplace(columns[static_cast<std::size_t>(c)], c);
        std::map<int, Scalar> x;
        for (const auto& [key, s] : v) {
            auto it = col_of.find(key);
            if (it == col_of.end()) throw index_out_of_scope("coefficient outside the stage block");
            if (!s.is_zero()) x.emplace(it->second, s);
        }
        for (const auto& [lead, row] : rows) {
            Scalar dot;
            for (const auto& [c, a] : row) {
                auto it = x.find(c);
                if (it != x.end()) dot += a * it->second;
            }
            if (!dot.is_zero()) return false;
        }
        return true;
    }
};

struct SolveReport {
    int n = 0;
    long long D = 0;
    std::vector<std::string> constraints;
    struct Stage {
        long long degree = 0;
        std::size_t unknowns = 0;
        std::size_t rank = 0;
        std::size_t solution_dim = 0;
    };
    std::vector<Stage> per_degree;
    std::size_t parameters = 0;
    // polynomials in the parameters that must vanish (couplings between
    // stages the affine sweep cannot absorb)
    std::vector<PolyExpr> parameter_constraints;
    // solved coefficients, as affine expressions in the parameters
    std::map<std::pair<int, Word>, PolyExpr> solution;
    std::vector<StageSystem> systems;
    std::string verdict; // "identity-only" | "nontrivial"
};

namespace detail {

inline void validate_constraint_names(const std::set<std::string>& want) {
    for (const auto& c : want)
        if (c != "relations" && c != "fix_special_minors")
            throw error("unknown constraint set entry: " + c);
}

} // namespace detail

inline SolveReport solve_unipotent(int n, long long D, const std::set<std::string>& want) {
    if (n < 1 || n > 3)
        throw degree_budget_exceeded("matrix size " + std::to_string(n) +
                                     " is outside the solver budget");
    if (D < 2 || D > 6)
        throw degree_budget_exceeded("truncation degree " + std::to_string(D) +
                                     " is outside the solver budget");
    detail::validate_constraint_names(want);
    const bool relations = want.count("relations") > 0;
    const bool fix_minors = want.count("fix_special_minors") > 0;

    PresPtr p = build_presentation(n);
    MatrixIndexing ix(n);
    const int N = ix.N;

    std::vector<std::pair<PBWElement, long long>> fixed; // (border minor, size)
    if (fix_minors)
        for (int m = 1; m <= 2 * n - 1; ++m) {
            const int idx = ix.f(m);
            fixed.emplace_back(special_minor(p, ix, idx), ix.d(idx));
        }

    SolveReport rep;
    rep.n = n;
    rep.D = D;
    rep.constraints.assign(want.begin(), want.end());

    int next_param = 0;
    std::vector<long long> param_birth;            // stage degree each parameter came from
    std::map<std::pair<int, Word>, int> col_param; // free column -> its parameter id
    constexpr int TEMP_BASE = 1 << 24;

    auto images_with_block = [&](long long block_degree, const StageSystem* sys) {
        std::vector<detail::SymParts> images(static_cast<std::size_t>(N));
        for (int g = 1; g <= N; ++g)
            detail::sym_add(images[static_cast<std::size_t>(g - 1)], 1, {},
                            PBWElement::generator(p, g));
        for (const auto& [key, val] : rep.solution) {
            const auto& [g, m] = key;
            for (const auto& [pm, c] : val)
                detail::sym_add(images[static_cast<std::size_t>(g - 1)],
                                static_cast<long long>(m.size()), pm,
                                PBWElement::monomial(p, m, c));
        }
        if (sys)
            for (int c = 0; c < static_cast<int>(sys->columns.size()); ++c) {
                const auto& [g, m] = sys->columns[static_cast<std::size_t>(c)];
                detail::sym_add(images[static_cast<std::size_t>(g - 1)], block_degree,
                                ParamMono{TEMP_BASE + c},
                                PBWElement::monomial(p, m, Scalar::one()));
            }
        return images;
    };

    std::vector<PolyExpr> all_constraints;

    for (long long r = 2; r <= D; ++r) {
        StageSystem sys;
        sys.degree = r;
        std::vector<Word> monos;
        Word cur;
        detail::sorted_words(N, static_cast<int>(r), 1, cur, monos);
        for (int g = 1; g <= N; ++g)
            for (const auto& m : monos) sys.columns.emplace_back(g, m);

        auto images = images_with_block(r, &sys);

        detail::Echelon ech;
        auto feed = [&](const std::map<ParamMono, PBWElement>& comp) {
            std::map<Word, detail::SpRow, DegLexLess> rows;
            for (const auto& [pm, e] : comp) {
                const bool is_temp = pm.size() == 1 && pm[0] >= TEMP_BASE;
                if (!is_temp)
                    for (int id : pm)
                        if (id >= TEMP_BASE)
                            throw consistency_violation(
                                "stage unknowns coupled nonlinearly at their own degree");
                for (const auto& [w, c] : e.terms()) {
                    if (is_temp)
                        rows[w].lin[pm[0] - TEMP_BASE] += c;
                    else
                        detail::pe_add(rows[w].rhs, pm, c);
                }
            }
            for (auto& [w, row] : rows) {
                for (auto it = row.lin.begin(); it != row.lin.end();)
                    it = it->second.is_zero() ? row.lin.erase(it) : std::next(it);
                ech.insert(std::move(row));
            }
        };

        if (relations)
            for (int j = 2; j <= N; ++j)
                for (int i = 1; i < j; ++i)
                    feed(detail::relation_component(images, p, j, i, r + 1));
        for (const auto& [minor, s] : fixed) feed(detail::endo_image_component(images, minor, r + s - 1, p));

        // free columns become parameters, pivots resolve by back-substitution
        std::map<int, PolyExpr> value;
        for (int c = 0; c < static_cast<int>(sys.columns.size()); ++c)
            if (!ech.pivots.count(c)) {
                col_param.emplace(sys.columns[static_cast<std::size_t>(c)], next_param);
                param_birth.push_back(r);
                value[c] = PolyExpr{{ParamMono{next_param++}, Scalar::one()}};
            }
        for (auto it = ech.pivots.rbegin(); it != ech.pivots.rend(); ++it) {
            PolyExpr v;
            detail::pe_axpy(v, it->second.rhs, -Scalar::one());
            for (const auto& [c, a] : it->second.lin)
                if (c != it->first) detail::pe_axpy(v, value.at(c), -a);
            value[it->first] = std::move(v);
        }
        for (int c = 0; c < static_cast<int>(sys.columns.size()); ++c)
            if (!value.at(c).empty())
                rep.solution.emplace(sys.columns[static_cast<std::size_t>(c)], value.at(c));

        rep.per_degree.push_back({r, sys.columns.size(), ech.pivots.size(),
                                  sys.columns.size() - ech.pivots.size()});
        for (auto& ce : ech.constraints) all_constraints.push_back(std::move(ce));
        for (auto& [lead, row] : ech.pivots) sys.rows.emplace(lead, std::move(row.lin));
        rep.systems.push_back(std::move(sys));
    }
    rep.parameters = static_cast<std::size_t>(next_param);

    // residual degrees no stage owns are pure polynomials in the parameters:
    // a surviving constant part would contradict the identity solution, a
    // surviving parameter part is a genuine constraint and gets reported
    auto images = images_with_block(0, nullptr);
    auto sweep = [&](std::map<ParamMono, PBWElement> comp, const PBWElement* subtract_const) {
        if (subtract_const && !subtract_const->is_zero()) {
            auto it = comp.find(ParamMono{});
            if (it == comp.end())
                comp.emplace(ParamMono{}, -*subtract_const);
            else {
                it->second -= *subtract_const;
                if (it->second.is_zero()) comp.erase(it);
            }
        }
        std::map<Word, PolyExpr, DegLexLess> by_word;
        for (const auto& [pm, e] : comp) {
            if (pm.empty())
                throw consistency_violation("identity point fails a residual it should satisfy");
            for (const auto& [w, c] : e.terms()) detail::pe_add(by_word[w], pm, c);
        }
        for (auto& [w, pe] : by_word)
            if (!pe.empty()) all_constraints.push_back(std::move(pe));
    };

    if (relations)
        for (int j = 2; j <= N; ++j)
            for (int i = 1; i < j; ++i) {
                sweep(detail::relation_component(images, p, j, i, 2), nullptr);
                for (long long t = D + 2; t <= 2 * D; ++t)
                    sweep(detail::relation_component(images, p, j, i, t), nullptr);
            }
    for (const auto& [minor, s] : fixed) {
        sweep(detail::endo_image_component(images, minor, s, p), &minor);
        for (long long t = D + s; t <= s * D; ++t)
            sweep(detail::endo_image_component(images, minor, t, p), nullptr);
    }

    // the per-stage kernels only bound the variety from above: directions that
    // fail a higher-degree or tail residual are not solutions. A parameter is
    // dead when it vanishes on the whole variety (radical membership) and
    // alive when some exact solution keeps it nonzero; cheap certificates run
    // first (pure powers, scaling witnesses, the cone criterion) and the
    // saturation ideal settles whatever they leave open.
    std::set<int> dead, alive;
    auto strip = [&dead](auto& pe) {
        for (auto it = pe.begin(); it != pe.end();) {
            bool gone = false;
            for (int id : it->first)
                if (dead.count(id)) {
                    gone = true;
                    break;
                }
            it = gone ? pe.erase(it) : std::next(it);
        }
    };
    long long fuel = 50'000'000;
    std::vector<detail::GbPoly> work;
    work.reserve(all_constraints.size());
    for (auto& c : all_constraints) work.push_back(detail::gb_from(c));
    all_constraints.clear();

    // every residual is weighted-homogeneous when a parameter born at stage r
    // weighs r - 1, so the variety is a weighted cone: finite means the origin
    // alone. Verified rather than assumed, since the cone criterion leans on it.
    bool conical = true;
    for (const auto& c : work) {
        long long w0 = -1;
        for (const auto& [m, s] : c) {
            long long w = 0;
            for (int id : m) w += param_birth[static_cast<std::size_t>(id)] - 1;
            if (w0 < 0) w0 = w;
            conical = conical && w == w0;
        }
    }

    // candidate exact solutions: x_g -> (1 + c_g delta) x_g with delta the
    // full quantum determinant scales every relation consistently for suitable
    // c. Nothing is trusted up front: a candidate certifies its nonzero
    // coordinates only after it zeroes every residual constraint.
    std::vector<std::map<int, Scalar>> witnesses;
    if (static_cast<long long>(n) + 1 <= D) {
        const PBWElement delta = special_minor(p, ix, ix.f(1));
        std::vector<std::vector<Scalar>> catalog;
        catalog.emplace_back(static_cast<std::size_t>(N), Scalar::one());
        for (int k = 1; k <= n; ++k) { // one row scaled, the rest untouched
            std::vector<Scalar> v(static_cast<std::size_t>(N), Scalar::zero());
            for (int g = 1; g <= N; ++g)
                if ((g - 1) % n + 1 == k) v[static_cast<std::size_t>(g - 1)] = Scalar::one();
            catalog.push_back(std::move(v));
        }
        for (int l = 1; l <= n; ++l) { // one column scaled
            std::vector<Scalar> v(static_cast<std::size_t>(N), Scalar::zero());
            for (int g = 1; g <= N; ++g)
                if ((g - 1) / n + 1 == l) v[static_cast<std::size_t>(g - 1)] = Scalar::one();
            catalog.push_back(std::move(v));
        }
        for (const auto& cg : catalog) {
            std::map<int, Scalar> theta;
            for (int g = 1; g <= N; ++g) {
                if (cg[static_cast<std::size_t>(g - 1)].is_zero()) continue;
                const PBWElement block = delta * PBWElement::generator(p, g);
                for (const auto& [w, c] : block.terms()) {
                    auto it = col_param.find({g, w});
                    if (it != col_param.end())
                        theta.emplace(it->second, cg[static_cast<std::size_t>(g - 1)] * c);
                }
            }
            if (!theta.empty()) witnesses.push_back(std::move(theta));
        }
    }
    auto eval_at = [](const detail::GbPoly& f, const std::map<int, Scalar>& pt) {
        Scalar v = Scalar::zero();
        for (const auto& [m, c] : f) {
            Scalar t(c, IntPoly::constant(1));
            bool zero = false;
            for (int id : m) {
                auto it = pt.find(id);
                if (it == pt.end()) {
                    zero = true;
                    break;
                }
                t *= it->second;
            }
            if (!zero) v += t;
        }
        return v;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        std::set<std::string> uniq;
        std::vector<detail::GbPoly> next;
        for (auto& c : work) {
            strip(c);
            if (c.empty()) continue;
            detail::gb_reduce_content(c);
            if (uniq.insert(detail::gb_key(c)).second) next.push_back(std::move(c));
        }
        work = std::move(next);
        // a constraint that is a pure power certifies its parameter outright
        for (const auto& c : work) {
            if (c.size() != 1) continue;
            const ParamMono& m = c.begin()->first;
            if (!m.empty() &&
                std::all_of(m.begin(), m.end(), [&](int id) { return id == m.front(); }) &&
                dead.insert(m.front()).second)
                changed = true;
        }
        if (changed) continue;
        if (work.empty()) break;
        for (const auto& wit : witnesses) {
            std::map<int, Scalar> pt;
            for (const auto& [id, v] : wit)
                if (!dead.count(id) && !v.is_zero()) pt.emplace(id, v);
            if (pt.empty()) continue;
            bool valid = true;
            for (const auto& c : work)
                if (!eval_at(c, pt).is_zero()) {
                    valid = false;
                    break;
                }
            if (valid)
                for (const auto& [id, v] : pt) alive.insert(id);
        }
        std::set<int> undecided;
        for (const auto& c : work)
            for (const auto& [m, s] : c)
                for (int id : m)
                    if (!dead.count(id) && !alive.count(id)) undecided.insert(id);
        if (undecided.empty()) break;

        // any member set with pure-power leads covering the occurring
        // variables already bounds the quotient, so finiteness (hence, on a
        // cone, collapse to the origin) can fire before the basis completes;
        // likewise a power reducing to zero against a partial basis is final.
        // The watcher cuts Buchberger short the moment either settles the run.
        std::set<int> round_vars;
        for (const auto& c : work)
            for (const auto& [m, s] : c)
                for (int id : m) round_vars.insert(id);
        std::set<int> round_dead;
        bool stopped_early = false;
        long long ticks = 0;
        auto watcher = [&](const std::vector<detail::GbPoly>& basis) {
            if (conical && alive.empty()) {
                std::set<int> powered;
                for (const auto& g : basis) {
                    const ParamMono& m = g.rbegin()->first;
                    if (!m.empty() &&
                        std::all_of(m.begin(), m.end(), [&](int id) { return id == m.front(); }))
                        powered.insert(m.front());
                }
                if (std::includes(powered.begin(), powered.end(), round_vars.begin(),
                                  round_vars.end())) {
                    round_dead = round_vars;
                    return stopped_early = true;
                }
            }
            if (++ticks % 64 == 0) {
                for (int id : undecided)
                    if (!round_dead.count(id) && detail::param_power_vanishes(id, basis, fuel))
                        round_dead.insert(id);
                if (round_dead.size() == undecided.size()) return stopped_early = true;
            }
            return false;
        };
        auto gb = detail::groebner(std::move(work), fuel, watcher);
        for (int id : round_dead)
            if (dead.insert(id).second) {
                undecided.erase(id);
                changed = true;
            }
        if (!stopped_early) {
            if (conical && alive.empty()) {
                // a pure-power lead for every variable makes the quotient
                // finite, and a finite cone is the origin: all die at once
                std::set<int> powered, seen;
                for (const auto& g : gb) {
                    const ParamMono& m = g.rbegin()->first;
                    if (!m.empty() &&
                        std::all_of(m.begin(), m.end(), [&](int id) { return id == m.front(); }))
                        powered.insert(m.front());
                    for (const auto& [mm, cc] : g)
                        for (int id : mm) seen.insert(id);
                }
                if (std::includes(powered.begin(), powered.end(), seen.begin(), seen.end())) {
                    for (int id : seen) dead.insert(id);
                    changed = true;
                    work = std::move(gb);
                    continue;
                }
            }
            for (auto it = undecided.begin(); it != undecided.end();) {
                if (detail::param_power_vanishes(*it, gb, fuel)) {
                    dead.insert(*it);
                    it = undecided.erase(it);
                    changed = true;
                } else {
                    ++it;
                }
            }
            // saturation needs the completed basis, which this branch has
            if (!changed)
                for (int id : undecided) {
                    if (detail::param_vanishes_on_variety(id, gb, fuel)) {
                        dead.insert(id);
                        changed = true;
                    } else {
                        alive.insert(id);
                    }
                }
        }
        work = std::move(gb);
    }
    for (int id : alive)
        if (dead.count(id))
            throw consistency_violation("a parameter was certified both zero and nonzero");

    for (auto it = rep.solution.begin(); it != rep.solution.end();) {
        strip(it->second);
        it = it->second.empty() ? rep.solution.erase(it) : std::next(it);
    }
    std::map<long long, std::size_t> live_per_stage;
    std::size_t survivors = 0;
    for (int id = 0; id < next_param; ++id)
        if (!dead.count(id)) {
            ++survivors;
            ++live_per_stage[param_birth[static_cast<std::size_t>(id)]];
        }
    for (auto& st : rep.per_degree) {
        auto it = live_per_stage.find(st.degree);
        st.solution_dim = it == live_per_stage.end() ? 0 : it->second;
    }
    rep.parameters = survivors;
    rep.parameter_constraints.reserve(work.size());
    for (const auto& c : work) {
        PolyExpr pe;
        const IntPoly& lead = c.rbegin()->second;
        for (const auto& [m, coef] : c) pe.emplace(m, Scalar(coef, lead));
        rep.parameter_constraints.push_back(std::move(pe));
    }
    rep.verdict = survivors == 0 ? "identity-only" : "nontrivial";
    return rep;
}

// do concrete coefficients (the rest zero) give images satisfying the
// selected constraints exactly? This is the membership oracle for solver
// results: polynomial images of degree <= D leave nothing beyond 2D, so
// exact residual vanishing is the right notion
inline bool unipotent_images_satisfy(int n, long long D, const std::set<std::string>& want,
                                     const std::map<std::pair<int, Word>, Scalar>& coeffs) {
    detail::validate_constraint_names(want);
    PresPtr p = build_presentation(n);
    MatrixIndexing ix(n);
    std::vector<PBWElement> images;
    for (int g = 1; g <= ix.N; ++g) images.push_back(PBWElement::generator(p, g));
    for (const auto& [key, c] : coeffs) {
        const auto& [g, m] = key;
        if (static_cast<long long>(m.size()) < 2 || static_cast<long long>(m.size()) > D)
            throw degree_budget_exceeded("coefficient outside degrees 2.." + std::to_string(D));
        images[static_cast<std::size_t>(g - 1)] += PBWElement::monomial(p, m, c);
    }
    if (want.count("relations") && !check_relations(images, p).ok()) return false;
    if (want.count("fix_special_minors"))
        for (int m = 1; m <= 2 * n - 1; ++m) {
            PBWElement minor = special_minor(p, ix, ix.f(m));
            if (apply_endomorphism(images, minor) != minor) return false;
        }
    return true;
}

} // namespace qmx
