#pragma once

// The deleting-derivations tower.  Starting from the quantum matrix
// presentation, each step localizes at a pivot generator, applies the
// q-factorial series that removes the pivot's derivation, and re-derives the
// presentation satisfied by the new generators from scratch.  Running the
// pivots N, N-1, ..., 2 in order turns the algebra into a pure quantum
// torus.  Nothing about the intermediate stages is assumed: every shape
// claim (which corrections vanish, where the surviving ones live, how fast
// the derivations nilpotate) is checked at runtime and failures are hard
// errors, never silent adaptations.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qmx/errors.hpp"
#include "qmx/pbw.hpp"
#include "qmx/qmatrix.hpp"
#include "qmx/qtorus.hpp"
#include "qmx/scalar.hpp"

namespace qmx {

namespace detail {

// pivot-row exponent extended to every column: a_{k,i} below the diagonal
// from the table, 0 on it, -a_{i,k} above it
inline long long pivot_exp(const Presentation& p, int k, int i) {
    if (i < k) return p.a(k, i);
    if (i == k) return 0;
    return -p.a(i, k);
}

// The localized arithmetic at pivot k is valid exactly when
//   (1) every generator above the pivot q-commutes with the pivot,
//   (2) every pair straddling the pivot q-commutes,
//   (3) corrections of pairs (j,i) with j <= k stay strictly below the pivot,
//   (4) corrections of pairs (j,i) with i > k stay strictly above it.
// These are the facts the tower maintains stage by stage; re-checking them
// here makes misuse of a pivot a loud error instead of wrong arithmetic.
inline void require_ore_pivot(const Presentation& p, int k) {
    if (k < 1 || k > static_cast<int>(p.size()))
        throw index_out_of_scope("pivot " + std::to_string(k));
    for (const auto& [key, terms] : p.corrections()) {
        auto [j, i] = key;
        if (i == k || (j > k && i < k))
            throw stage_shape_violation("pair (" + std::to_string(j) + "," + std::to_string(i) +
                                        ") does not q-commute across pivot " + std::to_string(k));
        for (const auto& t : terms) {
            if (j <= k && t.v >= k)
                throw stage_shape_violation("correction of (" + std::to_string(j) + "," +
                                            std::to_string(i) + ") reaches up to pivot " +
                                            std::to_string(k));
            if (i > k && t.u <= k)
                throw stage_shape_violation("correction of (" + std::to_string(j) + "," +
                                            std::to_string(i) + ") reaches down to pivot " +
                                            std::to_string(k));
        }
    }
}

/// sigma_k^power: scales each normal word by q^(power * sum of row-k exponents)
inline PBWElement sigma_pow(const PresPtr& p, int k, const PBWElement& e, long long power) {
    PBWElement scaled = PBWElement::zero(p);
    for (const auto& [w, c] : e.terms()) {
        long long s = 0;
        for (int g : w) s += pivot_exp(*p, k, g);
        scaled += PBWElement::monomial(p, w, c * Scalar::q_power(power * s));
    }
    return scaled;
}

// delta_k on one generator: the correction of the pair (k,i) read as an
// element; above the pivot it is the (rescaled) correction of (i,k), which
// require_ore_pivot has already forced to vanish
inline PBWElement delta_gen(const PresPtr& p, int k, int i) {
    PBWElement out = PBWElement::zero(p);
    if (i < k) {
        for (const auto& t : p->corr(k, i))
            out += PBWElement::monomial(p, Word{t.u, t.v}, t.coeff);
    } else if (i > k) {
        for (const auto& t : p->corr(i, k))
            out += PBWElement::monomial(p, Word{t.u, t.v},
                                        -t.coeff * Scalar::q_power(-p->a(i, k)));
    }
    return out;
}

// delta_k by the twisted Leibniz rule d(ab) = sigma(a) d(b) + d(a) b
inline PBWElement delta(const PresPtr& p, int k, const PBWElement& e) {
    PBWElement out = PBWElement::zero(p);
    for (const auto& [w, c] : e.terms()) {
        long long sigma_exp = 0; // accumulated sigma of the prefix
        for (std::size_t t = 0; t < w.size(); ++t) {
            PBWElement dg = delta_gen(p, k, w[t]);
            if (!dg.is_zero()) {
                Word prefix(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(t));
                Word suffix(w.begin() + static_cast<std::ptrdiff_t>(t) + 1, w.end());
                PBWElement term =
                    PBWElement::monomial(p, prefix, c * Scalar::q_power(sigma_exp)) * dg *
                    PBWElement::monomial(p, suffix, Scalar::one());
                out += term;
            }
            sigma_exp += pivot_exp(*p, k, w[t]);
        }
    }
    return out;
}

} // namespace detail

// sigma_k, sigma_k^{-1} and delta_k of an element generated below the pivot
struct SigmaDeltaImages {
    PBWElement sigma;
    PBWElement sigma_inverse;
    PBWElement delta;
};

inline SigmaDeltaImages sigma_delta(const PresPtr& p, int k, const PBWElement& e) {
    if (!same_presentation(p, e.pres())) throw presentation_mismatch();
    if (k < 2 || k > static_cast<int>(p->size()))
        throw index_out_of_scope("pivot " + std::to_string(k));
    for (const auto& [w, c] : e.terms())
        for (int g : w)
            if (g >= k)
                throw index_out_of_scope("generator " + std::to_string(g) +
                                         " not below pivot " + std::to_string(k));
    return {detail::sigma_pow(p, k, e, 1), detail::sigma_pow(p, k, e, -1),
            detail::delta(p, k, e)};
}

// An element of the algebra localized at the powers of one pivot generator,
// held in the canonical normal form
//
//   sum of  c * X^(wL) X_k^(e) X^(wR),   e in Z,
//
// where wL collects the letters below the pivot and wR those above it.  The
// normal Laurent words are a basis of the localization, so equality and
// zero tests are representation tests.
class LocElement {
  public:
    using Key = std::pair<Word, long long>; // (non-pivot letters, pivot exponent)
    using Terms = std::map<Key, Scalar>;

    LocElement(PresPtr p, int pivot) : p_(std::move(p)), k_(pivot) {
        detail::require_ore_pivot(*p_, k_);
    }

    static LocElement zero(PresPtr p, int pivot) { return LocElement(std::move(p), pivot); }

    // injection of a polynomial element: pivot letters move into the exponent
    static LocElement from_pbw(int pivot, const PBWElement& e) {
        LocElement out(e.pres(), pivot);
        for (const auto& [w, c] : e.terms()) {
            Word rest;
            long long pe = 0;
            for (int g : w)
                g == pivot ? void(++pe) : rest.push_back(g);
            out.add(Key{std::move(rest), pe}, c);
        }
        return out;
    }

    int pivot() const { return k_; }
    const PresPtr& pres() const { return p_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    bool operator==(const LocElement& o) const {
        return k_ == o.k_ && same_presentation(p_, o.p_) && terms_ == o.terms_;
    }
    bool operator!=(const LocElement& o) const { return !(*this == o); }

    LocElement operator-() const {
        LocElement r(*this);
        for (auto& [w, c] : r.terms_) c = -c;
        return r;
    }
    LocElement operator+(const LocElement& o) const {
        require_same(o);
        LocElement r(*this);
        for (const auto& [w, c] : o.terms_) r.add(w, c);
        return r;
    }
    LocElement operator-(const LocElement& o) const { return *this + (-o); }
    LocElement& operator+=(const LocElement& o) { return *this = *this + o; }
    LocElement& operator-=(const LocElement& o) { return *this = *this - o; }

    LocElement operator*(const Scalar& s) const {
        LocElement r(p_, k_);
        if (s.is_zero()) return r;
        r.terms_ = terms_;
        for (auto& [w, c] : r.terms_) c *= s;
        return r;
    }

    // right multiplication by X_k^e: the pivot power q-commutes past the
    // letters above it
    LocElement times_pivot_power(long long e) const {
        LocElement r(p_, k_);
        for (const auto& [key, c] : terms_) {
            long long above = 0;
            for (int g : key.first)
                if (g > k_) above += p_->a(g, k_);
            r.add(Key{key.first, key.second + e}, c * Scalar::q_power(e * above));
        }
        return r;
    }

    LocElement operator*(const LocElement& o) const;

    // the right-denominator reading: m >= 0 mapped to P_m with the element
    // equal to the sum of P_m X_k^(-m); only nonzero parts appear
    std::map<long long, PBWElement> parts() const {
        std::map<long long, PBWElement> out;
        for (const auto& [key, c] : terms_) {
            const auto& [w, pe] = key;
            long long m = pe >= 0 ? 0 : -pe;
            auto it = out.find(m);
            if (it == out.end()) it = out.emplace(m, PBWElement::zero(p_)).first;
            if (pe >= 0) {
                Word full;
                for (int g : w)
                    if (g < k_) full.push_back(g);
                full.insert(full.end(), static_cast<std::size_t>(pe), k_);
                for (int g : w)
                    if (g > k_) full.push_back(g);
                it->second += PBWElement::monomial(p_, full, c);
            } else {
                // X^(wL) X_k^(pe) X^(wR) = q^(-pe*A(wR)) X^(wL) X^(wR) X_k^(pe)
                long long above = 0;
                for (int g : w)
                    if (g > k_) above += p_->a(g, k_);
                it->second += PBWElement::monomial(p_, w, c * Scalar::q_power(-pe * above));
            }
        }
        for (auto it = out.begin(); it != out.end();)
            it = it->second.is_zero() ? out.erase(it) : std::next(it);
        return out;
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (const auto& [key, c] : terms_) {
            if (!s.empty()) s += " + ";
            std::string cs = c.to_string();
            bool shown = false;
            if (cs != "1" || (key.first.empty() && key.second == 0)) {
                s += "(" + cs + ")";
                shown = true;
            }
            auto append = [&](const std::string& part) {
                if (shown) s += "*";
                s += part;
                shown = true;
            };
            for (std::size_t t = 0; t < key.first.size(); ++t) {
                if (key.first[t] > k_ && key.second != 0 &&
                    (t == 0 || key.first[t - 1] < k_)) // pivot slot sits here
                    append("X" + std::to_string(k_) + "^" + std::to_string(key.second));
                append("X" + std::to_string(key.first[t]));
            }
            if (key.second != 0 && (key.first.empty() || key.first.back() < k_))
                append("X" + std::to_string(k_) + "^" + std::to_string(key.second));
        }
        return s;
    }

  private:
    void require_same(const LocElement& o) const {
        if (!same_presentation(p_, o.p_)) throw presentation_mismatch();
        if (k_ != o.k_)
            throw error("localizations at different pivots: " + std::to_string(k_) + " vs " +
                        std::to_string(o.k_));
    }
    void add(const Key& key, const Scalar& c) {
        if (c.is_zero()) return;
        auto it = terms_.find(key);
        if (it == terms_.end()) {
            terms_.emplace(key, c);
            return;
        }
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }

    PresPtr p_;
    int k_ = 0;
    Terms terms_;

    friend LocElement loc_push(int pivot, const PBWElement& e);
};

namespace detail {

// X_k^(-1) * (c X^w) for a word below the pivot, by the closed form
//
//   X_k^(-1) a = sum over r of (-1)^r (T D)^r T(a) X_k^(-(r+1)),
//
// T = sigma_k^(-1), D = delta_k.  The series stops when D kills the term;
// the guard turns a non-nilpotent derivation (an upstream bug) into an error.
inline void push_below(const PresPtr& p, int k, const Word& w, const Scalar& c,
                       LocElement::Terms& sink) {
    PBWElement cur = sigma_pow(p, k, PBWElement::monomial(p, w, c), -1);
    const long long guard =
        static_cast<long long>(w.size() + 1) * static_cast<long long>(p->size()) + 2;
    for (long long r = 0; !cur.is_zero(); ++r) {
        if (r > guard)
            throw nilpotency_bound_exceeded("pushing past pivot " + std::to_string(k));
        Scalar sign = (r % 2) ? -Scalar::one() : Scalar::one();
        for (const auto& [pw, pc] : cur.terms()) {
            auto it = sink.find({pw, -(r + 1)});
            Scalar val = pc * sign;
            if (it == sink.end()) {
                if (!val.is_zero()) sink.emplace(LocElement::Key{pw, -(r + 1)}, val);
            } else {
                it->second += val;
                if (it->second.is_zero()) sink.erase(it);
            }
        }
        cur = sigma_pow(p, k, delta(p, k, cur), -1);
    }
}

// Laurent terms of X_k^(pe) * X^w for a word below the pivot
inline LocElement::Terms pivot_left_times(const PresPtr& p, int k, long long pe, const Word& w,
                                          const Scalar& c) {
    LocElement::Terms out;
    if (pe >= 0) {
        Word full(static_cast<std::size_t>(pe), k);
        full.insert(full.end(), w.begin(), w.end());
        for (const auto& [pw, pc] : normalize_word(full, c, *p)) {
            // letters stay at or below the pivot; trailing pivots move out
            Word rest(pw.begin(),
                      std::find(pw.begin(), pw.end(), k)); // pivots are the sorted tail
            out.emplace(LocElement::Key{std::move(rest),
                                        static_cast<long long>(pw.size()) -
                                            static_cast<long long>(
                                                std::find(pw.begin(), pw.end(), k) - pw.begin())},
                        pc);
        }
        return out;
    }
    out.emplace(LocElement::Key{w, 0}, c);
    for (long long step = 0; step < -pe; ++step) {
        LocElement::Terms next;
        for (const auto& [key, kc] : out) {
            LocElement::Terms pushed;
            push_below(p, k, key.first, kc, pushed);
            for (const auto& [pkey, pc] : pushed) {
                auto it = next.find({pkey.first, pkey.second + key.second});
                if (it == next.end())
                    next.emplace(LocElement::Key{pkey.first, pkey.second + key.second}, pc);
                else {
                    it->second += pc;
                    if (it->second.is_zero()) next.erase(it);
                }
            }
        }
        out = std::move(next);
    }
    return out;
}

} // namespace detail

// X_pivot^(-1) * e in canonical form; e may involve any generators
inline LocElement loc_push(int pivot, const PBWElement& e) {
    LocElement inj = LocElement::from_pbw(pivot, e);
    const PresPtr& p = e.pres();
    LocElement out(p, pivot);
    for (const auto& [key, c] : inj.terms()) {
        const auto& [w, pe] = key;
        Word below, above;
        for (int g : w)
            (g < pivot ? below : above).push_back(g);
        LocElement::Terms pushed;
        detail::push_below(p, pivot, below, c, pushed);
        for (const auto& [pkey, pc] : pushed) {
            Word joined = pkey.first;
            joined.insert(joined.end(), above.begin(), above.end());
            out.add(LocElement::Key{std::move(joined), pkey.second + pe}, pc);
        }
    }
    return out;
}

inline LocElement LocElement::operator*(const LocElement& o) const {
    require_same(o);
    const int k = k_;
    LocElement out(p_, k);
    for (const auto& [key1, c1] : terms_) {
        Word L1, R1;
        for (int g : key1.first)
            (g < k ? L1 : R1).push_back(g);
        long long above_k_exp = 0; // sum of a(j,k) over the letters above the pivot
        for (int g : R1) above_k_exp += p_->a(g, k);
        for (const auto& [key2, c2] : o.terms_) {
            Word L2, R2;
            for (int g : key2.first)
                (g < k ? L2 : R2).push_back(g);
            // cross swaps: everything in R1 q-commutes past L2 and the pivot
            long long cross = 0;
            for (int j : R1)
                for (int i : L2) cross += p_->a(j, i);
            Scalar c = c1 * c2 * Scalar::q_power(cross + key2.second * above_k_exp);
            // arrangement is now  L1 X_k^(e1) L2 X_k^(e2) R1 R2
            PBWElement right = PBWElement::monomial(p_, R1, Scalar::one()) *
                               PBWElement::monomial(p_, R2, Scalar::one());
            if (right.is_zero()) continue;
            Terms mid = detail::pivot_left_times(p_, k, key1.second, L2, Scalar::one());
            for (const auto& [mkey, mc] : mid) {
                PBWElement left = PBWElement::monomial(p_, L1, Scalar::one()) *
                                  PBWElement::monomial(p_, mkey.first, Scalar::one());
                for (const auto& [lw, lc] : left.terms())
                    for (const auto& [rw, rc] : right.terms()) {
                        Word joined = lw;
                        joined.insert(joined.end(), rw.begin(), rw.end());
                        out.add(Key{std::move(joined), mkey.second + key2.second},
                                c * mc * lc * rc);
                    }
            }
        }
    }
    return out;
}

inline LocElement operator*(const Scalar& s, const LocElement& e) { return e * s; }

inline LocElement loc_multiply(const LocElement& a, const LocElement& b) { return a * b; }

// One rung of the tower
struct StageState {
    int k = 0;    // stage index: N+1 for the input algebra, 2 for the torus
    PresPtr pres; // verified presentation of this stage's generators
    // this stage's generators over the previous stage's algebra (trace mode)
    std::optional<std::vector<LocElement>> expr;
    // observed truncation index of the series per generator; 0 = copied/unchanged
    std::vector<int> nilpotency;
};

inline StageState initial_stage(PresPtr p) {
    const int N = static_cast<int>(p->size());
    return {N + 1, std::move(p), std::nullopt, std::vector<int>(static_cast<std::size_t>(N), 0)};
}

// corrections of a stage presentation must live strictly below the stage index
inline bool stage_corrections_confined(const Presentation& p, int k) {
    for (const auto& [key, terms] : p.corrections())
        if (key.first >= k) return false;
    return true;
}

namespace detail {

// gamma solving  sum gamma_c * cand_c = target  by elimination over the
// scalar field; nullopt when inconsistent.  Columns that never meet a pivot
// get gamma = 0; the caller re-verifies the combination, so a dependent
// candidate list cannot smuggle in a wrong answer.
inline std::optional<std::vector<Scalar>> match_combination(const std::vector<LocElement>& cands,
                                                            const LocElement& target) {
    std::map<LocElement::Key, std::size_t> row_of;
    auto row = [&](const LocElement::Key& key) {
        return row_of.emplace(key, row_of.size()).first->second;
    };
    for (const auto& c : cands)
        for (const auto& [key, s] : c.terms()) row(key);
    for (const auto& [key, s] : target.terms()) row(key);

    const std::size_t rows = row_of.size(), cols = cands.size();
    std::vector<std::vector<Scalar>> m(rows, std::vector<Scalar>(cols + 1, Scalar::zero()));
    for (std::size_t c = 0; c < cols; ++c)
        for (const auto& [key, s] : cands[c].terms()) m[row(key)][c] = s;
    for (const auto& [key, s] : target.terms()) m[row(key)][cols] = s;

    std::vector<std::size_t> pivot_row(cols, rows); // rows means "free column"
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t r = rank;
        while (r < rows && m[r][c].is_zero()) ++r;
        if (r == rows) continue;
        std::swap(m[r], m[rank]);
        Scalar inv = m[rank][c].inverse();
        for (std::size_t t = c; t <= cols; ++t) m[rank][t] *= inv;
        for (std::size_t t = 0; t < rows; ++t) {
            if (t == rank || m[t][c].is_zero()) continue;
            Scalar f = m[t][c];
            for (std::size_t s = c; s <= cols; ++s) m[t][s] -= f * m[rank][s];
        }
        pivot_row[c] = rank;
        ++rank;
    }
    for (std::size_t r = rank; r < rows; ++r)
        if (!m[r][cols].is_zero()) return std::nullopt;
    std::vector<Scalar> gamma(cols, Scalar::zero());
    for (std::size_t c = 0; c < cols; ++c)
        if (pivot_row[c] != rows) gamma[c] = m[pivot_row[c]][cols];
    return gamma;
}

} // namespace detail

// One deleting-derivations step: from the stage-(k+1) algebra to stage k,
// where k = state.k - 1 is the pivot.  New generators below the pivot are
// the series
//
//   X'_j = sum over r of cauchon_coeff(r) [delta_k^r sigma_k^(-r)(X_j)] X_k^(-r),
//
// everything at or above the pivot is copied.  The returned presentation is
// re-derived by matching every pairwise product against the template
// "q-commutation plus two-letter corrections strictly between the pair";
// the pivot's own row must come out as pure q-commutation with the original
// exponent.
inline StageState delete_derivation_step(const StageState& state, bool keep_expr = true) {
    if (state.k < 3)
        throw index_out_of_scope("no pivot left below stage " + std::to_string(state.k));
    const PresPtr& p = state.pres;
    const int N = static_cast<int>(p->size());
    const int k = state.k - 1;
    detail::require_ore_pivot(*p, k);

    std::vector<LocElement> gens;
    std::vector<int> nilp(static_cast<std::size_t>(N), 0);
    for (int j = 1; j <= N; ++j) {
        if (j >= k) {
            gens.push_back(LocElement::from_pbw(k, PBWElement::generator(p, j)));
            continue;
        }
        LocElement acc = LocElement::from_pbw(k, PBWElement::generator(p, j));
        PBWElement d = PBWElement::generator(p, j); // delta_k^r (X_j)
        for (int r = 1;; ++r) {
            d = detail::delta(p, k, d);
            if (d.is_zero()) {
                nilp[static_cast<std::size_t>(j - 1)] = r - 1;
                break;
            }
            if (r > N)
                throw nilpotency_bound_exceeded("derivation at pivot " + std::to_string(k) +
                                                " survives past order " + std::to_string(N) +
                                                " on generator " + std::to_string(j));
            Scalar coeff = cauchon_coeff(static_cast<unsigned>(r)) *
                           Scalar::q_power(-static_cast<long long>(r) * p->a(k, j));
            acc += LocElement::from_pbw(k, d * coeff).times_pivot_power(-r);
        }
        gens.push_back(std::move(acc));
    }

    std::map<std::pair<int, int>, LocElement> product_cache;
    auto product = [&](int u, int v) -> const LocElement& {
        auto it = product_cache.find({u, v});
        if (it == product_cache.end())
            it = product_cache
                     .emplace(std::pair<int, int>{u, v},
                              gens[static_cast<std::size_t>(u - 1)] *
                                  gens[static_cast<std::size_t>(v - 1)])
                     .first;
        return it->second;
    };

    Presentation::CorrMap corr;
    for (int j = 2; j <= N; ++j)
        for (int i = 1; i < j; ++i) {
            if (i >= k) {
                // both generators are copies; the incoming invariant already
                // forces zero corrections on these pairs
                if (!p->corr(j, i).empty())
                    throw stage_shape_violation("stale correction on the copied pair (" +
                                                std::to_string(j) + "," + std::to_string(i) + ")");
                continue;
            }
            LocElement residual =
                product(j, i) - product(i, j) * Scalar::q_power(p->a(j, i));
            if (residual.is_zero()) continue;
            if (j >= k)
                throw stage_shape_violation(
                    "pair (" + std::to_string(j) + "," + std::to_string(i) +
                    ") at pivot " + std::to_string(k) +
                    " must q-commute cleanly; residual = " + residual.to_string());
            std::vector<std::pair<int, int>> slots;
            std::vector<LocElement> cands;
            for (int u = i + 1; u < j; ++u)
                for (int v = u; v < j; ++v) {
                    slots.emplace_back(u, v);
                    cands.push_back(product(u, v));
                }
            auto gamma = detail::match_combination(cands, residual);
            if (gamma) { // re-verify: the match is only trusted after multiplying out
                LocElement back = LocElement::zero(p, k);
                for (std::size_t t = 0; t < cands.size(); ++t)
                    back += cands[t] * (*gamma)[t];
                if (back != residual) gamma.reset();
            }
            if (!gamma)
                throw stage_shape_violation(
                    "pair (" + std::to_string(j) + "," + std::to_string(i) + ") at pivot " +
                    std::to_string(k) +
                    " does not fit the two-letter template; residual = " + residual.to_string());
            Presentation::CorrList list;
            for (std::size_t t = 0; t < slots.size(); ++t)
                if (!(*gamma)[t].is_zero())
                    list.push_back({slots[t].first, slots[t].second, (*gamma)[t]});
            if (!list.empty()) corr[{j, i}] = std::move(list);
        }

    auto pres = std::make_shared<Presentation>(static_cast<std::size_t>(N), p->exp(),
                                               std::move(corr), p->degrees());
    if (!stage_corrections_confined(*pres, k))
        throw stage_shape_violation("corrections escaped below stage " + std::to_string(k));
    return {k, std::move(pres),
            keep_expr ? std::optional<std::vector<LocElement>>(std::move(gens)) : std::nullopt,
            std::move(nilp)};
}

// The whole tower for the n x n quantum matrix algebra
struct CauchonRun {
    int n = 0;
    std::vector<StageState> stages; // stage N+1 first, stage 2 last
    PresPtr base_pres;
    PresPtr final_pres;
    // final generators over the input algebra; present when at most one
    // stage acted nontrivially (n <= 2), absent otherwise
    std::optional<std::vector<LocElement>> base_expr;
};

inline CauchonRun run_cauchon(int n, bool trace = false) {
    CauchonRun run;
    run.n = n;
    run.base_pres = build_presentation(n);
    const int N = n * n;
    run.stages.push_back(initial_stage(run.base_pres));
    std::optional<std::vector<LocElement>> composed;
    bool composable = true;
    while (run.stages.back().k > 2) {
        StageState next = delete_derivation_step(run.stages.back(), true);
        bool trivial = std::all_of(next.nilpotency.begin(), next.nilpotency.end(),
                                   [](int r) { return r == 0; });
        if (!trivial) {
            if (composed)
                composable = false; // a second nontrivial pivot: no flat composite
            else
                composed = next.expr;
        }
        if (!trace) next.expr.reset();
        run.stages.push_back(std::move(next));
    }
    const StageState& last = run.stages.back();
    run.final_pres = last.pres;
    if (!last.pres->corrections().empty())
        throw consistency_violation("tower finished with corrections left over");
    for (int j = 2; j <= N; ++j)
        for (int i = 1; i < j; ++i)
            if (last.pres->a(j, i) != run.base_pres->a(j, i))
                throw consistency_violation("tower changed the commutation exponents");
    if (composable && !composed && N >= 1) {
        // every stage was the identity: the final generators are the inputs
        std::vector<LocElement> id;
        for (int j = 1; j <= N; ++j)
            id.push_back(LocElement::from_pbw(N, PBWElement::generator(run.base_pres, j)));
        composed = std::move(id);
    }
    if (composable) run.base_expr = std::move(composed);
    return run;
}

// Checks of the minor description of the final generators.
//
// Every n: the commutation exponents predicted by multiplying the successor
// chains inside the abstract torus must match the exponents computed between
// the actual minors in the polynomial algebra.
//
// n <= 2 (single nontrivial pivot, so the tower composes over the input
// algebra): the denominator-cleared identities themselves,
//
//   Xbar_i * Delta_(s(i)) = Delta_i     when s(i) is defined,
//   Xbar_i = Delta_i                    when the chain ends at i.
struct Ca1Report {
    struct Identity {
        int i = 0;
        std::optional<int> s;
        bool pass = false;
        std::string note; // residual rendering on failure
    };
    struct Pair {
        int i = 0, j = 0;
        long long expected = 0, got = 0;
        bool pass = false;
    };
    int n = 0;
    bool identities_checked = false;
    std::vector<Identity> identities;
    std::vector<Pair> commutations;

    bool ok() const {
        for (const auto& e : identities)
            if (!e.pass) return false;
        for (const auto& e : commutations)
            if (!e.pass) return false;
        return true;
    }
};

inline Ca1Report verify_theorem_ca1(int n) {
    Ca1Report rep;
    rep.n = n;
    CauchonRun run = run_cauchon(n, true);
    MatrixIndexing ix(n);
    const int N = ix.N;

    auto a = std::make_shared<ExponentMatrix>(ExponentMatrix::from_presentation(*run.final_pres));
    auto b = minor_commutation_exponents(run.base_pres, ix);
    for (int i = 1; i <= N; ++i) {
        ExpVec mi(static_cast<std::size_t>(N), 0);
        for (int t : ix.chain(i)) mi[static_cast<std::size_t>(t - 1)] += 1;
        for (int j = 1; j <= N; ++j) {
            ExpVec mj(static_cast<std::size_t>(N), 0);
            for (int t : ix.chain(j)) mj[static_cast<std::size_t>(t - 1)] += 1;
            TorusElement uv = TorusElement::monomial(a, mi, Scalar::one()) *
                              TorusElement::monomial(a, mj, Scalar::one());
            TorusElement vu = TorusElement::monomial(a, mj, Scalar::one()) *
                              TorusElement::monomial(a, mi, Scalar::one());
            auto ratio = (uv.terms().begin()->second / vu.terms().begin()->second).as_q_power();
            Ca1Report::Pair entry;
            entry.i = i;
            entry.j = j;
            entry.expected = b[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)];
            entry.got = (ratio && ratio->first == 1) ? ratio->second : entry.expected + 1;
            entry.pass = ratio && ratio->first == 1 && entry.got == entry.expected;
            rep.commutations.push_back(entry);
        }
    }

    if (run.base_expr) {
        rep.identities_checked = true;
        const int pivot = run.base_expr->front().pivot();
        for (int i = 1; i <= N; ++i) {
            Ca1Report::Identity entry;
            entry.i = i;
            entry.s = ix.succ(i);
            const LocElement& xbar = (*run.base_expr)[static_cast<std::size_t>(i - 1)];
            LocElement want =
                LocElement::from_pbw(pivot, special_minor(run.base_pres, ix, i));
            LocElement got =
                entry.s ? xbar * LocElement::from_pbw(
                                     pivot, special_minor(run.base_pres, ix, *entry.s))
                        : xbar;
            entry.pass = got == want;
            if (!entry.pass) entry.note = (got - want).to_string();
            rep.identities.push_back(std::move(entry));
        }
    }
    return rep;
}

} // namespace qmx
