#pragma once

// Normal-form engine for quadratic algebras with a PBW basis:
//
//   X_j X_i = q^(a_ji) X_i X_j + c_ji          (j > i)
//
// where every correction c_ji is a combination of two-letter ordered words
// whose first letter is < j.  That last condition makes each rewrite strictly
// decrease a word in (length, lex) order, so any rewrite schedule terminates;
// uniqueness of the result (the PBW property) is a statement about the
// algebra, asserted by the oracle-equivalence and associativity tests.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qmx/errors.hpp"
#include "qmx/scalar.hpp"

namespace qmx {

using Word = std::vector<int>; // 1-based generator indices

// degree-lexicographic order; all rewrites preserve length, so length-then-lex
// is the right well-founded order whatever the generator degrees are
struct DegLexLess {
    bool operator()(const Word& a, const Word& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    }
};

using TermMap = std::map<Word, Scalar, DegLexLess>;

inline void add_term(TermMap& m, const Word& w, const Scalar& c) {
    if (c.is_zero()) return;
    auto it = m.find(w);
    if (it == m.end()) {
        m.emplace(w, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) m.erase(it);
}

class Presentation {
  public:
    struct CorrTerm {
        int u, v; // ordered two-letter word u <= v
        Scalar coeff;
    };
    using CorrList = std::vector<CorrTerm>;
    using CorrMap = std::map<std::pair<int, int>, CorrList>; // key (j,i), j > i

    Presentation(std::size_t n, std::vector<std::vector<long long>> exp, CorrMap corr,
                 std::vector<long long> degree = {})
        : n_(n), exp_(std::move(exp)), corr_(std::move(corr)), degree_(std::move(degree)) {
        if (degree_.empty()) degree_.assign(n_, 1);
        if (exp_.size() != n_) throw error("exponent matrix has wrong row count");
        for (const auto& row : exp_)
            if (row.size() != n_) throw error("exponent matrix has wrong column count");
        for (long long d : degree_)
            if (d <= 0) throw error("generator degrees must be positive");
        for (auto& [key, terms] : corr_) {
            auto [j, i] = key;
            if (!(1 <= i && i < j && j <= static_cast<int>(n_)))
                throw error("correction key out of range");
            for (auto& t : terms) {
                if (t.u < 1 || t.v > static_cast<int>(n_) || t.u > t.v)
                    throw error("correction word not an ordered two-letter word");
                if (t.u >= j)
                    throw error("correction word starts at or above the rewritten letter");
                if (t.coeff.is_zero()) throw error("zero coefficient stored in correction");
            }
        }
    }

    std::size_t size() const { return n_; }
    // exponent a_ji in X_j X_i = q^(a_ji) X_i X_j + c_ji, for j > i
    long long a(int j, int i) const {
        return exp_[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(i - 1)];
    }
    const CorrList& corr(int j, int i) const {
        static const CorrList empty;
        auto it = corr_.find({j, i});
        return it == corr_.end() ? empty : it->second;
    }
    const CorrMap& corrections() const { return corr_; }
    long long degree_of(int g) const { return degree_[static_cast<std::size_t>(g - 1)]; }
    const std::vector<long long>& degrees() const { return degree_; }
    const std::vector<std::vector<long long>>& exp() const { return exp_; }

    bool operator==(const Presentation& o) const {
        if (n_ != o.n_ || degree_ != o.degree_) return false;
        // only the strictly-lower part of exp carries meaning
        for (int j = 2; j <= static_cast<int>(n_); ++j)
            for (int i = 1; i < j; ++i)
                if (a(j, i) != o.a(j, i)) return false;
        auto flat = [](const CorrMap& m) {
            std::vector<std::tuple<int, int, int, int, Scalar>> v;
            for (const auto& [key, terms] : m)
                for (const auto& t : terms) v.emplace_back(key.first, key.second, t.u, t.v, t.coeff);
            return v;
        };
        return flat(corr_) == flat(o.corr_);
    }

  private:
    std::size_t n_;
    std::vector<std::vector<long long>> exp_;
    CorrMap corr_;
    std::vector<long long> degree_;
};

using PresPtr = std::shared_ptr<const Presentation>;

inline bool same_presentation(const PresPtr& a, const PresPtr& b) {
    return a == b || (a && b && *a == *b);
}

// normal form of coeff * X_{w1} ... X_{wk} as a term map
inline TermMap normalize_word(const Word& word, const Scalar& coeff, const Presentation& p) {
    for (int g : word)
        if (g < 1 || g > static_cast<int>(p.size()))
            throw index_out_of_scope("generator index " + std::to_string(g));
    TermMap out;
    std::vector<std::pair<Word, Scalar>> work{{word, coeff}};
    while (!work.empty()) {
        auto [w, c] = std::move(work.back());
        work.pop_back();
        if (c.is_zero()) continue;
        // rightmost descent; the naive test oracle scans from the left instead
        long long t = -1;
        for (long long k = static_cast<long long>(w.size()) - 2; k >= 0; --k)
            if (w[static_cast<std::size_t>(k)] > w[static_cast<std::size_t>(k) + 1]) {
                t = k;
                break;
            }
        if (t < 0) {
            add_term(out, w, c);
            continue;
        }
        std::size_t pos = static_cast<std::size_t>(t);
        int j = w[pos], i = w[pos + 1];
        Word swapped = w;
        std::swap(swapped[pos], swapped[pos + 1]);
        work.emplace_back(std::move(swapped), c * Scalar::q_power(p.a(j, i)));
        for (const auto& ct : p.corr(j, i)) {
            Word corrected = w;
            corrected[pos] = ct.u;
            corrected[pos + 1] = ct.v;
            work.emplace_back(std::move(corrected), c * ct.coeff);
        }
    }
    return out;
}

class PBWElement {
  public:
    PBWElement() = default;
    explicit PBWElement(PresPtr p) : p_(std::move(p)) {}

    static PBWElement zero(PresPtr p) { return PBWElement(std::move(p)); }
    static PBWElement one(PresPtr p) {
        PBWElement e(std::move(p));
        e.terms_.emplace(Word{}, Scalar::one());
        return e;
    }
    static PBWElement generator(PresPtr p, int i) {
        return monomial(std::move(p), Word{i}, Scalar::one());
    }
    // normalizes, so the word may be in any order
    static PBWElement monomial(PresPtr p, const Word& w, const Scalar& c) {
        PBWElement e(p);
        e.terms_ = normalize_word(w, c, *p);
        return e;
    }

    const PresPtr& pres() const { return p_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    bool operator==(const PBWElement& o) const {
        return same_presentation(p_, o.p_) && terms_ == o.terms_;
    }
    bool operator!=(const PBWElement& o) const { return !(*this == o); }

    PBWElement operator-() const {
        PBWElement r(*this);
        for (auto& [w, c] : r.terms_) c = -c;
        return r;
    }

    PBWElement operator+(const PBWElement& o) const {
        require_same(o);
        PBWElement r(*this);
        for (const auto& [w, c] : o.terms_) add_term(r.terms_, w, c);
        return r;
    }
    PBWElement operator-(const PBWElement& o) const { return *this + (-o); }
    PBWElement& operator+=(const PBWElement& o) { return *this = *this + o; }
    PBWElement& operator-=(const PBWElement& o) { return *this = *this - o; }

    PBWElement operator*(const Scalar& s) const {
        PBWElement r(p_);
        if (s.is_zero()) return r;
        r.terms_ = terms_;
        for (auto& [w, c] : r.terms_) c *= s;
        return r;
    }

    PBWElement operator*(const PBWElement& o) const {
        require_same(o);
        PBWElement r(p_);
        for (const auto& [wa, ca] : terms_)
            for (const auto& [wb, cb] : o.terms_) {
                Word w = wa;
                w.insert(w.end(), wb.begin(), wb.end());
                TermMap part = normalize_word(w, ca * cb, *p_);
                for (const auto& [pw, pc] : part) add_term(r.terms_, pw, pc);
            }
        return r;
    }

    PBWElement pow(unsigned e) const {
        PBWElement r = one(p_);
        PBWElement b = *this;
        while (e) {
            if (e & 1u) r = r * b;
            b = b * b;
            e >>= 1u;
        }
        return r;
    }

    long long word_degree(const Word& w) const {
        long long d = 0;
        for (int g : w) d += p_->degree_of(g);
        return d;
    }

    bool is_homogeneous() const {
        if (terms_.empty()) return true;
        long long d = word_degree(terms_.begin()->first);
        for (const auto& [w, c] : terms_)
            if (word_degree(w) != d) return false;
        return true;
    }

    // total degree of a homogeneous element; max term degree otherwise
    long long degree() const {
        if (terms_.empty()) throw zero_element("degree of zero");
        long long d = 0;
        bool first = true;
        for (const auto& [w, c] : terms_) {
            long long wd = word_degree(w);
            if (first || wd > d) d = wd;
            first = false;
        }
        return d;
    }

    PBWElement homogeneous_component(long long d) const {
        PBWElement r(p_);
        for (const auto& [w, c] : terms_)
            if (word_degree(w) == d) r.terms_.emplace(w, c);
        return r;
    }

    std::string to_string() const;

  private:
    void require_same(const PBWElement& o) const {
        if (!same_presentation(p_, o.p_)) throw presentation_mismatch();
    }

    PresPtr p_;
    TermMap terms_;
    friend PBWElement apply_endomorphism(const std::vector<PBWElement>& images,
                                         const PBWElement& e);
};

inline PBWElement operator*(const Scalar& s, const PBWElement& e) { return e * s; }

// image of e under X_i -> images[i-1], extended multiplicatively
inline PBWElement apply_endomorphism(const std::vector<PBWElement>& images, const PBWElement& e) {
    if (images.size() != e.pres()->size())
        throw error("endomorphism needs one image per generator");
    for (const auto& im : images)
        if (!same_presentation(im.pres(), e.pres())) throw presentation_mismatch();
    PBWElement out(e.pres());
    for (const auto& [w, c] : e.terms()) {
        PBWElement prod = PBWElement::one(e.pres()) * c;
        for (int g : w) prod = prod * images[static_cast<std::size_t>(g - 1)];
        out += prod;
    }
    return out;
}

struct RelationReport {
    struct Entry {
        int j, i;
        PBWElement residual;
    };
    std::size_t pairs_checked = 0;
    std::vector<Entry> failures; // nonzero residuals only
    bool ok() const { return failures.empty(); }
};

// residual of each defining relation under X_i -> images[i-1]
inline RelationReport check_relations(const std::vector<PBWElement>& images, const PresPtr& p) {
    RelationReport rep;
    const int n = static_cast<int>(p->size());
    for (int j = 2; j <= n; ++j)
        for (int i = 1; i < j; ++i) {
            PBWElement lhs = images[static_cast<std::size_t>(j - 1)] *
                             images[static_cast<std::size_t>(i - 1)];
            PBWElement rhs = (images[static_cast<std::size_t>(i - 1)] *
                              images[static_cast<std::size_t>(j - 1)]) *
                             Scalar::q_power(p->a(j, i));
            for (const auto& ct : p->corr(j, i)) {
                PBWElement cw = images[static_cast<std::size_t>(ct.u - 1)] *
                                images[static_cast<std::size_t>(ct.v - 1)];
                rhs += cw * ct.coeff;
            }
            PBWElement res = lhs - rhs;
            ++rep.pairs_checked;
            if (!res.is_zero()) rep.failures.push_back({j, i, std::move(res)});
        }
    return rep;
}

// e is q-normal when e X_g = q^(m_g) X_g e for every generator; returns m
inline std::optional<std::vector<long long>> is_q_normal(const PBWElement& e) {
    if (e.is_zero()) throw zero_element("q-normality of zero");
    const PresPtr& p = e.pres();
    std::vector<long long> m;
    for (int g = 1; g <= static_cast<int>(p->size()); ++g) {
        PBWElement xg = PBWElement::generator(p, g);
        PBWElement lhs = e * xg;
        PBWElement rhs = xg * e;
        // candidate exponent from the leading terms, then verified globally
        if (lhs.is_zero() || rhs.is_zero()) return std::nullopt;
        const auto& [wl, cl] = *lhs.terms().begin();
        const auto& [wr, cr] = *rhs.terms().begin();
        if (wl != wr) return std::nullopt;
        auto pw = (cl / cr).as_q_power();
        if (!pw || pw->first != 1) return std::nullopt;
        if (lhs != rhs * Scalar::q_power(pw->second)) return std::nullopt;
        m.push_back(pw->second);
    }
    return m;
}

inline std::string PBWElement::to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [w, c] : terms_) {
        if (!s.empty()) s += " + ";
        std::string cs = c.to_string();
        if (w.empty()) {
            s += cs;
            continue;
        }
        if (cs != "1") s += "(" + cs + ")*";
        for (std::size_t k = 0; k < w.size(); ++k) {
            if (k) s += ".";
            s += "X" + std::to_string(w[k]);
        }
    }
    return s;
}

} // namespace qmx
