#pragma once

// Seeded verification suites shared by the command-line front-end and the
// release gate. Each check re-derives a property two independent ways where
// the library offers a second route; a failed check carries a short detail
// string instead of throwing, so one bad property never hides the rest.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qmx/autos.hpp"
#include "qmx/cauchon.hpp"
#include "qmx/pbw.hpp"
#include "qmx/qmatrix.hpp"
#include "qmx/qtorus.hpp"
#include "qmx/rng.hpp"

namespace qmx {

struct CheckResult {
    std::string label;
    bool pass = false;
    std::string detail; // populated on failure
};

struct SuiteResult {
    std::string suite;
    int n = 0;
    std::uint64_t seed = 0;
    std::vector<CheckResult> checks;

    bool ok() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

namespace verify_detail {

// independent normal-form oracle: locate the LEFTMOST out-of-order adjacent
// pair and apply the defining relation, recursing on every branch. The engine
// rewrites from the right, so agreement is a genuine confluence check.
inline TermMap naive_normalize(const Word& w, const Scalar& c, const Presentation& p) {
    for (std::size_t t = 0; t + 1 < w.size(); ++t) {
        if (w[t] <= w[t + 1]) continue;
        int j = w[t], i = w[t + 1];
        TermMap out;
        Word swapped = w;
        std::swap(swapped[t], swapped[t + 1]);
        for (const auto& [ww, cc] : naive_normalize(swapped, c * Scalar::q_power(p.a(j, i)), p))
            add_term(out, ww, cc);
        for (const auto& ct : p.corr(j, i)) {
            Word corrected = w;
            corrected[t] = ct.u;
            corrected[t + 1] = ct.v;
            for (const auto& [ww, cc] : naive_normalize(corrected, c * ct.coeff, p))
                add_term(out, ww, cc);
        }
        return out;
    }
    TermMap out;
    add_term(out, w, c);
    return out;
}

inline Word random_word(Rng& rng, std::size_t n_gens, int max_len) {
    Word w;
    int len = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_len + 1)));
    for (int s = 0; s < len; ++s)
        w.push_back(1 + static_cast<int>(rng.below(n_gens)));
    return w;
}

inline Scalar random_scalar(Rng& rng) {
    Scalar c = Scalar::q_power(rng.range(-2, 2)) * Scalar::from_int(rng.range(-3, 3));
    return c.is_zero() ? Scalar::one() : c;
}

inline PBWElement random_element(Rng& rng, const PresPtr& p, int max_terms, int max_len) {
    PBWElement e = PBWElement::zero(p);
    int terms = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_terms)));
    for (int t = 0; t < terms; ++t)
        e += PBWElement::monomial(p, random_word(rng, p->size(), max_len), random_scalar(rng));
    return e;
}

inline HTorusElement random_torus_point(Rng& rng, int n) {
    std::vector<Scalar> c;
    for (int i = 0; i < 2 * n; ++i) c.push_back(random_scalar(rng));
    return HTorusElement(std::move(c), n);
}

// random central series of positive degree: integer combinations of the
// kernel-lattice basis, padded with copies of the full-determinant vector
// (always central, degree n) until the degree is positive
class CentralSampler {
  public:
    CentralSampler(ExpMatPtr a, std::vector<long long> d)
        : a_(std::move(a)), d_(std::move(d)), kernel_(center_basis(*a_)) {
        ExpVec det(d_.size(), 0);
        det[0] = 1; // flat index 1 is the full quantum determinant
        if (!is_central_exponent(*a_, det))
            throw consistency_violation("full determinant exponent is not central");
        det_ = std::move(det);
    }

    ExpVec monomial(Rng& rng) {
        ExpVec m(d_.size(), 0);
        for (const auto& k : kernel_) {
            long long c = rng.range(-1, 1);
            for (std::size_t i = 0; i < m.size(); ++i) m[i] += c * k[i];
        }
        while (torus_degree(d_, m) < 1)
            for (std::size_t i = 0; i < m.size(); ++i) m[i] += det_[i];
        return m;
    }

    TruncatedSeries series(Rng& rng, long long cutoff) {
        TruncatedSeries u = TruncatedSeries::zero(a_, d_, cutoff);
        int terms = 1 + static_cast<int>(rng.below(2));
        for (int s = 0; s < terms; ++s)
            u += TruncatedSeries::from_element(
                a_, d_, cutoff, TorusElement::monomial(a_, monomial(rng), random_scalar(rng)));
        return u;
    }

    UnipotentAut aut(Rng& rng, long long cutoff, std::size_t n_gens) {
        std::vector<TruncatedSeries> u;
        for (std::size_t i = 0; i < n_gens; ++i) u.push_back(series(rng, cutoff));
        return make_unipotent(std::move(u));
    }

    const ExpMatPtr& matrix() const { return a_; }
    const std::vector<long long>& degrees() const { return d_; }

  private:
    ExpMatPtr a_;
    std::vector<long long> d_;
    std::vector<ExpVec> kernel_;
    ExpVec det_;
};

// run the body and turn any exception into a failed check instead of a crash
template <typename F>
inline CheckResult checked(std::string label, F&& body) {
    CheckResult r;
    r.label = std::move(label);
    try {
        std::string detail;
        r.pass = body(detail);
        r.detail = r.pass ? std::string{} : detail;
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = e.what();
    }
    return r;
}

} // namespace verify_detail

inline SuiteResult verify_pbw(int n, std::uint64_t seed) {
    using namespace verify_detail;
    SuiteResult out{"pbw", n, seed, {}};
    PresPtr p = build_presentation(n);

    out.checks.push_back(checked("identity images satisfy every relation", [&](std::string& why) {
        std::vector<PBWElement> id;
        for (int g = 1; g <= static_cast<int>(p->size()); ++g)
            id.push_back(PBWElement::generator(p, g));
        auto rep = check_relations(id, p);
        if (!rep.ok()) why = "nonzero residual on a defining relation";
        return rep.ok();
    }));

    out.checks.push_back(checked("engine matches the naive rewriter on 100 words",
                                 [&](std::string& why) {
                                     Rng rng(seed);
                                     for (int t = 0; t < 100; ++t) {
                                         Word w = random_word(rng, p->size(), 6);
                                         Scalar c = random_scalar(rng);
                                         if (normalize_word(w, c, *p) != naive_normalize(w, c, *p)) {
                                             why = "normal forms diverge on word " +
                                                   std::to_string(t);
                                             return false;
                                         }
                                     }
                                     return true;
                                 }));

    out.checks.push_back(checked("multiplication associates on 100 triples", [&](std::string& why) {
        Rng rng(seed + 1);
        for (int t = 0; t < 100; ++t) {
            PBWElement a = random_element(rng, p, 3, 4);
            PBWElement b = random_element(rng, p, 3, 4);
            PBWElement c = random_element(rng, p, 3, 4);
            if ((a * b) * c != a * (b * c)) {
                why = "associativity fails on triple " + std::to_string(t);
                return false;
            }
        }
        return true;
    }));
    return out;
}

inline SuiteResult verify_minors(int n, std::uint64_t seed) {
    using namespace verify_detail;
    SuiteResult out{"minors", n, seed, {}};
    PresPtr p = build_presentation(n);
    MatrixIndexing ix(n);

    out.checks.push_back(checked("all minor pairs q-commute with chain-sum exponents",
                                 [&](std::string&) {
                                     minor_commutation_exponents(p, ix); // throws on any mismatch
                                     return true;
                                 }));

    out.checks.push_back(checked("border minors are q-normal", [&](std::string& why) {
        for (int m = 1; m <= 2 * n - 1; ++m)
            if (!is_q_normal(special_minor(p, ix, ix.f(m)))) {
                why = "border minor at level " + std::to_string(m) + " is not q-normal";
                return false;
            }
        return true;
    }));
    return out;
}

inline SuiteResult verify_torus(int n, std::uint64_t seed) {
    using namespace verify_detail;
    SuiteResult out{"torus", n, seed, {}};
    PresPtr p = build_presentation(n);
    MatrixIndexing ix(n);

    out.checks.push_back(checked("generator torus is saturated", [&](std::string&) {
        return saturation_of_torus(ExponentMatrix::from_presentation(*p));
    }));

    out.checks.push_back(checked("minor torus is saturated", [&](std::string&) {
        return saturation_of_torus(*minor_torus(p, ix));
    }));

    out.checks.push_back(checked("index-two sublattice is flagged unsaturated", [&](std::string&) {
        return !is_saturated(IntMat{{2, 0}});
    }));

    out.checks.push_back(checked("center kernel equals the paired-minor closed form",
                                 [&](std::string& why) {
                                     IntMat kernel = kernel_lattice(*minor_torus(p, ix));
                                     IntMat closed(static_cast<std::size_t>(ix.N));
                                     for (int i = 1; i < n; ++i) {
                                         std::vector<Int> row(static_cast<std::size_t>(ix.N), 0);
                                         row[static_cast<std::size_t>(ix.f(i) - 1)] = 1;
                                         row[static_cast<std::size_t>(ix.f(n + i) - 1)] = -1;
                                         closed.rows.push_back(std::move(row));
                                     }
                                     std::vector<Int> det(static_cast<std::size_t>(ix.N), 0);
                                     det[static_cast<std::size_t>(ix.f(n) - 1)] = 1;
                                     closed.rows.push_back(std::move(det));
                                     if (!lattice_equal(kernel, closed)) {
                                         why = "kernel lattice differs from the closed form";
                                         return false;
                                     }
                                     if (lattice_rank(kernel) != static_cast<std::size_t>(n)) {
                                         why = "kernel rank is not n";
                                         return false;
                                     }
                                     return true;
                                 }));
    return out;
}

inline SuiteResult verify_cauchon(int n, std::uint64_t seed) {
    using namespace verify_detail;
    SuiteResult out{"cauchon", n, seed, {}};

    out.checks.push_back(checked("tower terminates in the bare torus presentation",
                                 [&](std::string& why) {
                                     CauchonRun run = run_cauchon(n);
                                     for (const auto& st : run.stages)
                                         if (!stage_corrections_confined(*st.pres, st.k)) {
                                             why = "stage " + std::to_string(st.k) +
                                                   " carries corrections at or above its pivot";
                                             return false;
                                         }
                                     return run.final_pres->corrections().empty();
                                 }));

    out.checks.push_back(checked("final generators match the minor description",
                                 [&](std::string& why) {
                                     Ca1Report rep = verify_theorem_ca1(n);
                                     if (!rep.ok()) {
                                         why = "a commutation entry or identity failed";
                                         return false;
                                     }
                                     if (n <= 2 && !rep.identities_checked) {
                                         why = "denominator-cleared identities were not reachable";
                                         return false;
                                     }
                                     return true;
                                 }));
    return out;
}

inline SuiteResult verify_autos(int n, std::uint64_t seed) {
    using namespace verify_detail;
    SuiteResult out{"autos", n, seed, {}};
    PresPtr p = build_presentation(n);
    MatrixIndexing ix(n);
    const long long D = 5;

    out.checks.push_back(checked("compose and inverse obey the group laws (50 instances)",
                                 [&](std::string& why) {
                                     Rng rng(seed);
                                     CentralSampler cs(minor_torus(p, ix), delta_degree_vector(ix));
                                     UnipotentAut id = identity_aut(cs.matrix(), cs.degrees(), D);
                                     for (int t = 0; t < 50; ++t) {
                                         UnipotentAut phi =
                                             cs.aut(rng, D, static_cast<std::size_t>(ix.N));
                                         UnipotentAut inv = inverse(phi);
                                         if (compose(phi, inv) != id || compose(inv, phi) != id) {
                                             why = "inverse is not two-sided on instance " +
                                                   std::to_string(t);
                                             return false;
                                         }
                                     }
                                     return true;
                                 }));

    out.checks.push_back(checked(
        "negative powers follow the geometric series", [&](std::string& why) {
            Rng rng(seed + 1);
            CentralSampler cs(minor_torus(p, ix), delta_degree_vector(ix));
            const auto& d = cs.degrees();
            for (int t = 0; t < 10; ++t) {
                UnipotentAut phi = cs.aut(rng, D, static_cast<std::size_t>(ix.N));
                for (int i = 1; i <= ix.N; ++i) {
                    ExpVec neg(static_cast<std::size_t>(ix.N), 0);
                    neg[static_cast<std::size_t>(i - 1)] = -1;
                    TruncatedSeries yinv = TruncatedSeries::from_element(
                        cs.matrix(), d, D, TorusElement::monomial(cs.matrix(), neg, Scalar::one()));
                    TruncatedSeries got = apply_unipotent(phi, yinv);
                    TruncatedSeries want = TruncatedSeries::zero(cs.matrix(), d, D);
                    TruncatedSeries pw = TruncatedSeries::unit(cs.matrix(), d, D);
                    for (long long r = 0; r <= D + d[static_cast<std::size_t>(i - 1)]; ++r) {
                        want += (r % 2 ? -(yinv * pw) : yinv * pw);
                        pw = pw * phi.u[static_cast<std::size_t>(i - 1)];
                        if (pw.is_zero()) break;
                    }
                    if (got != want) {
                        why = "series mismatch at generator " + std::to_string(i);
                        return false;
                    }
                }
            }
            return true;
        }));

    out.checks.push_back(checked(
        "finite central inverses exist only at zero (100 samples)", [&](std::string& why) {
            Rng rng(seed + 2);
            CentralSampler cs(minor_torus(p, ix), delta_degree_vector(ix));
            if (!polynomial_inverse_obstruction(TorusElement::zero(cs.matrix()), cs.degrees())) {
                why = "zero shift rejected";
                return false;
            }
            for (int t = 0; t < 100; ++t) {
                TorusElement u =
                    TorusElement::monomial(cs.matrix(), cs.monomial(rng), random_scalar(rng));
                if (polynomial_inverse_obstruction(u, cs.degrees())) {
                    why = "a nonzero central shift claimed a finite inverse, sample " +
                          std::to_string(t);
                    return false;
                }
            }
            return true;
        }));

    out.checks.push_back(checked("torus-transpose images satisfy the relations (50 pairs)",
                                 [&](std::string& why) {
                                     Rng rng(seed + 3);
                                     for (int t = 0; t < 50; ++t) {
                                         HTorusElement h = random_torus_point(rng, n);
                                         int k = static_cast<int>(rng.below(2));
                                         if (!check_relations(eta(p, ix, h, k), p).ok()) {
                                             why = "eta image violates a relation, pair " +
                                                   std::to_string(t);
                                             return false;
                                         }
                                     }
                                     return true;
                                 }));

    out.checks.push_back(checked("transpose is an involution", [&](std::string&) {
        auto tau = transpose_tau(p, ix);
        std::vector<PBWElement> id;
        for (int g = 1; g <= ix.N; ++g) id.push_back(PBWElement::generator(p, g));
        return compose_images(tau, tau) == id;
    }));

    out.checks.push_back(checked("transpose conjugation swaps the torus blocks (10 points)",
                                 [&](std::string& why) {
                                     Rng rng(seed + 4);
                                     auto tau = transpose_tau(p, ix);
                                     for (int t = 0; t < 10; ++t) {
                                         HTorusElement h = random_torus_point(rng, n);
                                         auto conj = compose_images(
                                             tau, compose_images(torus_action(p, ix, h), tau));
                                         auto swapped = torus_action(p, ix, h.block_swapped());
                                         if (conj != swapped) {
                                             why = "conjugated action differs at point " +
                                                   std::to_string(t);
                                             return false;
                                         }
                                     }
                                     return true;
                                 }));
    return out;
}

inline std::vector<SuiteResult> verify_suites(const std::string& suite, int n,
                                              std::uint64_t seed) {
    if (suite == "pbw") return {verify_pbw(n, seed)};
    if (suite == "minors") return {verify_minors(n, seed)};
    if (suite == "torus") return {verify_torus(n, seed)};
    if (suite == "cauchon") return {verify_cauchon(n, seed)};
    if (suite == "autos") return {verify_autos(n, seed)};
    if (suite == "all")
        return {verify_pbw(n, seed), verify_minors(n, seed), verify_torus(n, seed),
                verify_cauchon(n, seed), verify_autos(n, seed)};
    throw error("unknown verification suite: " + suite);
}

} // namespace qmx
