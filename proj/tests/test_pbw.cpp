#include <catch2/catch_amalgamated.hpp>

#include "qmx/pbw.hpp"
#include "qmx/qmatrix.hpp"
#include "qmx/rng.hpp"

using namespace qmx;

namespace {

// Independent oracle: repeatedly locate the LEFTMOST out-of-order adjacent
// pair and apply the defining relation, recursing on every branch.  The
// engine scans from the right, so agreement is a real confluence check.
TermMap naive_normalize(const Word& w, const Scalar& c, const Presentation& p) {
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

PBWElement random_element(Rng& rng, const PresPtr& p, int max_terms, int max_len) {
    PBWElement e = PBWElement::zero(p);
    int terms = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_terms)));
    for (int t = 0; t < terms; ++t) {
        Word w;
        int len = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_len + 1)));
        for (int s = 0; s < len; ++s)
            w.push_back(1 + static_cast<int>(rng.below(p->size())));
        Scalar c = Scalar::q_power(rng.range(-2, 2)) * Scalar::from_int(rng.range(-3, 3));
        e += PBWElement::monomial(p, w, c);
    }
    return e;
}

} // namespace

TEST_CASE("two-letter rewrites match the defining relations", "[pbw]") {
    auto p = build_presentation(2);

    // x21 x11 becomes q^-1 x11 x21
    PBWElement e = PBWElement::monomial(p, {2, 1}, Scalar::one());
    PBWElement want = PBWElement::monomial(p, {1, 2}, Scalar::q_power(-1));
    REQUIRE(e == want);

    // x22 x11 picks up the correction term
    PBWElement f = PBWElement::monomial(p, {4, 1}, Scalar::one());
    PBWElement g = PBWElement::monomial(p, {1, 4}, Scalar::one()) -
                   PBWElement::monomial(p, {2, 3}, Scalar::q() - Scalar::q_power(-1));
    REQUIRE(f == g);

    // sorted words pass through untouched
    PBWElement h = PBWElement::monomial(p, {1, 2, 2, 4}, Scalar::q());
    REQUIRE(h.terms().size() == 1);
    REQUIRE(h.terms().begin()->first == Word{1, 2, 2, 4});
    REQUIRE(h.terms().begin()->second == Scalar::q());

    REQUIRE_THROWS_AS(PBWElement::monomial(p, {0, 1}, Scalar::one()), index_out_of_scope);
    REQUIRE_THROWS_AS(PBWElement::monomial(p, {5}, Scalar::one()), index_out_of_scope);
}

TEST_CASE("products of single generators", "[pbw]") {
    auto p = build_presentation(2);
    auto X = [&](int i) { return PBWElement::generator(p, i); };

    REQUIRE(X(3) * X(1) == PBWElement::monomial(p, {1, 3}, Scalar::q_power(-1)));
    REQUIRE(X(1) * X(3) == PBWElement::monomial(p, {1, 3}, Scalar::one()));
    REQUIRE(X(3) * X(2) == X(2) * X(3)); // opposite corners commute

    PBWElement one = PBWElement::one(p);
    Rng rng(5u);
    PBWElement e = random_element(rng, p, 3, 3); // arbitrary element
    REQUIRE(e * one == e);
    REQUIRE(one * e == e);
}

TEST_CASE("engine agrees with the naive leftmost rewriter", "[pbw]") {
    auto p = build_presentation(2);
    Rng rng(101u);
    for (int trial = 0; trial < 100; ++trial) {
        Word w;
        std::size_t len = 1 + rng.below(6);
        for (std::size_t t = 0; t < len; ++t)
            w.push_back(1 + static_cast<int>(rng.below(4)));
        Scalar c = Scalar::q_power(rng.range(-2, 2));
        REQUIRE(normalize_word(w, c, *p) == naive_normalize(w, c, *p));
    }
}

TEST_CASE("multiplication is associative and degree-additive", "[pbw]") {
    Rng rng(202u);
    for (int n : {2, 3}) {
        auto p = build_presentation(n);
        for (int trial = 0; trial < 100; ++trial) {
            PBWElement a = random_element(rng, p, 3, 3);
            PBWElement b = random_element(rng, p, 3, 3);
            PBWElement c = random_element(rng, p, 3, 3);
            REQUIRE((a * b) * c == a * (b * c));
        }
        // no zero divisors on homogeneous inputs, and degrees add
        for (int trial = 0; trial < 40; ++trial) {
            Word wa, wb;
            for (std::size_t t = 0; t < 1 + rng.below(3); ++t)
                wa.push_back(1 + static_cast<int>(rng.below(p->size())));
            for (std::size_t t = 0; t < 1 + rng.below(3); ++t)
                wb.push_back(1 + static_cast<int>(rng.below(p->size())));
            PBWElement a = PBWElement::monomial(p, wa, Scalar::one());
            PBWElement b = PBWElement::monomial(p, wb, Scalar::q() + Scalar::one());
            PBWElement ab = a * b;
            REQUIRE_FALSE(ab.is_zero());
            REQUIRE(ab.is_homogeneous());
            REQUIRE(ab.degree() == a.degree() + b.degree());
        }
    }
}

TEST_CASE("presentation mismatch is rejected", "[pbw]") {
    auto p2 = build_presentation(2);
    auto p3 = build_presentation(3);
    PBWElement a = PBWElement::generator(p2, 1);
    PBWElement b = PBWElement::generator(p3, 1);
    REQUIRE_THROWS_AS(a * b, presentation_mismatch);
    REQUIRE_THROWS_AS(a + b, presentation_mismatch);

    // equal content under distinct presentation objects still compares equal
    auto p2b = build_presentation(2);
    REQUIRE(PBWElement::generator(p2b, 1) == a);
    REQUIRE_NOTHROW(PBWElement::generator(p2b, 2) * a);
}

TEST_CASE("endomorphism application", "[pbw]") {
    auto p = build_presentation(2);
    MatrixIndexing ix(2);
    auto X = [&](int i) { return PBWElement::generator(p, i); };

    std::vector<PBWElement> id{X(1), X(2), X(3), X(4)};
    PBWElement dq = special_minor(p, ix, 1);
    REQUIRE(apply_endomorphism(id, dq) == dq);

    // transpose swaps the off-diagonal generators and fixes the determinant
    std::vector<PBWElement> tau{X(1), X(3), X(2), X(4)};
    REQUIRE(apply_endomorphism(tau, dq) == dq);

    // scaling images multiply a word by the product of its letter factors
    std::vector<PBWElement> scale{X(1) * Scalar::q(), X(2) * Scalar::q_power(2), X(3), X(4)};
    PBWElement w = PBWElement::monomial(p, {1, 1, 2}, Scalar::one());
    REQUIRE(apply_endomorphism(scale, w) ==
            PBWElement::monomial(p, {1, 1, 2}, Scalar::q_power(4)));
}

TEST_CASE("relation checking localizes failures", "[pbw]") {
    auto p = build_presentation(2);
    auto X = [&](int i) { return PBWElement::generator(p, i); };
    std::vector<PBWElement> id{X(1), X(2), X(3), X(4)};

    auto rep = check_relations(id, p);
    REQUIRE(rep.pairs_checked == 6);
    REQUIRE(rep.ok());

    std::vector<PBWElement> tau{X(1), X(3), X(2), X(4)};
    REQUIRE(check_relations(tau, p).ok());

    // X_1 -> X_1 + X_1X_2X_3: the cubic correction slides past X_2 and X_3
    // freely, so pairs (2,1) and (3,1) still close; the case-4 relation with
    // X_4 does not, and the residual lands exactly on pair (4,1)
    std::vector<PBWElement> bent{X(1) + PBWElement::monomial(p, {1, 2, 3}, Scalar::one()),
                                 X(2), X(3), X(4)};
    auto bad = check_relations(bent, p);
    REQUIRE(bad.failures.size() == 1);
    REQUIRE(bad.failures[0].j == 4);
    REQUIRE(bad.failures[0].i == 1);
    PBWElement want =
        PBWElement::monomial(p, {1, 2, 3, 4}, Scalar::q_power(-2) - Scalar::one()) -
        PBWElement::monomial(p, {2, 2, 3, 3}, Scalar::q() - Scalar::q_power(-1));
    REQUIRE(bad.failures[0].residual == want);
}

TEST_CASE("q-normality detection", "[pbw]") {
    auto p1 = build_presentation(1);
    REQUIRE(is_q_normal(PBWElement::generator(p1, 1)) == std::vector<long long>{0});

    auto p = build_presentation(2);
    MatrixIndexing ix(2);

    // x21 commutes past the generators with exponents (-1, 0, 0, +1)
    auto m = is_q_normal(PBWElement::generator(p, 2));
    REQUIRE(m.has_value());
    REQUIRE(*m == std::vector<long long>({-1, 0, 0, 1}));

    // the quantum determinant is central
    auto z = is_q_normal(special_minor(p, ix, 1));
    REQUIRE(z.has_value());
    REQUIRE(*z == std::vector<long long>({0, 0, 0, 0}));

    // x11 + x21 is not q-normal
    REQUIRE_FALSE(is_q_normal(PBWElement::generator(p, 1) + PBWElement::generator(p, 2))
                      .has_value());

    REQUIRE_THROWS_AS(is_q_normal(PBWElement::zero(p)), zero_element);
}

TEST_CASE("presentation construction validates corrections", "[pbw]") {
    // correction word starting at the rewritten letter is rejected
    std::vector<std::vector<long long>> exp(2, std::vector<long long>(2, 0));
    Presentation::CorrMap bad;
    bad[{2, 1}] = {{2, 2, Scalar::one()}};
    REQUIRE_THROWS_AS(Presentation(2, exp, bad), error);

    Presentation::CorrMap reversed;
    reversed[{2, 1}] = {{2, 1, Scalar::one()}};
    REQUIRE_THROWS_AS(Presentation(2, exp, reversed), error);

    REQUIRE_THROWS_AS(Presentation(2, exp, {}, {1, 0}), error); // bad grading
}
