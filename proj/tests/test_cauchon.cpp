#include <catch2/catch_amalgamated.hpp>

#include "qmx/cauchon.hpp"
#include "qmx/rng.hpp"

using namespace qmx;

namespace {

Scalar qdiff() { return Scalar::q() - Scalar::q_power(-1); }

// random element generated strictly below the pivot
PBWElement random_below(Rng& rng, const PresPtr& p, int pivot, int max_terms = 3) {
    PBWElement e = PBWElement::zero(p);
    int terms = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_terms)));
    for (int t = 0; t < terms; ++t) {
        Word w;
        int len = static_cast<int>(rng.below(4));
        for (int s = 0; s < len; ++s) w.push_back(rng.range(1, pivot - 1));
        e += PBWElement::monomial(p, w,
                                  Scalar::from_int(rng.range(-3, 3)) *
                                      Scalar::q_power(rng.range(-2, 2)));
    }
    return e;
}

LocElement random_loc(Rng& rng, const PresPtr& p, int pivot) {
    LocElement e = LocElement::zero(p, pivot);
    int terms = 1 + static_cast<int>(rng.below(3));
    for (int t = 0; t < terms; ++t) {
        Word w;
        int len = static_cast<int>(rng.below(3));
        for (int s = 0; s < len; ++s) w.push_back(rng.range(1, static_cast<int>(p->size())));
        PBWElement part = PBWElement::monomial(
            p, w, Scalar::from_int(rng.range(-2, 2)) * Scalar::q_power(rng.range(-1, 1)));
        if (part.is_zero()) continue;
        e += LocElement::from_pbw(pivot, part).times_pivot_power(rng.range(-2, 2));
    }
    return e;
}

} // namespace

TEST_CASE("pivot row sigma and delta", "[cauchon]") {
    auto p = build_presentation(2);

    auto sd1 = sigma_delta(p, 4, PBWElement::generator(p, 1));
    REQUIRE(sd1.sigma == PBWElement::generator(p, 1)); // a_41 = 0
    REQUIRE(sd1.sigma_inverse == PBWElement::generator(p, 1));
    REQUIRE(sd1.delta == PBWElement::monomial(p, {2, 3}, -qdiff()));

    auto sd2 = sigma_delta(p, 4, PBWElement::generator(p, 2));
    REQUIRE(sd2.sigma == PBWElement::generator(p, 2) * Scalar::q_power(-1));
    REQUIRE(sd2.sigma_inverse == PBWElement::generator(p, 2) * Scalar::q());
    REQUIRE(sd2.delta.is_zero());
    REQUIRE(sigma_delta(p, 4, PBWElement::generator(p, 3)).delta.is_zero());

    // the derivation kills the unit, and scalars pass through sigma untouched
    auto sd_one = sigma_delta(p, 4, PBWElement::one(p) * Scalar::q());
    REQUIRE(sd_one.delta.is_zero());
    REQUIRE(sd_one.sigma == PBWElement::one(p) * Scalar::q());

    // an element touching the pivot is outside sigma/delta's domain
    REQUIRE_THROWS_AS(sigma_delta(p, 4, PBWElement::generator(p, 4)), index_out_of_scope);
    REQUIRE_THROWS_AS(sigma_delta(p, 3, PBWElement::monomial(p, {1, 3}, Scalar::one())),
                      index_out_of_scope);
}

TEST_CASE("sigma twists delta by q^-2", "[cauchon]") {
    Rng rng(11u);
    for (int n : {2, 3}) {
        auto p = build_presentation(n);
        int pivot = n * n;
        for (int trial = 0; trial < 20; ++trial) {
            PBWElement e = random_below(rng, p, pivot);
            PBWElement sig_del = sigma_delta(p, pivot, sigma_delta(p, pivot, e).delta).sigma;
            PBWElement del_sig = sigma_delta(p, pivot, sigma_delta(p, pivot, e).sigma).delta;
            REQUIRE(sig_del == del_sig * Scalar::q_power(-2));
        }
    }
}

TEST_CASE("pushing the pivot inverse past a polynomial", "[cauchon]") {
    auto p = build_presentation(2);

    // delta-free generator: a single term survives
    LocElement push2 = loc_push(4, PBWElement::generator(p, 2));
    REQUIRE(push2 == LocElement::from_pbw(4, PBWElement::generator(p, 2) * Scalar::q())
                         .times_pivot_power(-1));
    REQUIRE(push2.term_count() == 1);
    REQUIRE(loc_push(4, PBWElement::generator(p, 3)).term_count() == 1);

    // X_4^-1 X_1 picks up the two-step tail ended by delta's nilpotency
    LocElement push1 = loc_push(4, PBWElement::generator(p, 1));
    LocElement expected =
        LocElement::from_pbw(4, PBWElement::generator(p, 1)).times_pivot_power(-1) +
        LocElement::from_pbw(4, PBWElement::monomial(p, {2, 3}, Scalar::q_power(2) * qdiff()))
            .times_pivot_power(-2);
    REQUIRE(push1 == expected);

    // multiplying back by the pivot must recover the argument
    Rng rng(23u);
    for (int trial = 0; trial < 20; ++trial) {
        PBWElement e = random_below(rng, p, 4);
        REQUIRE(LocElement::from_pbw(4, PBWElement::generator(p, 4)) * loc_push(4, e) ==
                LocElement::from_pbw(4, e));
    }

    // the original algebra is not Ore-ready at an inner pivot
    REQUIRE_THROWS_AS(loc_push(2, PBWElement::generator(p, 1)), stage_shape_violation);
}

TEST_CASE("localized arithmetic at the pivot", "[cauchon]") {
    auto p = build_presentation(2);
    auto one = LocElement::from_pbw(4, PBWElement::one(p));

    // the polynomial subalgebra multiplies through the PBW engine
    Rng rng(31u);
    for (int trial = 0; trial < 20; ++trial) {
        PBWElement a = random_below(rng, p, 5);
        PBWElement b = random_below(rng, p, 5);
        REQUIRE(LocElement::from_pbw(4, a) * LocElement::from_pbw(4, b) ==
                LocElement::from_pbw(4, a * b));
    }

    // inverses cancel in both orders
    LocElement x4 = LocElement::from_pbw(4, PBWElement::generator(p, 4));
    LocElement x4inv = one.times_pivot_power(-1);
    REQUIRE(x4 * x4inv == one);
    REQUIRE(x4inv * x4 == one);

    // denominators of a right-denominator product add up: m = 2
    LocElement ax = LocElement::from_pbw(4, PBWElement::generator(p, 1)).times_pivot_power(-1);
    LocElement bx = LocElement::from_pbw(4, PBWElement::generator(p, 2)).times_pivot_power(-1);
    auto parts = (ax * bx).parts();
    REQUIRE(parts.size() == 1);
    REQUIRE(parts.begin()->first == 2);
    REQUIRE(parts.begin()->second ==
            PBWElement::monomial(p, {1, 2}, Scalar::q()));

    // interleaved inverses collapse: (A X^-1)(X B) = A B
    for (int trial = 0; trial < 10; ++trial) {
        PBWElement a = random_below(rng, p, 5);
        PBWElement b = random_below(rng, p, 5);
        REQUIRE((LocElement::from_pbw(4, a).times_pivot_power(-1)) *
                    (x4 * LocElement::from_pbw(4, b)) ==
                LocElement::from_pbw(4, a * b));
    }

    // associativity and distributivity on random localized triples
    for (int trial = 0; trial < 25; ++trial) {
        LocElement a = random_loc(rng, p, 4);
        LocElement b = random_loc(rng, p, 4);
        LocElement c = random_loc(rng, p, 4);
        REQUIRE((a * b) * c == a * (b * c));
        REQUIRE(a * (b + c) == a * b + a * c);
    }

    // the parts decomposition is faithful
    for (int trial = 0; trial < 15; ++trial) {
        LocElement e = random_loc(rng, p, 4);
        LocElement back = LocElement::zero(p, 4);
        for (const auto& [m, part] : e.parts())
            back += LocElement::from_pbw(4, part).times_pivot_power(-m);
        REQUIRE(back == e);
    }

    auto p3 = build_presentation(3);
    REQUIRE_THROWS_AS(LocElement::from_pbw(9, PBWElement::one(p3)) * one,
                      presentation_mismatch);
    REQUIRE_THROWS_AS(loc_push(4, PBWElement::one(p)) * loc_push(3, PBWElement::one(p)), error);
}

TEST_CASE("one tower step deletes the pivot derivation", "[cauchon]") {
    auto p = build_presentation(2);
    StageState st0 = initial_stage(p);
    REQUIRE(st0.k == 5);

    StageState st1 = delete_derivation_step(st0);
    REQUIRE(st1.k == 4);
    REQUIRE(st1.pres->corrections().empty());
    REQUIRE(st1.pres->exp() == p->exp());
    REQUIRE(st1.nilpotency == std::vector<int>{1, 0, 0, 0});
    REQUIRE(st1.expr.has_value());

    // the changed generator: X_1 - q X_2 X_3 X_4^-1, everything else copied
    LocElement expected =
        LocElement::from_pbw(4, PBWElement::generator(p, 1)) +
        LocElement::from_pbw(4, PBWElement::monomial(p, {2, 3}, -Scalar::q()))
            .times_pivot_power(-1);
    REQUIRE((*st1.expr)[0] == expected);
    for (int j = 2; j <= 4; ++j)
        REQUIRE((*st1.expr)[static_cast<std::size_t>(j - 1)] ==
                LocElement::from_pbw(4, PBWElement::generator(p, j)));

    // with nothing left to delete the remaining steps are identities
    StageState st2 = delete_derivation_step(st1);
    REQUIRE(st2.k == 3);
    REQUIRE(*st2.pres == *st1.pres);
    REQUIRE(st2.nilpotency == std::vector<int>{0, 0, 0, 0});
    for (int j = 1; j <= 4; ++j)
        REQUIRE((*st2.expr)[static_cast<std::size_t>(j - 1)] ==
                LocElement::from_pbw(3, PBWElement::generator(st1.pres, j)));

    StageState st3 = delete_derivation_step(st2);
    REQUIRE(st3.k == 2);
    REQUIRE_THROWS_AS(delete_derivation_step(st3), index_out_of_scope);
}

TEST_CASE("the full tower lands on the predicted torus", "[cauchon]") {
    // n = 1: nothing to do
    CauchonRun run1 = run_cauchon(1);
    REQUIRE(run1.stages.size() == 1);
    REQUIRE(run1.base_expr.has_value());
    REQUIRE(run1.final_pres->corrections().empty());

    // n = 2: one nontrivial pivot, composed expressions over the input algebra
    CauchonRun run2 = run_cauchon(2, true);
    REQUIRE(run2.stages.size() == 4);
    REQUIRE(run2.final_pres->corrections().empty());
    REQUIRE(run2.final_pres->exp() == run2.base_pres->exp());
    REQUIRE(run2.base_expr.has_value());
    LocElement xbar1 =
        LocElement::from_pbw(4, PBWElement::generator(run2.base_pres, 1)) +
        LocElement::from_pbw(4, PBWElement::monomial(run2.base_pres, {2, 3}, -Scalar::q()))
            .times_pivot_power(-1);
    REQUIRE((*run2.base_expr)[0] == xbar1);

    // n = 3: several nontrivial pivots, so no flat composite, but the tower
    // must still end corrections-free with the exponents intact
    CauchonRun run3 = run_cauchon(3, true);
    REQUIRE(run3.stages.size() == 9);
    REQUIRE(run3.final_pres->corrections().empty());
    REQUIRE(run3.final_pres->exp() == run3.base_pres->exp());
    REQUIRE_FALSE(run3.base_expr.has_value());

    int nontrivial = 0;
    for (const auto& st : run3.stages) {
        // every stage's corrections live strictly below the stage index, in
        // two-letter words strictly between their pair
        REQUIRE(stage_corrections_confined(*st.pres, st.k));
        for (const auto& [key, terms] : st.pres->corrections())
            for (const auto& t : terms) {
                REQUIRE(key.second < t.u);
                REQUIRE(t.v < key.first);
            }
        for (long long d : st.pres->degrees()) REQUIRE(d == 1);
        bool acted = false;
        for (int r : st.nilpotency) {
            REQUIRE(r <= 9);
            if (r > 0) acted = true;
        }
        if (acted) ++nontrivial;
    }
    REQUIRE(nontrivial >= 2);
}

TEST_CASE("minor identities of the final generators", "[cauchon]") {
    // n = 2: the denominator-cleared identities hold verbatim
    Ca1Report rep2 = verify_theorem_ca1(2);
    REQUIRE(rep2.identities_checked);
    REQUIRE(rep2.ok());
    REQUIRE(rep2.identities.size() == 4);
    REQUIRE(rep2.identities[0].s == 4);
    for (std::size_t t = 1; t < 4; ++t) REQUIRE_FALSE(rep2.identities[t].s.has_value());
    REQUIRE(rep2.commutations.size() == 16);

    // the worked instance: Xbar_1 X_4 = X_1 X_4 - q X_2 X_3 = Delta_1
    CauchonRun run2 = run_cauchon(2, true);
    MatrixIndexing ix2(2);
    LocElement cleared = (*run2.base_expr)[0] *
                         LocElement::from_pbw(4, PBWElement::generator(run2.base_pres, 4));
    REQUIRE(cleared ==
            LocElement::from_pbw(4, special_minor(run2.base_pres, ix2, 1)));

    REQUIRE(verify_theorem_ca1(1).ok());

    // n = 3: the minor side only — all 81 chain-product commutation exponents
    Ca1Report rep3 = verify_theorem_ca1(3);
    REQUIRE_FALSE(rep3.identities_checked);
    REQUIRE(rep3.commutations.size() == 81);
    REQUIRE(rep3.ok());
}
