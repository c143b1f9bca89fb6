#include <catch2/catch_amalgamated.hpp>

#include "qmx/autos.hpp"
#include "qmx/rng.hpp"

using namespace qmx;

namespace {

struct DeltaTorus {
    PresPtr p;
    MatrixIndexing ix;
    ExpMatPtr a;
    std::vector<long long> d;

    explicit DeltaTorus(int n)
        : p(build_presentation(n)), ix(n), a(minor_torus(p, ix)), d(delta_degree_vector(ix)) {}

    TruncatedSeries zero(long long cut) const { return TruncatedSeries::zero(a, d, cut); }
    TruncatedSeries unit(long long cut) const { return TruncatedSeries::unit(a, d, cut); }
    TruncatedSeries mono(long long cut, ExpVec m, const Scalar& c) const {
        return TruncatedSeries::from_element(a, d, cut, TorusElement::monomial(a, std::move(m), c));
    }
};

// random central positive-degree series in the n=2 minor torus: the kernel is
// spanned by e_1 (degree 2) and e_2 - e_3 (degree 0), so a*e_1 + k*(e_2-e_3)
// with a >= 1 runs over the central monomials of positive degree
TruncatedSeries random_central(Rng& rng, const DeltaTorus& t, long long cut) {
    TruncatedSeries u = t.zero(cut);
    int terms = 1 + static_cast<int>(rng.below(2));
    for (int s = 0; s < terms; ++s) {
        long long a = 1 + static_cast<long long>(rng.below(2));
        long long k = rng.range(-1, 1);
        ExpVec m{a, k, -k, 0};
        Scalar c = Scalar::from_int(rng.range(-3, 3)) * Scalar::q_power(rng.range(-1, 1));
        u += t.mono(cut, std::move(m), c);
    }
    return u;
}

UnipotentAut random_central_aut(Rng& rng, const DeltaTorus& t, long long cut) {
    std::vector<TruncatedSeries> u;
    for (int i = 0; i < t.ix.N; ++i) u.push_back(random_central(rng, t, cut));
    return make_unipotent(std::move(u));
}

} // namespace

TEST_CASE("minor degree vector and grading coincidence", "[autos]") {
    REQUIRE(delta_degree_vector(MatrixIndexing(2)) == std::vector<long long>{2, 1, 1, 1});
    REQUIRE(delta_degree_vector(MatrixIndexing(3)) ==
            std::vector<long long>{3, 2, 1, 2, 2, 1, 1, 1, 1});
}

TEST_CASE("truncated series arithmetic", "[autos]") {
    DeltaTorus t(2);
    const long long D = 3;
    TruncatedSeries one = t.unit(D);
    TruncatedSeries u = t.mono(D, {1, 0, 0, 0}, Scalar::q());

    REQUIRE((one + u) * one == one + u);
    REQUIRE(one * (one + u) == one + u);

    // quotient semantics: degree-D elements square to zero
    TruncatedSeries top = t.mono(D, {0, 1, 1, 1}, Scalar::one());
    REQUIRE(top.min_degree() == D);
    REQUIRE((top * top).is_zero());

    // components are homogeneous and indexed by their own degree
    TruncatedSeries mixed = u + top;
    REQUIRE(mixed.components().size() == 2);
    REQUIRE(mixed.component(2).term_count() == 1);
    REQUIRE(mixed.component(3).term_count() == 1);
    REQUIRE(mixed.component(1).is_zero());

    // from_element drops what the cutoff quotients away
    TorusElement big = TorusElement::monomial(t.a, {2, 0, 0, 0}, Scalar::one());
    REQUIRE(TruncatedSeries::from_element(t.a, t.d, D, big).is_zero());

    REQUIRE_THROWS_AS(one + t.unit(D + 1), cutoff_mismatch);
    DeltaTorus t3(3);
    REQUIRE_THROWS_AS(one + t3.unit(D), matrix_mismatch);
}

TEST_CASE("geometric inversion of 1+u", "[autos]") {
    DeltaTorus t(2);

    REQUIRE(invert_one_plus(t.zero(4)).is_zero());

    // top-degree u truncates immediately: v = -u
    TruncatedSeries utop = t.mono(2, {1, 0, 0, 0}, Scalar::q());
    REQUIRE(invert_one_plus(utop) == -utop);

    // commutative toy torus with a central degree-1 generator: the three-term
    // alternating series appears verbatim at cutoff 3
    auto flat = std::make_shared<const ExponentMatrix>(
        std::vector<std::vector<long long>>{{0, 0}, {0, 0}});
    std::vector<long long> ones{1, 1};
    Scalar c = Scalar::q() + Scalar::one();
    TruncatedSeries u =
        TruncatedSeries::from_element(flat, ones, 3, TorusElement::monomial(flat, {1, 0}, c));
    TruncatedSeries expect =
        TruncatedSeries::from_element(flat, ones, 3, TorusElement::monomial(flat, {1, 0}, -c)) +
        TruncatedSeries::from_element(flat, ones, 3,
                                      TorusElement::monomial(flat, {2, 0}, c * c)) +
        TruncatedSeries::from_element(flat, ones, 3,
                                      TorusElement::monomial(flat, {3, 0}, -(c * c * c)));
    REQUIRE(invert_one_plus(u) == expect);

    // randomized two-sided inverse property
    Rng rng(41u);
    for (int trial = 0; trial < 20; ++trial) {
        TruncatedSeries w = random_central(rng, t, 5);
        TruncatedSeries one = t.unit(5);
        TruncatedSeries v = invert_one_plus(w);
        REQUIRE((one + v) * (one + w) == one);
        REQUIRE((one + w) * (one + v) == one);
    }

    // a degree-0 central component is outside the domain
    TruncatedSeries flatu = t.mono(3, {0, 1, -1, 0}, Scalar::one());
    REQUIRE_THROWS_AS(invert_one_plus(flatu), not_positively_graded);
}

TEST_CASE("unipotent automorphisms: construction and consistency", "[autos]") {
    DeltaTorus t(2);
    const long long D = 4;

    UnipotentAut id = identity_aut(t.a, t.d, D);
    REQUIRE(is_identity(id));
    REQUIRE(central_unit_check(id));

    // identity fixes arbitrary series
    Rng rng(7u);
    TruncatedSeries probe = t.mono(D, {0, 2, 1, 1}, Scalar::q()) + t.mono(D, {1, 0, 0, 1}, Scalar::one()) +
                            t.mono(D, {0, -1, 1, 0}, Scalar::from_int(3));
    REQUIRE(apply_unipotent(id, probe) == probe);

    // a noncentral shift violates the torus relations at construction...
    std::vector<TruncatedSeries> bad(4, t.zero(D));
    bad[0] = t.mono(D, {0, 1, 0, 0}, Scalar::one()); // u_1 = Y_2
    REQUIRE_THROWS_AS(make_unipotent(bad), consistency_violation);

    // ...and with the check bypassed it is flagged as noncentral
    UnipotentAut forced = make_unipotent(bad, false);
    REQUIRE_FALSE(central_unit_check(forced));

    // central shifts are always consistent
    for (int trial = 0; trial < 5; ++trial) REQUIRE(central_unit_check(random_central_aut(rng, t, D)));

    // degree-0 shifts are rejected
    std::vector<TruncatedSeries> flat(4, t.zero(D));
    flat[1] = t.mono(D, {0, 1, -1, 0}, Scalar::one());
    REQUIRE_THROWS_AS(make_unipotent(flat), not_positively_graded);
}

TEST_CASE("negative powers follow the geometric series", "[autos]") {
    DeltaTorus t(2);
    const long long D = 5;
    Rng rng(13u);
    for (int trial = 0; trial < 10; ++trial) {
        UnipotentAut phi = random_central_aut(rng, t, D);
        for (int i = 1; i <= 4; ++i) {
            ExpVec neg(4, 0);
            neg[static_cast<std::size_t>(i - 1)] = -1;
            TruncatedSeries got = apply_unipotent(phi, t.mono(D, neg, Scalar::one()));
            // sum of (-1)^r Y_i^-1 u_i^r
            TruncatedSeries want = t.zero(D);
            TruncatedSeries pw = t.unit(D);
            TruncatedSeries yinv = t.mono(D, neg, Scalar::one());
            for (long long r = 0; r <= D + t.d[static_cast<std::size_t>(i - 1)]; ++r) {
                want += (r % 2 ? -(yinv * pw) : yinv * pw);
                pw = pw * phi.u[static_cast<std::size_t>(i - 1)];
                if (pw.is_zero()) break;
            }
            REQUIRE(got == want);
        }
    }
}

TEST_CASE("composition, inversion, and the group laws", "[autos]") {
    DeltaTorus t(2);
    const long long D = 5;
    Rng rng(17u);
    UnipotentAut id = identity_aut(t.a, t.d, D);

    for (int trial = 0; trial < 10; ++trial) {
        UnipotentAut phi = random_central_aut(rng, t, D);
        UnipotentAut inv = inverse(phi);
        REQUIRE(compose(phi, inv) == id);
        REQUIRE(compose(inv, phi) == id);
        REQUIRE(compose(phi, id) == phi);
        REQUIRE(compose(id, phi) == phi);
    }
    for (int trial = 0; trial < 5; ++trial) {
        UnipotentAut a = random_central_aut(rng, t, D);
        UnipotentAut b = random_central_aut(rng, t, D);
        UnipotentAut c = random_central_aut(rng, t, D);
        REQUIRE(compose(compose(a, b), c) == compose(a, compose(b, c)));
        // applying the composite agrees with applying in sequence
        TruncatedSeries probe = t.mono(D, {0, 1, 0, 1}, Scalar::q()) + t.mono(D, {1, -1, 0, 0}, Scalar::one());
        REQUIRE(apply_unipotent(compose(a, b), probe) ==
                apply_unipotent(a, apply_unipotent(b, probe)));
    }
}

TEST_CASE("the scaling family fixes minors only up to central units", "[autos]") {
    // Phi_c(x) = (1 + c Delta) x is a genuine endomorphism since the quantum
    // determinant is central; on the minors it acts by (1 + c Delta)^(d_i)
    DeltaTorus t(2);
    PresPtr p = t.p;
    Scalar c = Scalar::q();
    PBWElement det = special_minor(p, t.ix, 1);
    PBWElement scale = PBWElement::one(p) + det * c;

    std::vector<PBWElement> images;
    for (int g = 1; g <= 4; ++g) images.push_back(scale * PBWElement::generator(p, g));
    REQUIRE(check_relations(images, p).ok());

    for (int i = 1; i <= 4; ++i) {
        PBWElement mi = special_minor(p, t.ix, i);
        PBWElement pw = PBWElement::one(p);
        for (long long s = 0; s < t.d[static_cast<std::size_t>(i - 1)]; ++s) pw = pw * scale;
        REQUIRE(apply_endomorphism(images, mi) == pw * mi);
    }
}

TEST_CASE("prescribed minor images determine at most one lift", "[autos]") {
    DeltaTorus t(2);
    const long long D = 6;
    Scalar c = Scalar::one();
    TruncatedSeries one = t.unit(D);
    TruncatedSeries base = one + t.mono(D, {1, 0, 0, 0}, c); // 1 + c Y_1

    auto family_images = [&](const Scalar& cc) {
        std::vector<TruncatedSeries> images;
        TruncatedSeries b = one + t.mono(D, {1, 0, 0, 0}, cc);
        for (int i = 1; i <= 4; ++i) {
            TruncatedSeries pw = one;
            for (long long s = 0; s < t.d[static_cast<std::size_t>(i - 1)]; ++s) pw = pw * b;
            ExpVec ei(4, 0);
            ei[static_cast<std::size_t>(i - 1)] = 1;
            images.push_back(pw.times_monomial(ei, Scalar::one()));
        }
        return images;
    };

    auto images = family_images(c);
    std::vector<TruncatedSeries> u;
    for (int i = 1; i <= 4; ++i) {
        ExpVec ei(4, 0);
        ei[static_cast<std::size_t>(i - 1)] = 1;
        u.push_back(unit_cofactor(images[static_cast<std::size_t>(i - 1)], ei));
    }
    UnipotentAut phi = make_unipotent(u);
    REQUIRE(central_unit_check(phi));

    // the lift reproduces the prescribed images...
    for (int i = 1; i <= 4; ++i) {
        ExpVec ei(4, 0);
        ei[static_cast<std::size_t>(i - 1)] = 1;
        REQUIRE(apply_unipotent(phi, t.mono(D, ei, Scalar::one())) ==
                images[static_cast<std::size_t>(i - 1)]);
    }
    // ...distinct image sets give distinct lifts...
    auto images2 = family_images(Scalar::q());
    std::vector<TruncatedSeries> u2;
    for (int i = 1; i <= 4; ++i) {
        ExpVec ei(4, 0);
        ei[static_cast<std::size_t>(i - 1)] = 1;
        u2.push_back(unit_cofactor(images2[static_cast<std::size_t>(i - 1)], ei));
    }
    REQUIRE(make_unipotent(u2) != phi);

    // ...and a perturbed image set admits no lift at all
    auto broken = images;
    broken[0] += t.mono(D, {0, 2, 0, 1}, Scalar::one());
    std::vector<TruncatedSeries> ub;
    for (int i = 1; i <= 4; ++i) {
        ExpVec ei(4, 0);
        ei[static_cast<std::size_t>(i - 1)] = 1;
        ub.push_back(unit_cofactor(broken[static_cast<std::size_t>(i - 1)], ei));
    }
    REQUIRE_THROWS_AS(make_unipotent(ub), consistency_violation);
}

TEST_CASE("no finite central inverse for nonzero positive shifts", "[autos]") {
    DeltaTorus t(2);

    REQUIRE(polynomial_inverse_obstruction(TorusElement::zero(t.a), t.d));
    REQUIRE_FALSE(polynomial_inverse_obstruction(
        TorusElement::monomial(t.a, {1, 0, 0, 0}, Scalar::q()), t.d));
    REQUIRE_FALSE(polynomial_inverse_obstruction(
        TorusElement::monomial(t.a, {1, 1, -1, 0}, Scalar::one()) +
            TorusElement::monomial(t.a, {2, 0, 0, 0}, Scalar::from_int(-2)),
        t.d));

    Rng rng(29u);
    for (int trial = 0; trial < 20; ++trial) {
        TruncatedSeries u = random_central(rng, t, 6);
        if (u.is_zero()) continue;
        TorusElement flat = TorusElement::zero(t.a);
        for (const auto& [deg, comp] : u.components()) flat += comp;
        REQUIRE_FALSE(polynomial_inverse_obstruction(flat, t.d));
    }

    REQUIRE_THROWS_AS(
        polynomial_inverse_obstruction(TorusElement::monomial(t.a, {0, 1, 0, 0}, Scalar::one()), t.d),
        not_central);
    REQUIRE_THROWS_AS(
        polynomial_inverse_obstruction(TorusElement::monomial(t.a, {0, 1, -1, 0}, Scalar::one()), t.d),
        not_positively_graded);
}
