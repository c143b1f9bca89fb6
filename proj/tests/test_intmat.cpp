#include <catch2/catch_amalgamated.hpp>

#include "qmx/intmat.hpp"
#include "qmx/rng.hpp"

using namespace qmx;

namespace {

IntMat random_mat(Rng& rng, std::size_t r, std::size_t c, int bound = 6) {
    IntMat m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m.rows[i][j] = Int(rng.range(-bound, bound));
    return m;
}

// random unimodular row operations applied to a copy
IntMat shuffled(Rng& rng, IntMat m) {
    for (int step = 0; step < 20; ++step) {
        std::size_t i = rng.below(m.nrows());
        std::size_t j = rng.below(m.nrows());
        if (i == j) continue;
        detail::add_multiple(m, nullptr, i, j, Int(rng.range(-3, 3)));
    }
    return m;
}

} // namespace

TEST_CASE("hermite form is a canonical lattice invariant", "[intmat]") {
    Rng rng(7u);
    for (int trial = 0; trial < 40; ++trial) {
        IntMat m = random_mat(rng, 3 + rng.below(3), 4);
        IntMat h = hnf(m);
        REQUIRE(hnf(h) == h);                    // idempotent
        REQUIRE(hnf(shuffled(rng, m)) == h);     // invariant under row moves
        REQUIRE(lattice_equal(m, h));
        REQUIRE(lattice_contains(m, h));
        REQUIRE(lattice_contains(h, m));
    }

    IntMat a{{2, 0}, {0, 2}};
    IntMat b{{1, 0}, {0, 1}};
    REQUIRE_FALSE(lattice_equal(a, b));
    REQUIRE(lattice_contains(b, a));
    REQUIRE_FALSE(lattice_contains(a, b));
}

TEST_CASE("transform pairs satisfy U*A = H", "[intmat]") {
    Rng rng(11u);
    for (int trial = 0; trial < 25; ++trial) {
        IntMat m = random_mat(rng, 4, 3);
        auto [h, u] = hnf_with_transform(m);
        REQUIRE(u.nrows() == 4);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 3; ++j) {
                Int s = 0;
                for (std::size_t k = 0; k < 4; ++k) s += u.rows[i][k] * m.rows[k][j];
                REQUIRE(s == h.rows[i][j]);
            }
    }
}

TEST_CASE("row kernels annihilate and have complementary rank", "[intmat]") {
    Rng rng(13u);
    for (int trial = 0; trial < 25; ++trial) {
        IntMat m = random_mat(rng, 4, 4);
        IntMat k = row_kernel(m);
        for (const auto& x : k.rows)
            for (std::size_t j = 0; j < m.cols; ++j) {
                Int s = 0;
                for (std::size_t i = 0; i < m.nrows(); ++i) s += x[i] * m.rows[i][j];
                REQUIRE(s == 0);
            }
        REQUIRE(k.nrows() + lattice_rank(m) == 4);
        REQUIRE(is_saturated(k)); // kernels of integer maps are always saturated
    }

    IntMat column_ones(2, 1);
    column_ones.rows[0][0] = 1;
    column_ones.rows[1][0] = 1;
    IntMat k = row_kernel(column_ones);
    REQUIRE(k == IntMat{{1, -1}});
}

TEST_CASE("smith invariants on pinned examples", "[intmat]") {
    REQUIRE(smith_invariants(IntMat::identity(3)) == std::vector<Int>{1, 1, 1});
    REQUIRE(smith_invariants(IntMat{{2, 0}, {0, 3}}) == std::vector<Int>{1, 6});
    REQUIRE(smith_invariants(IntMat{{2, 0}, {0, 4}}) == std::vector<Int>{2, 4});
    REQUIRE(smith_invariants(IntMat{{2, 4}, {4, 8}}) == std::vector<Int>{2});
    REQUIRE(smith_invariants(IntMat{{0, 0}, {0, 0}}).empty());

    // product of invariants equals |det| on a full-rank square example
    IntMat m{{2, 1, 0}, {0, 3, 1}, {1, 0, 4}};
    auto inv = smith_invariants(m);
    Int prod = 1;
    for (const auto& d : inv) prod *= d;
    REQUIRE(inv.size() == 3);
    REQUIRE(prod == 25); // |det| = 25
    REQUIRE(inv == std::vector<Int>{1, 1, 25});
}

TEST_CASE("saturation closes a lattice under rational scaling", "[intmat]") {
    // the index-2 sublattice span{(2,0)} of Z^2 saturates to span{(1,0)}
    IntMat l{{2, 0}};
    REQUIRE_FALSE(is_saturated(l));
    REQUIRE(saturation(l) == IntMat{{1, 0}});

    REQUIRE(is_saturated(IntMat{{1, 0}}));
    REQUIRE(is_saturated(IntMat{{2, 1}}));
    REQUIRE(saturation(IntMat{{2, 1}}) == IntMat{{2, 1}});

    Rng rng(17u);
    for (int trial = 0; trial < 25; ++trial) {
        IntMat m = random_mat(rng, 2, 4);
        IntMat s = saturation(m);
        REQUIRE(lattice_contains(s, m));
        REQUIRE(is_saturated(s));
        REQUIRE(lattice_rank(s) == lattice_rank(m));
        REQUIRE(saturation(s) == hnf(s));
    }
}
