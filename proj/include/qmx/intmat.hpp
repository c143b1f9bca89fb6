#pragma once

// Small exact integer-matrix toolkit: Hermite form (canonical lattice bases),
// Smith invariants (saturation tests), and integer kernels.  Row convention
// throughout: a lattice is the set of integer combinations of the rows.

#include <utility>
#include <vector>

#include "qmx/errors.hpp"
#include "qmx/poly.hpp" // Int, int_gcd

namespace qmx {

struct IntMat {
    std::size_t cols = 0;
    std::vector<std::vector<Int>> rows;

    IntMat() = default;
    explicit IntMat(std::size_t c) : cols(c) {}
    IntMat(std::size_t r, std::size_t c) : cols(c), rows(r, std::vector<Int>(c, Int(0))) {}
    IntMat(std::initializer_list<std::initializer_list<long long>> data) {
        for (const auto& r : data) {
            rows.emplace_back();
            for (long long v : r) rows.back().push_back(Int(v));
        }
        cols = rows.empty() ? 0 : rows[0].size();
        for (const auto& r : rows)
            if (r.size() != cols) throw matrix_mismatch("ragged initializer");
    }

    std::size_t nrows() const { return rows.size(); }
    Int& at(std::size_t i, std::size_t j) { return rows[i][j]; }
    const Int& at(std::size_t i, std::size_t j) const { return rows[i][j]; }

    bool operator==(const IntMat& o) const { return cols == o.cols && rows == o.rows; }

    IntMat transposed() const {
        IntMat t(cols, nrows());
        for (std::size_t i = 0; i < nrows(); ++i)
            for (std::size_t j = 0; j < cols; ++j) t.rows[j][i] = rows[i][j];
        return t;
    }

    static IntMat identity(std::size_t n) {
        IntMat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.rows[i][i] = 1;
        return m;
    }
};

namespace detail {

// g = x*a + y*b with g >= 0
inline void ext_gcd(const Int& a, const Int& b, Int& g, Int& x, Int& y) {
    if (b == 0) {
        if (a >= 0) { g = a; x = 1; y = 0; }
        else        { g = -a; x = -1; y = 0; }
        return;
    }
    Int x1, y1;
    ext_gcd(b, a % b, g, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
}

// unimodular combination of two rows zeroing out b = B[j][col] against a = B[i][col]
inline void row_gcd_step(IntMat& m, IntMat* u, std::size_t i, std::size_t j, std::size_t col) {
    const Int a = m.rows[i][col];
    const Int b = m.rows[j][col];
    if (b == 0) return;
    if (a == 0) {
        std::swap(m.rows[i], m.rows[j]);
        if (u) std::swap(u->rows[i], u->rows[j]);
        return;
    }
    Int g, x, y;
    ext_gcd(a, b, g, x, y);
    Int p = a / g, r = b / g;
    auto combine = [&](std::vector<Int>& ri, std::vector<Int>& rj) {
        for (std::size_t k = 0; k < ri.size(); ++k) {
            Int vi = x * ri[k] + y * rj[k];
            Int vj = -r * ri[k] + p * rj[k];
            ri[k] = std::move(vi);
            rj[k] = std::move(vj);
        }
    };
    combine(m.rows[i], m.rows[j]);
    if (u) combine(u->rows[i], u->rows[j]);
}

inline void negate_row(IntMat& m, IntMat* u, std::size_t i) {
    for (auto& v : m.rows[i]) v = -v;
    if (u) for (auto& v : u->rows[i]) v = -v;
}

inline void add_multiple(IntMat& m, IntMat* u, std::size_t dst, std::size_t src, const Int& k) {
    for (std::size_t c = 0; c < m.cols; ++c) m.rows[dst][c] += k * m.rows[src][c];
    if (u) for (std::size_t c = 0; c < u->cols; ++c) u->rows[dst][c] += k * u->rows[src][c];
}

// floor division for the above-pivot reduction (entries land in [0, pivot))
inline Int floor_div(const Int& a, const Int& b) {
    Int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

// in-place row Hermite form; returns pivot count, zero rows sink to the bottom
inline std::size_t hnf_in_place(IntMat& m, IntMat* u) {
    std::size_t rank = 0;
    for (std::size_t col = 0; col < m.cols && rank < m.nrows(); ++col) {
        for (std::size_t j = rank + 1; j < m.nrows(); ++j) row_gcd_step(m, u, rank, j, col);
        if (m.rows[rank][col] == 0) continue;
        if (m.rows[rank][col] < 0) negate_row(m, u, rank);
        for (std::size_t i = 0; i < rank; ++i) {
            Int f = floor_div(m.rows[i][col], m.rows[rank][col]);
            if (f != 0) add_multiple(m, u, i, rank, -f);
        }
        ++rank;
    }
    return rank;
}

} // namespace detail

// canonical Hermite basis of the row lattice (zero rows dropped)
inline IntMat hnf(IntMat m) {
    std::size_t rank = detail::hnf_in_place(m, nullptr);
    m.rows.resize(rank);
    return m;
}

// returns (H, U) with U*A = H, U unimodular; H keeps its zero rows so the
// trailing rows of U read off the left kernel
inline std::pair<IntMat, IntMat> hnf_with_transform(IntMat m) {
    IntMat u = IntMat::identity(m.nrows());
    detail::hnf_in_place(m, &u);
    return {std::move(m), std::move(u)};
}

// basis (canonical HNF) of { x : x * M = 0 }
inline IntMat row_kernel(const IntMat& m) {
    auto [h, u] = hnf_with_transform(m);
    IntMat ker(m.nrows());
    for (std::size_t i = 0; i < h.nrows(); ++i) {
        bool zero = true;
        for (const auto& v : h.rows[i])
            if (v != 0) { zero = false; break; }
        if (zero) ker.rows.push_back(u.rows[i]);
    }
    return hnf(std::move(ker));
}

inline std::size_t lattice_rank(const IntMat& basis) { return hnf(basis).nrows(); }

inline bool lattice_equal(const IntMat& a, const IntMat& b) {
    if (a.cols != b.cols) return false;
    return hnf(a) == hnf(b);
}

// true when every row of `sub` lies in the row lattice of `super`
inline bool lattice_contains(const IntMat& super, const IntMat& sub) {
    IntMat joint = super;
    for (const auto& r : sub.rows) joint.rows.push_back(r);
    return lattice_equal(joint, super);
}

// nonzero invariant factors d_1 | d_2 | ... of the integer matrix
inline std::vector<Int> smith_invariants(IntMat m) {
    using boost::multiprecision::abs;
    std::vector<Int> inv;
    std::size_t top = 0;
    while (top < m.nrows() && top < m.cols) {
        // locate a nonzero entry of least magnitude in the working block
        std::size_t pi = top, pj = top;
        Int best = 0;
        for (std::size_t i = top; i < m.nrows(); ++i)
            for (std::size_t j = top; j < m.cols; ++j) {
                if (m.rows[i][j] == 0) continue;
                Int a = abs(m.rows[i][j]);
                if (best == 0 || a < best) { best = a; pi = i; pj = j; }
            }
        if (best == 0) break;
        std::swap(m.rows[top], m.rows[pi]);
        for (std::size_t i = 0; i < m.nrows(); ++i) std::swap(m.rows[i][top], m.rows[i][pj]);

        bool clean = false;
        while (!clean) {
            clean = true;
            for (std::size_t i = top + 1; i < m.nrows(); ++i) {
                if (m.rows[i][top] == 0) continue;
                Int f = m.rows[i][top] / m.rows[top][top];
                detail::add_multiple(m, nullptr, i, top, -f);
                if (m.rows[i][top] != 0) { // remainder became the new, smaller pivot
                    std::swap(m.rows[top], m.rows[i]);
                    clean = false;
                }
            }
            for (std::size_t j = top + 1; j < m.cols; ++j) {
                if (m.rows[top][j] == 0) continue;
                Int f = m.rows[top][j] / m.rows[top][top];
                for (std::size_t i = 0; i < m.nrows(); ++i) m.rows[i][j] -= f * m.rows[i][top];
                if (m.rows[top][j] != 0) {
                    for (std::size_t i = 0; i < m.nrows(); ++i)
                        std::swap(m.rows[i][top], m.rows[i][j]);
                    clean = false;
                }
            }
        }
        // divisibility pass: pivot must divide the rest of the block
        bool redo = false;
        for (std::size_t i = top + 1; i < m.nrows() && !redo; ++i)
            for (std::size_t j = top + 1; j < m.cols && !redo; ++j)
                if (m.rows[i][j] % m.rows[top][top] != 0) {
                    detail::add_multiple(m, nullptr, top, i, Int(1));
                    redo = true;
                }
        if (redo) continue;
        inv.push_back(abs(m.rows[top][top]));
        ++top;
    }
    return inv;
}

// a sublattice is saturated exactly when all its invariant factors are 1
inline bool is_saturated(const IntMat& basis) {
    for (const auto& d : smith_invariants(basis))
        if (d != 1) return false;
    return true;
}

// smallest saturated sublattice containing the rows: double integer kernel
inline IntMat saturation(const IntMat& basis) {
    IntMat k = row_kernel(basis.transposed()); // right kernel, as rows
    if (k.nrows() == 0) return IntMat::identity(basis.cols); // full rational span
    return row_kernel(k.transposed());
}

} // namespace qmx
