#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "hhsq/linalg.hpp"

using namespace hhsq;

namespace {

SparseMatrix from_rows(const PrimeField& F, std::uint32_t rows, std::uint32_t cols,
                       const std::vector<std::vector<int>>& data) {
    SparseMatrix m(rows, cols);
    for (std::uint32_t r = 0; r < rows; ++r)
        for (std::uint32_t c = 0; c < cols; ++c)
            if (data[r][c])
                m.set(F, r, c, data[r][c]);
    return m;
}

SparseMatrix random_matrix(const PrimeField& F, std::mt19937& rng, std::uint32_t rows,
                           std::uint32_t cols, double density) {
    SparseMatrix m(rows, cols);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<std::uint32_t> val(1, F.p() - 1);
    for (std::uint32_t r = 0; r < rows; ++r)
        for (std::uint32_t c = 0; c < cols; ++c)
            if (coin(rng) < density)
                m.set(F, r, c, val(rng));
    return m;
}

SparseMatrix transpose(const SparseMatrix& m) {
    SparseMatrix t(m.cols, m.rows);
    for (std::uint32_t r = 0; r < m.rows; ++r)
        for (const auto& e : m.row[r].terms)
            t.row[e.first].terms.emplace_back(r, e.second);
    for (auto& r : t.row)
        std::sort(r.terms.begin(), r.terms.end());
    return t;
}

}  // namespace

TEST_CASE("rank on the stated examples") {
    PrimeField F(2);
    CHECK(rank(F, from_rows(F, 2, 2, {{1, 0}, {0, 1}})) == 2);
    CHECK(rank(F, from_rows(F, 3, 3, {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}})) == 0);
    // row3 = row1 + row2 over F_2
    CHECK(rank(F, from_rows(F, 3, 3, {{1, 1, 0}, {0, 1, 1}, {1, 0, 1}})) == 2);
}

TEST_CASE("kernel basis on the stated examples") {
    PrimeField F(2);
    CHECK(kernel_basis(F, from_rows(F, 2, 2, {{1, 0}, {0, 1}})).empty());
    CHECK(kernel_basis(F, SparseMatrix(2, 3)).size() == 3);
    auto k = kernel_basis(F, from_rows(F, 3, 3, {{1, 1, 0}, {0, 1, 1}, {1, 0, 1}}));
    REQUIRE(k.size() == 1);
    SparseVec expect;
    expect.terms = {{0, 1}, {1, 1}, {2, 1}};
    CHECK(k[0] == expect);
}

TEST_CASE("solve_consistent on the stated examples") {
    PrimeField F(2);
    SparseVec b;
    b.terms = {{0, 1}, {2, 1}};
    auto id = from_rows(F, 3, 3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    auto sol = solve_consistent(F, id, b);
    REQUIRE(sol);
    CHECK(*sol == b);

    CHECK_FALSE(solve_consistent(F, SparseMatrix(3, 3), b));

    auto m = from_rows(F, 3, 3, {{1, 1, 0}, {0, 1, 1}, {1, 0, 1}});
    auto s = solve_consistent(F, m, b);
    REQUIRE(s);
    CHECK(m.apply(F, *s) == b);
}

TEST_CASE("homology decomposition basics") {
    PrimeField F(2);
    // d_in = 0, d_out = 0 on a 3-dimensional space
    CHECK(HomologySpace(F, SparseMatrix(3, 0), SparseMatrix(0, 3)).dim() == 3);
    // d_in = identity kills everything
    auto id3 = from_rows(F, 3, 3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    CHECK(HomologySpace(F, id3, SparseMatrix(0, 3)).dim() == 0);

    // d_in : F_2 -> F_2^2, e -> (1,1); with d_out = 0 the quotient is
    // 1-dimensional with representative (1,0), the first cycle in basis
    // order completing the image.
    SparseMatrix din(2, 1);
    din.set(F, 0, 0, 1);
    din.set(F, 1, 0, 1);
    HomologySpace h(F, din, SparseMatrix(0, 2));
    REQUIRE(h.dim() == 1);
    CHECK(h.representatives()[0] == SparseVec::unit(0));

    // and with d_out(x, y) = x + y the homology vanishes: ker = im = {(1,1)}
    SparseMatrix dout(1, 2);
    dout.set(F, 0, 0, 1);
    dout.set(F, 0, 1, 1);
    CHECK(HomologySpace(F, din, dout).dim() == 0);
}

TEST_CASE("homology projection is inverse to representatives") {
    PrimeField F(2);
    SparseMatrix din(2, 1);
    din.set(F, 0, 0, 1);
    din.set(F, 1, 0, 1);
    HomologySpace h(F, din, SparseMatrix(0, 2));
    for (std::uint32_t i = 0; i < h.dim(); ++i) {
        auto p = h.project(h.representatives()[i]);
        REQUIRE(p);
        CHECK(*p == SparseVec::unit(i));
    }
    // a cycle homologous to the representative projects identically
    SparseVec v;
    v.terms = {{1, 1}};  // (0,1) = (1,0) + (1,1)
    auto p = h.project(v);
    REQUIRE(p);
    CHECK(*p == SparseVec::unit(0));
}

TEST_CASE("composition check") {
    PrimeField F(2);
    auto id2 = from_rows(F, 2, 2, {{1, 0}, {0, 1}});
    CHECK_THROWS_AS(HomologySpace(F, id2, id2), CompositionNotZero);
}

TEST_CASE("randomized invariants, both elimination paths") {
    for (std::uint32_t p : {2u, 3u, 5u}) {
        PrimeField F(p);
        std::mt19937 rng(20240915 + p);
        for (std::uint32_t cols : {10u, 80u}) {  // dense path and sparse path
            for (int trial = 0; trial < 8; ++trial) {
                auto m = random_matrix(F, rng, cols / 2 + 3, cols, 0.15);
                Eliminated e(F, m);
                auto kb = e.kernel_basis();
                CHECK(e.rank() + kb.size() == cols);
                CHECK(rank(F, transpose(m)) == e.rank());
                for (const auto& k : kb)
                    CHECK(m.apply(F, k).zero());
                // solve_consistent(m, m v) always succeeds
                SparseVec v;
                std::uniform_int_distribution<std::uint32_t> val(0, p - 1);
                for (std::uint32_t c = 0; c < cols; c += 3)
                    if (auto x = val(rng))
                        v.terms.emplace_back(c, x);
                SparseVec b = m.apply(F, v);
                auto sol = e.solve(b);
                REQUIRE(sol);
                CHECK(m.apply(F, *sol) == b);
            }
        }
    }
}
