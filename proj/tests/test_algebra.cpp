#include <catch2/catch_amalgamated.hpp>

#include "hhsq/algebra.hpp"
#include "hhsq/tensor_square.hpp"
#include "hhsq/vhat.hpp"

using namespace hhsq;

namespace {

std::shared_ptr<FreeAlgebra> t_u(int N = 12, std::uint32_t p = 2) {
    return std::make_shared<FreeAlgebra>(PrimeField(p), N,
                                         std::vector<FreeGenerator>{{"u", 2}});
}

void check_dd_zero(const Algebra& A, int up_to) {
    for (int n = 0; n + 2 <= up_to; ++n)
        for (Label l : A.basis(n)) {
            Element dd = A.d(A.d(l));
            INFO("d d " << A.name(l) << " = " << A.describe(dd));
            CHECK(dd.zero());
        }
}

void check_leibniz(const Algebra& A, int up_to) {
    const PrimeField& F = A.field();
    for (int i = 0; i <= up_to; ++i)
        for (int j = 0; i + j + 1 <= up_to; ++j)
            for (Label a : A.basis(i))
                for (Label b : A.basis(j)) {
                    Element lhs = A.d(A.mul(a, b));
                    Element rhs = A.add(A.mul(A.d(a), A.element(SparseVec::unit(b))),
                                        A.scale(A.mul(A.element(SparseVec::unit(a)), A.d(b)),
                                                F.sign(i)));
                    INFO(A.name(a) << " , " << A.name(b));
                    CHECK(lhs == rhs);
                }
}

}  // namespace

TEST_CASE("basis enumeration of free algebras") {
    auto A = t_u();
    REQUIRE(A->basis(0).size() == 1);
    CHECK(A->name(A->basis(0)[0]) == "1");
    CHECK(A->basis(1).empty());
    REQUIRE(A->basis(4).size() == 1);
    CHECK(A->name(A->basis(4)[0]) == "u^2");

    auto AH = std::make_shared<FreeAlgebra>(
        PrimeField(2), 10, std::vector<FreeGenerator>{{"x3", 3}, {"x5", 5}});
    auto b8 = AH->basis(8);
    REQUIRE(b8.size() == 2);
    CHECK(AH->name(b8[0]) == "x3*x5");
    CHECK(AH->name(b8[1]) == "x5*x3");

    CHECK_THROWS_AS(AH->basis(11), TruncationExceeded);
}

TEST_CASE("multiplication") {
    auto A = t_u();
    Label u = A->generator_label(0);
    Element uu = A->mul(u, u);
    CHECK(A->name(uu.v.terms[0].first) == "u^2");
    CHECK(A->mul(A->unit(), u) == A->element(SparseVec::unit(u)));

    auto T = std::make_shared<TensorSquareAlgebra>(A);
    Label u1 = T->pair_label(u, A->unit());
    Label _1u = T->pair_label(A->unit(), u);
    Element l = T->mul(u1, _1u);
    Element r = T->mul(_1u, u1);
    REQUIRE(l.v.nnz() == 1);
    CHECK(T->name(l.v.terms[0].first) == "u⊗u");
    CHECK(l == r);  // signs vanish mod 2

    CHECK_THROWS_AS(A->mul(A->basis(12)[0], u), TruncationExceeded);
}

TEST_CASE("derivation differential") {
    auto A = t_u();
    CHECK(A->d(A->unit()).zero());
    for (Label l : A->basis(8))
        CHECK(A->d(l).zero());

    // d(z) = x y forces d(z z) = (x y) z + (-1)^{|z|} z (x y)
    auto B = std::make_shared<FreeAlgebra>(
        PrimeField(3), 12, std::vector<FreeGenerator>{{"x", 2}, {"y", 3}, {"z", 4}});
    B->set_differential("z", {{{"x", "y"}, 1}});
    Label z = B->generator_label(2);
    Element dzz = B->d(B->mul(z, z));
    Element expect = B->add(
        B->mul(B->d(z), B->element(SparseVec::unit(z))),
        B->scale(B->mul(B->element(SparseVec::unit(z)), B->d(z)), B->field().sign(4)));
    CHECK(dzz == expect);
    CHECK(B->minimal());
    check_dd_zero(*B, 12);
    check_leibniz(*B, 9);
}

TEST_CASE("d o d vanishes on a model with relations in the differential") {
    // T(a4, a6, c7), d(c7) = a4 a4: the 1-connected minimal model of a wedge
    // of two spheres through degree 8
    auto M = std::make_shared<FreeAlgebra>(
        PrimeField(2), 12,
        std::vector<FreeGenerator>{{"a4", 4}, {"a6", 6}, {"c7", 7}});
    M->set_differential("c7", {{{"a4", "a4"}, 1}});
    CHECK(M->minimal());
    check_dd_zero(*M, 12);
    CHECK_FALSE(M->commutative());
}

TEST_CASE("table algebra: truncated polynomial ring") {
    auto T = std::make_shared<TableAlgebra>(
        PrimeField(2), 8,
        std::vector<TableAlgebra::BasisEntry>{{"1", 0}, {"u", 2}, {"u^2", 4}});
    T->set_product("u", "u", {{"u^2", 1}});
    T->set_product("u", "u^2", {});
    T->set_product("u^2", "u", {});
    T->set_product("u^2", "u^2", {});
    CHECK(T->mul(T->id("u"), T->id("u")) == T->element(SparseVec::unit(T->id("u^2"))));
    CHECK(T->mul(T->id("u"), T->id("u^2")).zero());
    CHECK(T->mul(T->unit(), T->id("u^2")) == T->element(SparseVec::unit(T->id("u^2"))));
    CHECK(T->commutative());
    CHECK(T->basis(2).size() == 1);
    CHECK(T->basis(3).empty());
}

TEST_CASE("tensor square involution") {
    for (std::uint32_t p : {2u, 3u}) {
        auto B = std::make_shared<FreeAlgebra>(
            PrimeField(p), 10, std::vector<FreeGenerator>{{"x", 2}, {"y", 3}});
        auto T = std::make_shared<TensorSquareAlgebra>(B);
        for (int n = 0; n <= 7; ++n)
            for (Label l : T->basis(n)) {
                // tau^2 = id
                CHECK(T->involution(T->involution(l)) == T->element(SparseVec::unit(l)));
                // tau is a chain map
                CHECK(T->involution(T->d(l)) == T->d(T->involution(l)));
            }
        // tau is an algebra map
        for (int i = 2; i <= 3; ++i)
            for (int j = 2; i + j <= 6; ++j)
                for (Label a : T->basis(i))
                    for (Label b : T->basis(j)) {
                        Element lhs = T->involution(T->mul(a, b));
                        Element rhs = T->mul(T->involution(a), T->involution(b));
                        INFO(T->name(a) << " , " << T->name(b) << " at p=" << p);
                        CHECK(lhs == rhs);
                    }
    }
}

TEST_CASE("build_vhat on T(u)") {
    auto A = t_u(9);
    auto V = build_vhat(A);
    // generators u' and u'' of degree 2, u'#u'' of degree 3
    REQUIRE(V->generator_count() == 3);
    CHECK(V->generator(V->primed(0)).degree == 2);
    CHECK(V->generator(V->doubleprimed(0)).degree == 2);
    Label sharp = V->generator_label(V->sharp(0, 0));
    CHECK(V->degree(sharp) == 3);
    CHECK(V->name(sharp) == "u'#u''");

    // d(u'#u'') = u'u'' + u''u'
    Element d = V->d(sharp);
    Label upp = V->generator_label(V->primed(0));
    Label udd = V->generator_label(V->doubleprimed(0));
    Element expect = V->add(V->mul(upp, udd), V->mul(udd, upp));
    CHECK(d == expect);

    // q kills the sharp part and hits the two copies
    CHECK(V->q(sharp).zero());
    auto T = V->tensor();
    CHECK(V->q(upp) == T->tensor(A->generator_label(0), A->unit()));
    CHECK(V->q(udd) == T->tensor(A->unit(), A->generator_label(0)));

    // tau fixes u'#u'' over F_2 and swaps the copies
    CHECK(V->involution(sharp) == V->element(SparseVec::unit(sharp)));
    CHECK(V->involution(upp) == V->element(SparseVec::unit(udd)));

    check_dd_zero(*V, 9);
}

TEST_CASE("vhat is a chain map target: q o d = d o q and q o tau = tau o q") {
    auto A = t_u(9);
    auto V = build_vhat(A);
    auto T = V->tensor();
    for (int n = 2; n <= 7; ++n)
        for (Label l : V->basis(n)) {
            CHECK(V->q(V->d(l)) == T->d(V->q(l)));
            CHECK(V->q(V->involution(l)) == T->involution(V->q(l)));
        }
}

TEST_CASE("vhat refuses sharp pairs with nonzero differential") {
    auto M = std::make_shared<FreeAlgebra>(
        PrimeField(2), 12, std::vector<FreeGenerator>{{"x", 2}, {"z", 4}});
    M->set_differential("z", {{{"x", "x"}, 1}});
    // z appears in a sharp pair within truncation (|z|+|x|-1 = 5 <= 12)
    CHECK_THROWS_AS(build_vhat(M), UnsupportedDifferential);
}

TEST_CASE("vhat sharp pairs are degree-capped") {
    // With N = 8 only a4#a4 (degree 7) exists; pairs touching a6 or c7
    // exceed the bound, so c7's differential is no obstruction.
    auto M = std::make_shared<FreeAlgebra>(
        PrimeField(2), 8, std::vector<FreeGenerator>{{"a4", 4}, {"a6", 6}, {"c7", 7}});
    M->set_differential("c7", {{{"a4", "a4"}, 1}});
    auto V = build_vhat(M);
    CHECK(V->has_sharp(0, 0));
    CHECK_FALSE(V->has_sharp(0, 1));
    CHECK_FALSE(V->has_sharp(2, 2));
    check_dd_zero(*V, 8);
}

TEST_CASE("associativity sampled across kinds") {
    auto A = t_u(10);
    auto V = build_vhat(A);
    auto T = V->tensor();
    auto sample = [&](const Algebra& R, int max_n) {
        for (int i = 0; i <= max_n; ++i)
            for (int j = 0; j <= max_n; ++j)
                for (int k = 0; k <= max_n; ++k) {
                    if (i + j + k > R.truncation())
                        continue;
                    for (Label a : R.basis(i))
                        for (Label b : R.basis(j))
                            for (Label c : R.basis(k)) {
                                Element ab_c = R.mul(R.mul(a, b),
                                                     R.element(SparseVec::unit(c)));
                                Element a_bc = R.mul(R.element(SparseVec::unit(a)),
                                                     R.mul(b, c));
                                CHECK(ab_c == a_bc);
                            }
                }
    };
    sample(*A, 4);
    sample(*T, 4);
    sample(*V, 3);
}
