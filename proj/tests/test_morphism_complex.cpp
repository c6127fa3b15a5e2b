#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "defcomplex/morphism_complex.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace defc;
using namespace fixtures;

namespace {
const FieldCtx<Rat> Q;
}

TEST_CASE("degree-1 differential spells out the intertwining defect") {
    auto A = dual_algebra(Q);
    auto triv = trivial(A);
    MorphismComplex<Rat> C(identity_morphism(A, triv));

    // d(psi, 0, 0) = (delta psi, 0, phi psi); with psi = id_A the first
    // component is the multiplication and the last is phi itself.
    MorphismCochain<Rat> c = C.zero(1);
    for (std::size_t i = 0; i < 2; ++i) c.u.at(i, i) = Q.one();
    MorphismCochain<Rat> d = C.d_apply(c);
    CHECK(d.u == product_cochain(A, C.mod_AA()));
    CHECK(d.v.is_zero());
    CHECK(d.w.at(0, 0) == Q.one());
    CHECK(d.w.at(1, 1) == Q.one());
    CHECK(d.w.at(0, 1) == Q.zero());

    // d(0, 0, m) = (0, 0, -delta m); DUAL is commutative so this dies.
    MorphismCochain<Rat> cm = C.zero(1);
    cm.w.coords[1] = Q.one();
    CHECK(C.d_apply(cm).is_zero());
}

TEST_CASE("the differential squares to zero") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long long> coeff(-3, 3);
    std::vector<MorphismPtr<Rat>> cases;
    auto A = dual_algebra(Q);
    cases.push_back(identity_morphism(A, sign_action_dual(A)));
    cases.push_back(proj_morphism(Q));
    cases.push_back(inc_morphism(Q));
    cases.push_back(tri2_to_mat2_morphism(Q));
    for (auto& phi : cases) {
        MorphismComplex<Rat> C(phi);
        for (std::size_t n = 1; n <= 2; ++n) {
            CHECK((C.d_matrix(n + 1) * C.d_matrix(n)).is_zero());
            auto dims = C.block_dims(n);
            std::size_t total = dims[0] + dims[1] + dims[2];
            for (int trial = 0; trial < 3; ++trial) {
                std::vector<Rat> coords(total);
                for (auto& x : coords) x = Q.from_int(coeff(rng));
                auto c = C.from_invariant_coords(n, coords);
                CHECK(C.d_apply(C.d_apply(c)).is_zero());
            }
        }
    }
}

TEST_CASE("trivial-group morphism cohomology matches the block oracle") {
    auto A = dual_algebra(Q);
    auto B = mat2_algebra(Q);
    auto T = tri2_algebra(Q);
    auto idA = identity_morphism(A, trivial(A));
    auto idB = identity_morphism(B, trivial(B));
    auto t2m = make_morphism(T, B, trivial(T), trivial(B), tri2_to_mat2_morphism(Q)->matrix);
    for (auto& phi : {idA, idB, t2m}) {
        MorphismComplex<Rat> C(phi);
        for (std::size_t n = 1; n <= 2; ++n) {
            // With trivial actions the invariant bases are identity
            // matrices, so even the assembled matrices must agree.
            CHECK(C.d_matrix(n) == oracle::morphism_d_matrix(*phi, n));
            CHECK(C.cohomology(n).dim_cohomology == oracle::morphism_cohomology_dim(*phi, n));
        }
    }
}

TEST_CASE("pinned cohomology of the identity on DUAL") {
    auto A = dual_algebra(Q);

    // Trivial group: three independent derivation pairs in degree 1,
    // one obstruction class in degree 2.
    MorphismComplex<Rat> C0(identity_morphism(A, trivial(A)));
    CHECK(C0.cohomology(1).dim_cohomology == 3);
    CHECK(C0.cohomology(2).dim_cohomology == 1);

    // Sign action: the invariant subcomplex is smaller but the degree-2
    // class survives.
    MorphismComplex<Rat> C(identity_morphism(A, sign_action_dual(A)));
    CHECK(C.block_dims(1) == std::array<std::size_t, 3>{2, 2, 1});
    CHECK(C.block_dims(2) == std::array<std::size_t, 3>{4, 4, 2});
    auto h1 = C.cohomology(1);
    CHECK(h1.dim_cocycles == 2);
    CHECK(h1.dim_coboundaries == 0);
    CHECK(h1.dim_cohomology == 2);
    auto h2 = C.cohomology(2);
    CHECK(h2.dim_cocycles == 4);
    CHECK(h2.dim_coboundaries == 3);
    CHECK(h2.dim_cohomology == 1);

    for (const auto& rep : h2.representatives) {
        CHECK(C.d_apply(rep).is_zero());
        CHECK(is_invariant(rep.u, *C.morphism()->source_action, *C.morphism()->source_action));
    }
}

TEST_CASE("identity on MAT2 has no deformation classes") {
    auto B = mat2_algebra(Q);
    for (auto act : {trivial(B), sign_action_mat2(B)}) {
        MorphismComplex<Rat> C(identity_morphism(B, act));
        CHECK(C.cohomology(2).dim_cohomology == 0);
    }
}

TEST_CASE("invariant coordinate round-trip") {
    MorphismComplex<Rat> C(proj_morphism(Q));
    for (std::size_t n = 1; n <= 2; ++n) {
        auto dims = C.block_dims(n);
        std::size_t total = dims[0] + dims[1] + dims[2];
        std::mt19937_64 rng(n);
        std::uniform_int_distribution<long long> coeff(-4, 4);
        std::vector<Rat> coords(total);
        for (auto& x : coords) x = Q.from_int(coeff(rng));
        auto c = C.from_invariant_coords(n, coords);
        CHECK(C.to_invariant_coords(c) == coords);
    }
    // A non-invariant cochain has no invariant coordinates.
    auto c = C.zero(1);
    c.u.at(0, 1) = Q.one();  // maps 1 to x: odd target under the sign action
    CHECK_THROWS_AS(C.to_invariant_coords(c), std::invalid_argument);
}

TEST_CASE("vanishing criterion against direct computation") {
    auto B = mat2_algebra(Q);
    MorphismComplex<Rat> CB(identity_morphism(B, sign_action_mat2(B)));
    auto rep = CB.vanishing_check(2);
    CHECK(rep.ingredient_dims == std::array<std::size_t, 3>{0, 0, 0});
    CHECK(rep.prediction_applicable);
    CHECK(rep.direct_dim == 0);
    CHECK(rep.consistent);

    auto A = dual_algebra(Q);
    MorphismComplex<Rat> CA(identity_morphism(A, sign_action_dual(A)));
    auto rep2 = CA.vanishing_check(2);
    CHECK_FALSE(rep2.prediction_applicable);  // H^2 of DUAL survives
    CHECK(rep2.direct_dim == 1);
    CHECK(rep2.consistent);

    CHECK_THROWS_AS(CA.vanishing_check(1), std::invalid_argument);
}
