#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "defcomplex/equivalence.hpp"
#include "fixtures.hpp"

using namespace defc;
using namespace fixtures;

namespace {
const FieldCtx<Rat> Q;

Matrix<Rat> rand_matrix(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<long long> coeff(-3, 3);
    Matrix<Rat> m(Q, n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m.at(i, j) = Q.from_int(coeff(rng));
    return m;
}

bool zero_series(const std::vector<Matrix<Rat>>& s) {
    for (const auto& m : s)
        if (!m.is_zero()) return false;
    return true;
}
}  // namespace

TEST_CASE("series inverses multiply back to one") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 6; ++trial) {
        std::vector<Matrix<Rat>> s = {rand_matrix(rng, 3), rand_matrix(rng, 3), rand_matrix(rng, 3)};
        auto inv = truncated_inverse(s, Q, 3, 5);
        CHECK(zero_series(series_product(s, inv, Q, 3, 5)));
        CHECK(zero_series(series_product(inv, s, Q, 3, 5)));
    }

    // A single coefficient inverts to the alternating geometric series.
    std::mt19937_64 rng2(100);
    Matrix<Rat> psi = rand_matrix(rng2, 2);
    auto inv = truncated_inverse({psi}, Q, 2, 3);
    CHECK(inv[0] == -psi);
    CHECK(inv[1] == psi * psi);
    CHECK(inv[2] == -(psi * psi * psi));

    CHECK(truncated_inverse({}, Q, 2, 2).size() == 2);
    CHECK(zero_series(truncated_inverse({}, Q, 2, 2)));
}

TEST_CASE("conjugating the trivial deformation produces a coboundary infinitesimal") {
    auto A = dual_algebra(Q);
    MorphismComplex<Rat> C(identity_morphism(A, trivial(A)));
    Matrix<Rat> psi(Q, 2, 2);
    psi.at(1, 0) = Q.one();  // 1 -> x, not a derivation
    FormalIsomorphismPair<Rat> P = identity_pair(C, 2);
    P.psi[0] = psi;

    DeformationTriple<Rat> d0 = trivial_deformation(C, 2);
    DeformationTriple<Rat> conj = conjugate(C, P, d0);
    CHECK(conj.order == 2);
    CHECK(conj.verified_to == 2);

    // The order-one part is d1 applied to (-psi, 0, 0).
    MorphismCochain<Rat> gen = C.zero(1);
    gen.u = map_as_cochain(-psi, A, C.mod_AA());
    MorphismCochain<Rat> img = C.d_apply(gen);
    CHECK(conj.mu[0] == img.u);
    CHECK(conj.nu[0] == img.v);
    CHECK(conj.phi_higher[0] == cochain_as_map(img.w));
    CHECK_FALSE(conj.mu[0].is_zero());
    CHECK(conj.phi_higher[0] == -psi);

    EquivalenceReport<Rat> rep = is_equivalence(C, P, d0, conj);
    CHECK(rep.equivalent);
    CHECK(rep.checked_to == 2);
    EquivalenceReport<Rat> rep2 = is_equivalence(C, P, d0, d0);
    CHECK_FALSE(rep2.equivalent);
    CHECK(rep2.mismatched_orders == std::vector<std::size_t>{1});
}

TEST_CASE("conjugation shifts the first coefficient by a coboundary") {
    auto A = dual_algebra(Q);
    MorphismComplex<Rat> C(identity_morphism(A, trivial(A)));
    auto seed = sqrt_seed(C);
    DeformationTriple<Rat> d = make_deformation(C, {seed.u}, {seed.v}, {Matrix<Rat>(Q, 2, 2)});
    REQUIRE(d.verified_to == 1);

    Matrix<Rat> psi(Q, 2, 2);
    psi.at(1, 0) = Q.one();
    FormalIsomorphismPair<Rat> P = identity_pair(C, 1);
    P.psi[0] = psi;
    DeformationTriple<Rat> conj = conjugate(C, P, d);
    CHECK(conj.verified_to == 1);

    Cochain<Rat> delta_psi = coboundary_apply(map_as_cochain(psi, A, C.mod_AA()));
    CHECK(conj.mu[0] == d.mu[0] - delta_psi);

    ClassCompareReport<Rat> cc = infinitesimal_class_compare(C, d, conj);
    CHECK(cc.cohomologous);
    REQUIRE(cc.witness.has_value());
    MorphismCochain<Rat> diff = C.zero(2);
    diff.u = d.mu[0] - conj.mu[0];
    diff.v = d.nu[0] - conj.nu[0];
    diff.w = map_as_cochain(d.phi_higher[0] - conj.phi_higher[0], A, C.mod_AB());
    CHECK(C.d_apply(*cc.witness) == diff);
}

TEST_CASE("deformations in different cohomology classes are told apart") {
    auto A = dual_algebra(Q);
    MorphismComplex<Rat> C(identity_morphism(A, sign_action_dual(A)));
    auto seed = sqrt_seed(C);
    DeformationTriple<Rat> d = make_deformation(C, {seed.u}, {seed.v}, {Matrix<Rat>(Q, 2, 2)});
    DeformationTriple<Rat> d0 = trivial_deformation(C, 1);
    ClassCompareReport<Rat> cc = infinitesimal_class_compare(C, d, d0);
    CHECK_FALSE(cc.cohomologous);
    CHECK_FALSE(cc.witness.has_value());
}

TEST_CASE("a conjugate of the trivial deformation trivializes completely") {
    auto A = dual_algebra(Q);
    MorphismComplex<Rat> C(identity_morphism(A, sign_action_dual(A)));
    // Diagonal coefficients commute with the sign action.
    FormalIsomorphismPair<Rat> P = identity_pair(C, 3);
    P.psi[0] = diag(Q, {1, 0});
    P.theta[0] = diag(Q, {0, 2});
    P.psi[1] = diag(Q, {-1, 1});
    DeformationTriple<Rat> d0 = trivial_deformation(C, 3);
    DeformationTriple<Rat> d = conjugate(C, P, d0);
    CHECK_FALSE(infinitesimal_order(C, d).trivial);

    TrivializeResult<Rat> res = trivialize(C, d);
    CHECK(res.trivialized);
    CHECK(res.cleared_to == 3);
    CHECK(infinitesimal_order(C, res.final_form).trivial);
    REQUIRE(res.pair.has_value());
    EquivalenceReport<Rat> rep = is_equivalence(C, *res.pair, d, d0);
    CHECK(rep.equivalent);

    TrivializeResult<Rat> noop = trivialize(C, d0);
    CHECK(noop.trivialized);
    CHECK(infinitesimal_order(C, noop.final_form).trivial);
}

TEST_CASE("a nonzero class blocks trivialization with a rank certificate") {
    auto A = dual_algebra(Q);
    MorphismComplex<Rat> C(identity_morphism(A, sign_action_dual(A)));
    auto seed = sqrt_seed(C);
    DeformationTriple<Rat> d = make_deformation(C, {seed.u}, {seed.v}, {Matrix<Rat>(Q, 2, 2)});

    TrivializeOutcome<Rat> step = trivialize_step(C, d);
    CHECK(step.blocked());
    REQUIRE(step.nonzero_class.has_value());
    CHECK(*step.nonzero_class == seed);
    CHECK(step.rank_augmented == step.rank_d1 + 1);

    TrivializeResult<Rat> res = trivialize(C, d);
    CHECK_FALSE(res.trivialized);
    REQUIRE(res.blocked_step.has_value());
    CHECK(res.blocked_step->blocked());
    CHECK(res.final_form.mu[0] == d.mu[0]);
}

TEST_CASE("the correction slot folds into the target series as an inner derivation") {
    // delta0 of w along phi equals the inner derivation of w on the
    // target composed with phi.
    auto phi = tri2_to_mat2_morphism(Q);
    MorphismComplex<Rat> C(phi);
    std::mt19937_64 rng(4242);
    std::uniform_int_distribution<long long> coeff(-3, 3);
    for (int trial = 0; trial < 5; ++trial) {
        Cochain<Rat> w_ab = zero_cochain(phi->source, C.mod_AB(), 0);
        Cochain<Rat> w_bb = zero_cochain(phi->target, C.mod_BB(), 0);
        for (std::size_t s = 0; s < 4; ++s) {
            Rat c = Q.from_int(coeff(rng));
            w_ab.coords[s] = c;
            w_bb.coords[s] = c;
        }
        CHECK(cochain_as_map(coboundary_apply(w_ab)) == cochain_as_map(coboundary_apply(w_bb)) * phi->matrix);
    }

    // An infinitesimal of the form d1(0, 0, w) trivializes in one step,
    // whichever solution the solver picks.
    auto B = mat2_algebra(Q);
    MorphismComplex<Rat> Cm(identity_morphism(B, trivial(B)));
    MorphismCochain<Rat> gen = Cm.zero(1);
    gen.w.coords[1] = Q.one();  // w = E12
    MorphismCochain<Rat> z = Cm.d_apply(gen);
    CHECK_FALSE(z.is_zero());
    DeformationTriple<Rat> d = make_deformation(Cm, {z.u}, {z.v}, {cochain_as_map(z.w)});
    REQUIRE(d.verified_to == 1);
    TrivializeOutcome<Rat> step = trivialize_step(Cm, d);
    CHECK_FALSE(step.blocked());
    REQUIRE(step.reduced.has_value());
    CHECK(infinitesimal_order(Cm, *step.reduced).trivial);
}

TEST_CASE("pair validation pins shapes and equivariance") {
    auto A = dual_algebra(Q);
    MorphismComplex<Rat> C(identity_morphism(A, sign_action_dual(A)));
    FormalIsomorphismPair<Rat> P = identity_pair(C, 1);
    CHECK(validate_pair(C, P).empty());

    Matrix<Rat> off(Q, 2, 2);
    off.at(1, 0) = Q.one();  // anti-diagonal entry flips under the sign action
    P.psi[0] = off;
    auto bad = validate_pair(C, P);
    REQUIRE(bad.size() == 1);
    CHECK(bad[0] == "psi[1]: not equivariant");
    CHECK_THROWS_AS(conjugate(C, P, trivial_deformation(C, 1)), std::invalid_argument);

    FormalIsomorphismPair<Rat> Q2 = identity_pair(C, 1);
    Q2.psi[0] = Matrix<Rat>(Q, 3, 3);
    auto bad2 = validate_pair(C, Q2);
    REQUIRE(bad2.size() == 1);
    CHECK(bad2[0] == "psi[1]: wrong shape");

    MorphismComplex<Rat> other(identity_morphism(A, sign_action_dual(A)));
    CHECK(validate_pair(other, P).front() == "pair belongs to a different morphism");
}

TEST_CASE("rigidity is read off the second cohomology") {
    auto B = mat2_algebra(Q);
    MorphismComplex<Rat> Cm(identity_morphism(B, sign_action_mat2(B)));
    RigidityReport<Rat> r = rigidity_report(Cm, 7);
    CHECK(r.h2_dim == 0);
    CHECK(r.rigid_sufficient);
    CHECK(r.ingredient_route == std::array<std::size_t, 3>{0, 0, 0});
    CHECK(r.probe_order == 7);

    auto A = dual_algebra(Q);
    MorphismComplex<Rat> Cd(identity_morphism(A, sign_action_dual(A)));
    RigidityReport<Rat> r2 = rigidity_report(Cd, 3);
    CHECK(r2.h2_dim == 1);
    CHECK_FALSE(r2.rigid_sufficient);
    // The self-cohomology ingredients are nonzero here, so the
    // componentwise route stays silent as well.
    CHECK(r2.ingredient_route[0] == 1);
}

TEST_CASE("random pairs transport deformations with the expected bookkeeping") {
    std::mt19937_64 rng(314159);
    auto A = dual_algebra(Q);
    MorphismComplex<Rat> C(identity_morphism(A, trivial(A)));
    auto seed = sqrt_seed(C);
    DeformationTriple<Rat> base =
        make_deformation(C, {seed.u, zero_cochain(A, C.mod_AA(), 2)},
                         {seed.v, zero_cochain(A, C.mod_BB(), 2)},
                         {Matrix<Rat>(Q, 2, 2), Matrix<Rat>(Q, 2, 2)});
    REQUIRE(base.verified_to == 2);
    for (int trial = 0; trial < 6; ++trial) {
        FormalIsomorphismPair<Rat> P = identity_pair(C, 2);
        P.psi[0] = rand_matrix(rng, 2);
        P.psi[1] = rand_matrix(rng, 2);
        P.theta[0] = rand_matrix(rng, 2);
        P.theta[1] = rand_matrix(rng, 2);
        DeformationTriple<Rat> conj = conjugate(C, P, base);
        CHECK(conj.verified_to == 2);
        CHECK(is_equivalence(C, P, base, conj).equivalent);
        CHECK(infinitesimal_class_compare(C, base, conj).cohomologous);

        // Tampering with one coefficient must surface as a mismatch.
        DeformationTriple<Rat> tampered = conj;
        tampered.mu[1].coords[0] += Q.one();
        tampered = make_deformation(C, tampered.mu, tampered.nu, tampered.phi_higher);
        if (tampered.verified_to == 2) {
            auto rep = is_equivalence(C, P, base, tampered);
            CHECK_FALSE(rep.equivalent);
        }
    }
}
