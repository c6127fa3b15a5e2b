#pragma once

// Shared desk-scale fixtures: small algebras, sign actions, morphisms,
// and deformation seeds used across the unit and acceptance suites.
// Everything is templated over the scalar so the same shapes run over Q
// and over prime fields.

#include <memory>
#include <vector>

#include "defcomplex/algebra.hpp"
#include "defcomplex/morphism_complex.hpp"

namespace fixtures {

using namespace defc;

// k[x]/(x^2), basis {1, x}.
template <class K>
AlgebraPtr<K> dual_algebra(FieldCtx<K> F) {
    auto A = std::make_shared<Algebra<K>>(F, std::vector<std::string>{"1", "x"});
    A->sc(0, 0, 0) = F.one();
    A->sc(0, 1, 1) = F.one();
    A->sc(1, 0, 1) = F.one();
    return A;
}

// Full 2x2 matrix algebra, basis {E11, E12, E21, E22}.
template <class K>
AlgebraPtr<K> mat2_algebra(FieldCtx<K> F) {
    auto A = std::make_shared<Algebra<K>>(F, std::vector<std::string>{"E11", "E12", "E21", "E22"});
    auto row = [](std::size_t b) { return b / 2; };
    auto col = [](std::size_t b) { return b % 2; };
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b)
            if (col(a) == row(b)) A->sc(a, b, row(a) * 2 + col(b)) = F.one();
    return A;
}

// Group algebra of Z/2, basis {1, s} with s^2 = 1.
template <class K>
AlgebraPtr<K> kz2_algebra(FieldCtx<K> F) {
    auto A = std::make_shared<Algebra<K>>(F, std::vector<std::string>{"1", "s"});
    A->sc(0, 0, 0) = F.one();
    A->sc(0, 1, 1) = F.one();
    A->sc(1, 0, 1) = F.one();
    A->sc(1, 1, 0) = F.one();
    return A;
}

// Upper-triangular 2x2 matrices, basis {E11, E12, E22}.
template <class K>
AlgebraPtr<K> tri2_algebra(FieldCtx<K> F) {
    auto A = std::make_shared<Algebra<K>>(F, std::vector<std::string>{"E11", "E12", "E22"});
    A->sc(0, 0, 0) = F.one();
    A->sc(0, 1, 1) = F.one();
    A->sc(1, 2, 1) = F.one();
    A->sc(2, 2, 2) = F.one();
    return A;
}

// Unital k + V with V = span{x, y} and V.V = 0, basis {u, x, y}.
template <class K>
AlgebraPtr<K> fat3_algebra(FieldCtx<K> F) {
    auto A = std::make_shared<Algebra<K>>(F, std::vector<std::string>{"u", "x", "y"});
    A->sc(0, 0, 0) = F.one();
    A->sc(0, 1, 1) = F.one();
    A->sc(1, 0, 1) = F.one();
    A->sc(0, 2, 2) = F.one();
    A->sc(2, 0, 2) = F.one();
    return A;
}

// The ground field as an algebra, basis {1}.
template <class K>
AlgebraPtr<K> one_algebra(FieldCtx<K> F) {
    auto A = std::make_shared<Algebra<K>>(F, std::vector<std::string>{"1"});
    A->sc(0, 0, 0) = F.one();
    return A;
}

// k x k, basis of orthogonal idempotents.
template <class K>
AlgebraPtr<K> k2_algebra(FieldCtx<K> F) {
    auto A = std::make_shared<Algebra<K>>(F, std::vector<std::string>{"e0", "e1"});
    A->sc(0, 0, 0) = F.one();
    A->sc(1, 1, 1) = F.one();
    return A;
}

template <class K>
AlgebraPtr<K> k3_algebra(FieldCtx<K> F) {
    auto A = std::make_shared<Algebra<K>>(F, std::vector<std::string>{"e0", "e1", "e2"});
    for (std::size_t i = 0; i < 3; ++i) A->sc(i, i, i) = F.one();
    return A;
}

template <class K>
Matrix<K> diag(FieldCtx<K> F, std::vector<long long> d) {
    Matrix<K> m(F, d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m.at(i, i) = F.from_int(d[i]);
    return m;
}

// Z/2 sign actions. Over a field of characteristic 2 the generator is
// the identity and the closure collapses to the trivial group; callers
// that pair actions must keep the shapes aligned.
template <class K>
ActionPtr<K> sign_action_dual(AlgebraPtr<K> A) {
    return std::make_shared<GroupAction<K>>(close_group(A, {diag(A->field, {1, -1})}));
}

template <class K>
ActionPtr<K> sign_action_mat2(AlgebraPtr<K> A) {
    // Conjugation by diag(1,-1): E12 and E21 flip sign.
    return std::make_shared<GroupAction<K>>(close_group(A, {diag(A->field, {1, -1, -1, 1})}));
}

template <class K>
ActionPtr<K> sign_action_kz2(AlgebraPtr<K> A) {
    return std::make_shared<GroupAction<K>>(close_group(A, {diag(A->field, {1, -1})}));
}

template <class K>
ActionPtr<K> sign_action_tri2(AlgebraPtr<K> A) {
    return std::make_shared<GroupAction<K>>(close_group(A, {diag(A->field, {1, -1, 1})}));
}

template <class K>
ActionPtr<K> trivial(AlgebraPtr<K> A) {
    return std::make_shared<GroupAction<K>>(trivial_action(A));
}

// Trivial action on `target` with the same abstract group shape as
// `shape`: every element acts as the identity. This is how a group
// acting faithfully on one side of a morphism acts trivially on the
// other side.
template <class K>
ActionPtr<K> trivial_with_shape(const GroupAction<K>& shape, AlgebraPtr<K> target) {
    GroupAction<K> ga;
    ga.algebra = target;
    ga.elements.assign(shape.order(), Matrix<K>::identity(target->field, target->dim()));
    ga.identity_index = shape.identity_index;
    ga.mult_table = shape.mult_table;
    return std::make_shared<GroupAction<K>>(std::move(ga));
}

template <class K>
MorphismPtr<K> identity_morphism(AlgebraPtr<K> A, ActionPtr<K> act) {
    auto phi = std::make_shared<EquivariantMorphism<K>>();
    phi->source = phi->target = A;
    phi->source_action = phi->target_action = act;
    phi->matrix = Matrix<K>::identity(A->field, A->dim());
    return phi;
}

template <class K>
MorphismPtr<K> make_morphism(AlgebraPtr<K> A, AlgebraPtr<K> B, ActionPtr<K> ga, ActionPtr<K> gb, Matrix<K> m) {
    auto phi = std::make_shared<EquivariantMorphism<K>>();
    phi->source = A;
    phi->target = B;
    phi->source_action = ga;
    phi->target_action = gb;
    phi->matrix = std::move(m);
    return phi;
}

// Unit projection DUAL -> k (1 -> 1, x -> 0), with the sign group on
// the source acting trivially on the target.
template <class K>
MorphismPtr<K> proj_morphism(FieldCtx<K> F) {
    auto A = dual_algebra(F);
    auto B = one_algebra(F);
    auto ga = sign_action_dual(A);
    auto gb = trivial_with_shape(*ga, B);
    Matrix<K> m(F, 1, 2);
    m.at(0, 0) = F.one();
    return make_morphism(A, B, ga, gb, std::move(m));
}

// Unit inclusion k -> DUAL.
template <class K>
MorphismPtr<K> inc_morphism(FieldCtx<K> F) {
    auto A = one_algebra(F);
    auto B = dual_algebra(F);
    auto gb = sign_action_dual(B);
    auto ga = trivial_with_shape(*gb, A);
    Matrix<K> m(F, 2, 1);
    m.at(0, 0) = F.one();
    return make_morphism(A, B, ga, gb, std::move(m));
}

// Inclusion of upper-triangular matrices into MAT2, sign actions on
// both sides.
template <class K>
MorphismPtr<K> tri2_to_mat2_morphism(FieldCtx<K> F) {
    auto A = tri2_algebra(F);
    auto B = mat2_algebra(F);
    auto ga = sign_action_tri2(A);
    auto gb = sign_action_mat2(B);
    if (ga->order() != gb->order()) gb = trivial_with_shape(*ga, B);  // char 2 collapse
    Matrix<K> m(F, 4, 3);
    m.at(0, 0) = F.one();  // E11
    m.at(1, 1) = F.one();  // E12
    m.at(3, 2) = F.one();  // E22
    return make_morphism(A, B, ga, gb, std::move(m));
}

// Square-root seed on an identity morphism of DUAL: mu1(x, x) = 1, the
// infinitesimal of x^2 = t. The deformed product is associative on the
// nose, so the seed integrates with zero higher coefficients. The
// cochain is fixed by the sign action, so it lives in the equivariant
// complex as well.
template <class K>
MorphismCochain<K> sqrt_seed(const MorphismComplex<K>& C) {
    FieldCtx<K> F = C.morphism()->source->field;
    MorphismCochain<K> c = C.zero(2);
    c.u.at(1 * 2 + 1, 0) = F.one();
    c.v.at(1 * 2 + 1, 0) = F.one();
    return c;
}

// Obstructed seed on an identity morphism of FAT3: mu1(x, y) = x and
// nothing else. A cocycle, but its self-bracket is the 3-cochain
// sending (x, y, y) to x, which is not a coboundary over any field.
template <class K>
MorphismCochain<K> obstructed_seed(const MorphismComplex<K>& C) {
    FieldCtx<K> F = C.morphism()->source->field;
    MorphismCochain<K> c = C.zero(2);
    c.u.at(1 * 3 + 2, 1) = F.one();
    c.v.at(1 * 3 + 2, 1) = F.one();
    return c;
}

}  // namespace fixtures
