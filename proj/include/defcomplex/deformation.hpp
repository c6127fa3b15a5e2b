#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "morphism_complex.hpp"

namespace defc {

// Truncated one-parameter deformation of an equivariant morphism
// phi: A -> B: families mu_t, nu_t of multiplications and phi_t of
// linear maps, stored by their coefficients above order zero. Index i
// of each list holds the order-(i+1) coefficient. verified_to is the
// largest order through which the deformation equations are known to
// hold; operations that assume a valid deformation require it to reach
// the stored order.
template <class K>
struct DeformationTriple {
    MorphismPtr<K> phi;
    std::size_t order = 0;
    std::vector<Cochain<K>> mu;         // degree-2 cochains on A
    std::vector<Cochain<K>> nu;         // degree-2 cochains on B
    std::vector<Matrix<K>> phi_higher;  // dim B x dim A
    std::size_t verified_to = 0;
};

// Degree-1 cochain view of a linear map A -> B with values along phi.
template <class K>
Cochain<K> map_as_cochain(const Matrix<K>& m, AlgebraPtr<K> A, BimodulePtr<K> mod_ab) {
    if (m.cols() != A->dim() || m.rows() != mod_ab->mod_dim)
        throw std::invalid_argument("map_as_cochain: shape mismatch");
    Cochain<K> c = zero_cochain(A, mod_ab, 1);
    for (std::size_t t = 0; t < m.cols(); ++t)
        for (std::size_t s = 0; s < m.rows(); ++s) c.at(t, s) = m.at(s, t);
    return c;
}

template <class K>
Matrix<K> cochain_as_map(const Cochain<K>& c) {
    if (c.degree != 1) throw std::invalid_argument("cochain_as_map: degree must be 1");
    Matrix<K> m(c.source->field, c.mod_dim(), c.arg_dim());
    for (std::size_t t = 0; t < c.arg_dim(); ++t)
        for (std::size_t s = 0; s < c.mod_dim(); ++s) m.at(s, t) = c.at(t, s);
    return m;
}

// f with g substituted into argument slot pos; both take arguments in
// the same algebra and g's values must be algebra-valued (regular
// bimodule), so the result is the usual insertion composite.
template <class K>
Cochain<K> comp_insert(const Cochain<K>& f, const Cochain<K>& g, std::size_t pos) {
    if (pos >= f.degree) throw std::invalid_argument("comp_insert: slot out of range");
    if (g.mod_dim() != f.arg_dim()) throw std::invalid_argument("comp_insert: g is not algebra-valued");
    std::size_t d = f.arg_dim(), n_out = f.degree + g.degree - 1;
    Cochain<K> out = zero_cochain(f.source, f.values, n_out);
    std::vector<std::size_t> T(n_out), fT(f.degree);
    for (std::size_t t = 0; t < out.tuples(); ++t) {
        tuple_decode(t, n_out, d, T.data());
        for (std::size_t k = 0; k < pos; ++k) fT[k] = T[k];
        for (std::size_t k = pos + 1; k < f.degree; ++k) fT[k] = T[k + g.degree - 1];
        std::size_t g_tuple = tuple_index(T.data() + pos, g.degree, d);
        for (std::size_t mid = 0; mid < d; ++mid) {
            const K& gv = g.at(g_tuple, mid);
            if (gv.is_zero()) continue;
            fT[pos] = mid;
            std::size_t f_tuple = tuple_index(fT.data(), f.degree, d);
            for (std::size_t m = 0; m < f.mod_dim(); ++m)
                if (!f.at(f_tuple, m).is_zero()) out.at(t, m) += gv * f.at(f_tuple, m);
        }
    }
    return out;
}

namespace detail {

// mu_i with mu_0 meaning the undeformed multiplication, and likewise
// for the other two families.
template <class K>
struct CoefficientView {
    const MorphismComplex<K>& C;
    const DeformationTriple<K>& d;
    Cochain<K> mu0, nu0;

    CoefficientView(const MorphismComplex<K>& cx, const DeformationTriple<K>& def)
        : C(cx), d(def),
          mu0(product_cochain(def.phi->source, cx.mod_AA())),
          nu0(product_cochain(def.phi->target, cx.mod_BB())) {}

    const Cochain<K>& mu(std::size_t i) const { return i == 0 ? mu0 : d.mu[i - 1]; }
    const Cochain<K>& nu(std::size_t i) const { return i == 0 ? nu0 : d.nu[i - 1]; }
    const Matrix<K>& phi(std::size_t i) const { return i == 0 ? d.phi->matrix : d.phi_higher[i - 1]; }
};

}  // namespace detail

template <class K>
struct ResidualTriple {
    std::size_t r = 0;
    Cochain<K> r1, r2, r3;
    bool ok() const { return r1.is_zero() && r2.is_zero() && r3.is_zero(); }
    std::size_t nonzero_coords() const {
        std::size_t n = 0;
        for (const auto* c : {&r1, &r2, &r3})
            for (const K& x : c->coords)
                if (!x.is_zero()) ++n;
        return n;
    }
};

template <class K>
struct VerifyReport {
    std::size_t checked_to = 0;
    std::vector<ResidualTriple<K>> residuals;          // orders 1..checked_to
    std::vector<std::string> invariance_failures;
    bool equations_pass() const {
        for (const auto& res : residuals)
            if (!res.ok()) return false;
        return true;
    }
    bool pass() const { return equations_pass() && invariance_failures.empty(); }
    std::size_t verified_prefix() const {
        std::size_t v = 0;
        for (const auto& res : residuals) {
            if (!res.ok()) break;
            v = res.r;
        }
        return v;
    }
};

namespace detail {

template <class K>
void require_same_morphism(const MorphismComplex<K>& C, const DeformationTriple<K>& d) {
    if (C.morphism() != d.phi)
        throw std::invalid_argument("deformation: complex and triple belong to different morphisms");
}

}  // namespace detail

// Order-by-order residuals of the three deformation equations:
//   R1_r = sum_{i+j=r} mu_i(mu_j x 1) - mu_i(1 x mu_j)
//   R2_r = likewise for nu
//   R3_r = sum_{i+j=r} phi_i mu_j - sum_{i+j+k=r} nu_i(phi_j x phi_k),
// all of which must vanish for a genuine deformation; invariance of
// every stored coefficient is checked alongside.
template <class K>
VerifyReport<K> verify(const MorphismComplex<K>& C, const DeformationTriple<K>& d, std::size_t r_max) {
    detail::require_same_morphism(C, d);
    const MorphismPtr<K>& phi = d.phi;
    if (d.mu.size() != d.order || d.nu.size() != d.order || d.phi_higher.size() != d.order)
        throw std::invalid_argument("verify: coefficient lists do not match the order");
    VerifyReport<K> rep;
    rep.checked_to = r_max;
    detail::CoefficientView<K> cf(C, d);
    for (std::size_t r = 1; r <= r_max; ++r) {
        ResidualTriple<K> res;
        res.r = r;
        res.r1 = zero_cochain(phi->source, C.mod_AA(), 3);
        res.r2 = zero_cochain(phi->target, C.mod_BB(), 3);
        res.r3 = zero_cochain(phi->source, C.mod_AB(), 2);
        for (std::size_t i = 0; i <= r; ++i) {
            std::size_t j = r - i;
            if (i <= d.order && j <= d.order) {
                res.r1 += comp_insert(cf.mu(i), cf.mu(j), 0) - comp_insert(cf.mu(i), cf.mu(j), 1);
                res.r2 += comp_insert(cf.nu(i), cf.nu(j), 0) - comp_insert(cf.nu(i), cf.nu(j), 1);
                res.r3 += postcompose_values(cf.mu(j), cf.phi(i), C.mod_AB());
            }
        }
        for (std::size_t i = 0; i <= r; ++i)
            for (std::size_t j = 0; i + j <= r; ++j) {
                std::size_t k = r - i - j;
                if (i > d.order || j > d.order || k > d.order) continue;
                std::vector<Matrix<K>> slots = {cf.phi(j), cf.phi(k)};
                res.r3 -= precompose_slots(cf.nu(i), slots, phi->source, C.mod_AB());
            }
        rep.residuals.push_back(std::move(res));
    }
    for (std::size_t i = 0; i < d.order; ++i) {
        if (!is_invariant(d.mu[i], *phi->source_action, *phi->source_action))
            rep.invariance_failures.push_back("mu[" + std::to_string(i + 1) + "]");
        if (!is_invariant(d.nu[i], *phi->target_action, *phi->target_action))
            rep.invariance_failures.push_back("nu[" + std::to_string(i + 1) + "]");
        bool equivariant = true;
        for (std::size_t g = 0; g < phi->source_action->order(); ++g)
            if (d.phi_higher[i] * phi->source_action->mat(g) != phi->target_action->mat(g) * d.phi_higher[i])
                equivariant = false;
        if (!equivariant) rep.invariance_failures.push_back("phi[" + std::to_string(i + 1) + "]");
    }
    return rep;
}

// Builds a triple and stamps verified_to by running the full check;
// desk-scale orders make the eager verification cheap.
template <class K>
DeformationTriple<K> make_deformation(const MorphismComplex<K>& C, std::vector<Cochain<K>> mu,
                                      std::vector<Cochain<K>> nu, std::vector<Matrix<K>> phi_higher) {
    DeformationTriple<K> d;
    d.phi = C.morphism();
    d.order = mu.size();
    d.mu = std::move(mu);
    d.nu = std::move(nu);
    d.phi_higher = std::move(phi_higher);
    VerifyReport<K> rep = verify(C, d, d.order);
    // Non-invariant coefficients disqualify the triple outright; it is
    // not an equivariant deformation at any order.
    d.verified_to = rep.invariance_failures.empty() ? rep.verified_prefix() : 0;
    return d;
}

template <class K>
DeformationTriple<K> trivial_deformation(const MorphismComplex<K>& C, std::size_t order) {
    std::vector<Cochain<K>> mu, nu;
    std::vector<Matrix<K>> ph;
    const MorphismPtr<K>& phi = C.morphism();
    for (std::size_t i = 0; i < order; ++i) {
        mu.push_back(zero_cochain(phi->source, C.mod_AA(), 2));
        nu.push_back(zero_cochain(phi->target, C.mod_BB(), 2));
        ph.push_back(Matrix<K>(phi->source->field, phi->target->dim(), phi->source->dim()));
    }
    DeformationTriple<K> d;
    d.phi = phi;
    d.order = order;
    d.mu = std::move(mu);
    d.nu = std::move(nu);
    d.phi_higher = std::move(ph);
    d.verified_to = order;
    return d;
}

template <class K>
struct InfinitesimalInfo {
    bool trivial = true;
    std::size_t n = 0;                         // first nonzero order
    std::optional<MorphismCochain<K>> cochain;  // (mu_n, nu_n, phi_n) as a degree-2 element
};

template <class K>
InfinitesimalInfo<K> infinitesimal_order(const MorphismComplex<K>& C, const DeformationTriple<K>& d) {
    detail::require_same_morphism(C, d);
    InfinitesimalInfo<K> info;
    for (std::size_t i = 0; i < d.order; ++i) {
        if (d.mu[i].is_zero() && d.nu[i].is_zero() && d.phi_higher[i].is_zero()) continue;
        info.trivial = false;
        info.n = i + 1;
        MorphismCochain<K> c;
        c.degree = 2;
        c.u = d.mu[i];
        c.v = d.nu[i];
        c.w = map_as_cochain(d.phi_higher[i], d.phi->source, C.mod_AB());
        info.cochain = std::move(c);
        break;
    }
    return info;
}

// The first nonzero coefficient triple of a valid deformation is a
// 2-cocycle of the morphism complex; vacuously true for the trivial one.
template <class K>
bool check_infinitesimal_cocycle(const MorphismComplex<K>& C, const DeformationTriple<K>& d) {
    auto info = infinitesimal_order(C, d);
    if (info.trivial) return true;
    return C.d_apply(*info.cochain).is_zero();
}

template <class K>
void require_verified(const DeformationTriple<K>& d) {
    if (d.verified_to < d.order)
        throw std::invalid_argument("deformation is not verified through its order");
}

// Obstruction cochain at order N+1, built from the known coefficients:
//   O1 = sum_{i+j=N+1, i,j>=1} mu_i(mu_j x 1) - mu_i(1 x mu_j)
//   O2 = likewise for nu
//   O3 = sum' nu_i(phi_j x phi_k) - sum_{i+j=N+1, i,j>=1} phi_i mu_j,
// where sum' ranges over i+j+k = N+1 without the three corner triples
// that have two zero indices. Extending the deformation one order means
// solving d2(x) = (O1, O2, O3) on invariant cochains.
template <class K>
MorphismCochain<K> obstruction(const MorphismComplex<K>& C, const DeformationTriple<K>& d) {
    detail::require_same_morphism(C, d);
    require_verified(d);
    const MorphismPtr<K>& phi = d.phi;
    std::size_t target = d.order + 1;
    detail::CoefficientView<K> cf(C, d);
    MorphismCochain<K> ob;
    ob.degree = 3;
    ob.u = zero_cochain(phi->source, C.mod_AA(), 3);
    ob.v = zero_cochain(phi->target, C.mod_BB(), 3);
    ob.w = zero_cochain(phi->source, C.mod_AB(), 2);
    for (std::size_t i = 1; i < target; ++i) {
        std::size_t j = target - i;
        ob.u += comp_insert(cf.mu(i), cf.mu(j), 0) - comp_insert(cf.mu(i), cf.mu(j), 1);
        ob.v += comp_insert(cf.nu(i), cf.nu(j), 0) - comp_insert(cf.nu(i), cf.nu(j), 1);
        ob.w -= postcompose_values(cf.mu(j), cf.phi(i), C.mod_AB());
    }
    for (std::size_t i = 0; i <= target; ++i)
        for (std::size_t j = 0; i + j <= target; ++j) {
            std::size_t k = target - i - j;
            std::size_t zeros = (i == 0) + (j == 0) + (k == 0);
            if (zeros >= 2) continue;
            if (i > d.order || j > d.order || k > d.order) continue;  // unreachable given the corner cut
            std::vector<Matrix<K>> slots = {cf.phi(j), cf.phi(k)};
            ob.w += precompose_slots(cf.nu(i), slots, phi->source, C.mod_AB());
        }
    return ob;
}

template <class K>
bool obstruction_is_cocycle(const MorphismComplex<K>& C, const DeformationTriple<K>& d) {
    return C.d_apply(obstruction(C, d)).is_zero();
}

template <class K>
struct ObstructionReport {
    std::size_t at_order = 0;  // the order that could not be reached
    MorphismCochain<K> cochain;
    bool is_cocycle = false;
    bool invariant = false;
    std::size_t rank_d2 = 0, rank_augmented = 0;  // augmented > plain certifies infeasibility
};

template <class K>
using ExtendOutcome = std::variant<DeformationTriple<K>, ObstructionReport<K>>;

// One order further, or the obstruction certificate that stops it. The
// canonical solver makes the extension a function of the input alone.
template <class K>
ExtendOutcome<K> extend_one_order(const MorphismComplex<K>& C, const DeformationTriple<K>& d) {
    MorphismCochain<K> ob = obstruction(C, d);
    std::vector<K> rhs = C.to_invariant_coords(ob);
    const Matrix<K>& D2 = C.d_matrix(2);
    auto x = solve_linear(D2, rhs);
    if (!x.has_value()) {
        ObstructionReport<K> rep;
        rep.at_order = d.order + 1;
        rep.cochain = ob;
        rep.is_cocycle = C.d_apply(ob).is_zero();
        rep.invariant = true;  // to_invariant_coords above would have thrown otherwise
        rep.rank_d2 = rank(D2);
        Matrix<K> aug(D2.field(), D2.rows(), D2.cols() + 1);
        for (std::size_t r = 0; r < D2.rows(); ++r) {
            for (std::size_t c = 0; c < D2.cols(); ++c) aug.at(r, c) = D2.at(r, c);
            aug.at(r, D2.cols()) = rhs[r];
        }
        rep.rank_augmented = rank(aug);
        return rep;
    }
    MorphismCochain<K> next = C.from_invariant_coords(2, *x);
    DeformationTriple<K> ext = d;
    ext.order = d.order + 1;
    ext.mu.push_back(next.u);
    ext.nu.push_back(next.v);
    ext.phi_higher.push_back(cochain_as_map(next.w));
    VerifyReport<K> chk = verify(C, ext, ext.order);
    if (!chk.pass()) throw std::logic_error("extend_one_order: extension failed its own verification");
    ext.verified_to = ext.order;
    return ext;
}

template <class K>
struct BuildResult {
    std::optional<DeformationTriple<K>> built;           // set on success
    std::size_t reached = 0;                             // last order attained
    std::optional<ObstructionReport<K>> blocked;         // set when obstructed
};

// Integrates a degree-2 cocycle to a deformation of the requested
// order, or stops at the first obstruction.
template <class K>
BuildResult<K> build_from_infinitesimal(const MorphismComplex<K>& C, const MorphismCochain<K>& seed,
                                        std::size_t max_order) {
    if (seed.degree != 2) throw std::invalid_argument("build_from_infinitesimal: seed must have degree 2");
    if (max_order == 0) throw std::invalid_argument("build_from_infinitesimal: max_order must be positive");
    C.to_invariant_coords(seed);  // throws when the seed is not invariant
    if (!C.d_apply(seed).is_zero())
        throw std::domain_error("build_from_infinitesimal: seed is not a cocycle");
    DeformationTriple<K> d =
        make_deformation(C, {seed.u}, {seed.v}, {cochain_as_map(seed.w)});
    if (d.verified_to < d.order) throw std::logic_error("build_from_infinitesimal: cocycle seed failed order one");
    BuildResult<K> res;
    while (d.order < max_order) {
        ExtendOutcome<K> out = extend_one_order(C, d);
        if (std::holds_alternative<ObstructionReport<K>>(out)) {
            res.reached = d.order;
            res.blocked = std::get<ObstructionReport<K>>(std::move(out));
            return res;
        }
        d = std::get<DeformationTriple<K>>(std::move(out));
    }
    res.reached = d.order;
    res.built = std::move(d);
    return res;
}

}  // namespace defc
