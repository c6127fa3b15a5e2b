#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "deformation.hpp"

namespace defc {

// Formal isomorphism pair (Psi_t, Theta_t) acting on deformations of
// phi. Both series have the identity as constant term; the stored
// lists hold the coefficients above order zero, index i being the
// order-(i+1) coefficient. Psi_t deforms the identity of the source,
// Theta_t of the target.
template <class K>
struct FormalIsomorphismPair {
    MorphismPtr<K> phi;
    std::size_t order = 0;
    std::vector<Matrix<K>> psi;    // dim A x dim A
    std::vector<Matrix<K>> theta;  // dim B x dim B
};

template <class K>
FormalIsomorphismPair<K> identity_pair(const MorphismComplex<K>& C, std::size_t order) {
    FormalIsomorphismPair<K> p;
    p.phi = C.morphism();
    p.order = order;
    const MorphismPtr<K>& phi = p.phi;
    for (std::size_t i = 0; i < order; ++i) {
        p.psi.push_back(Matrix<K>(phi->source->field, phi->source->dim(), phi->source->dim()));
        p.theta.push_back(Matrix<K>(phi->target->field, phi->target->dim(), phi->target->dim()));
    }
    return p;
}

// Shape and equivariance diagnostics; an empty list means the pair is
// usable. The constant terms are identities by construction, so only
// the stored coefficients need checking.
template <class K>
std::vector<std::string> validate_pair(const MorphismComplex<K>& C, const FormalIsomorphismPair<K>& p) {
    std::vector<std::string> bad;
    if (p.phi != C.morphism()) {
        bad.push_back("pair belongs to a different morphism");
        return bad;
    }
    const MorphismPtr<K>& phi = p.phi;
    std::size_t da = phi->source->dim(), db = phi->target->dim();
    if (p.psi.size() != p.order || p.theta.size() != p.order) {
        bad.push_back("coefficient lists do not match the order");
        return bad;
    }
    for (std::size_t i = 0; i < p.order; ++i) {
        if (p.psi[i].rows() != da || p.psi[i].cols() != da)
            bad.push_back("psi[" + std::to_string(i + 1) + "]: wrong shape");
        if (p.theta[i].rows() != db || p.theta[i].cols() != db)
            bad.push_back("theta[" + std::to_string(i + 1) + "]: wrong shape");
    }
    if (!bad.empty()) return bad;
    for (std::size_t i = 0; i < p.order; ++i) {
        for (std::size_t g = 0; g < phi->source_action->order(); ++g)
            if (p.psi[i] * phi->source_action->mat(g) != phi->source_action->mat(g) * p.psi[i]) {
                bad.push_back("psi[" + std::to_string(i + 1) + "]: not equivariant");
                break;
            }
        for (std::size_t g = 0; g < phi->target_action->order(); ++g)
            if (p.theta[i] * phi->target_action->mat(g) != phi->target_action->mat(g) * p.theta[i]) {
                bad.push_back("theta[" + std::to_string(i + 1) + "]: not equivariant");
                break;
            }
    }
    return bad;
}

namespace detail {

// Series coefficient above order zero, or zero when out of range; the
// identity at order zero is implicit everywhere in this file.
template <class K>
Matrix<K> series_at(const std::vector<Matrix<K>>& s, std::size_t i, const FieldCtx<K>& F, std::size_t dim) {
    if (i == 0) return Matrix<K>::identity(F, dim);
    if (i <= s.size()) return s[i - 1];
    return Matrix<K>(F, dim, dim);
}

}  // namespace detail

// Coefficients of the product series (a_t)(b_t) through the given
// order, both factors and the result written above order zero.
template <class K>
std::vector<Matrix<K>> series_product(const std::vector<Matrix<K>>& a, const std::vector<Matrix<K>>& b,
                                      const FieldCtx<K>& F, std::size_t dim, std::size_t order) {
    std::vector<Matrix<K>> out;
    for (std::size_t r = 1; r <= order; ++r) {
        Matrix<K> c(F, dim, dim);
        for (std::size_t i = 0; i <= r; ++i)
            c += detail::series_at(a, i, F, dim) * detail::series_at(b, r - i, F, dim);
        out.push_back(std::move(c));
    }
    return out;
}

// Coefficients of the inverse series of 1 + sum s_i t^i through the
// given order: x_k = -sum_{i=1..k} s_i x_{k-i}.
template <class K>
std::vector<Matrix<K>> truncated_inverse(const std::vector<Matrix<K>>& s, const FieldCtx<K>& F, std::size_t dim,
                                         std::size_t order) {
    std::vector<Matrix<K>> inv;  // inv[k-1] is the order-k coefficient
    for (std::size_t k = 1; k <= order; ++k) {
        Matrix<K> x(F, dim, dim);
        for (std::size_t i = 1; i <= k; ++i)
            x -= detail::series_at(s, i, F, dim) * detail::series_at(inv, k - i, F, dim);
        inv.push_back(std::move(x));
    }
    return inv;
}

// The deformation carried over by the pair:
//   mu'_t  = Psi_t  mu_t (Psi_t^-1  x Psi_t^-1)
//   nu'_t  = Theta_t nu_t (Theta_t^-1 x Theta_t^-1)
//   phi'_t = Theta_t phi_t Psi_t^-1,
// truncated at the deformation's order. The result is rebuilt through
// make_deformation, so it re-verifies and carries its own stamp.
template <class K>
DeformationTriple<K> conjugate(const MorphismComplex<K>& C, const FormalIsomorphismPair<K>& p,
                               const DeformationTriple<K>& d) {
    detail::require_same_morphism(C, d);
    require_verified(d);
    auto bad = validate_pair(C, p);
    if (!bad.empty()) throw std::invalid_argument("conjugate: " + bad.front());
    const MorphismPtr<K>& phi = d.phi;
    const FieldCtx<K>& F = phi->source->field;
    std::size_t da = phi->source->dim(), db = phi->target->dim(), N = d.order;
    std::vector<Matrix<K>> chi = truncated_inverse(p.psi, F, da, N);
    std::vector<Matrix<K>> xi = truncated_inverse(p.theta, F, db, N);
    detail::CoefficientView<K> cf(C, d);
    auto psi_at = [&](std::size_t i) { return detail::series_at(p.psi, i, F, da); };
    auto theta_at = [&](std::size_t i) { return detail::series_at(p.theta, i, F, db); };
    auto chi_at = [&](std::size_t i) { return detail::series_at(chi, i, F, da); };
    auto xi_at = [&](std::size_t i) { return detail::series_at(xi, i, F, db); };

    std::vector<Cochain<K>> mu, nu;
    std::vector<Matrix<K>> ph;
    for (std::size_t r = 1; r <= N; ++r) {
        Cochain<K> mr = zero_cochain(phi->source, C.mod_AA(), 2);
        Cochain<K> nr = zero_cochain(phi->target, C.mod_BB(), 2);
        for (std::size_t i = 0; i <= r; ++i)
            for (std::size_t j = 0; i + j <= r; ++j)
                for (std::size_t k = 0; i + j + k <= r; ++k) {
                    std::size_t l = r - i - j - k;
                    if (j > N) continue;
                    std::vector<Matrix<K>> sa = {chi_at(k), chi_at(l)};
                    mr += postcompose_values(precompose_slots(cf.mu(j), sa, phi->source, C.mod_AA()),
                                             psi_at(i), C.mod_AA());
                    std::vector<Matrix<K>> sb = {xi_at(k), xi_at(l)};
                    nr += postcompose_values(precompose_slots(cf.nu(j), sb, phi->target, C.mod_BB()),
                                             theta_at(i), C.mod_BB());
                }
        mu.push_back(std::move(mr));
        nu.push_back(std::move(nr));
        Matrix<K> pr(F, db, da);
        for (std::size_t i = 0; i <= r; ++i)
            for (std::size_t j = 0; i + j <= r; ++j) {
                std::size_t k = r - i - j;
                if (j > N) continue;
                pr += theta_at(i) * cf.phi(j) * chi_at(k);
            }
        ph.push_back(std::move(pr));
    }
    return make_deformation(C, std::move(mu), std::move(nu), std::move(ph));
}

template <class K>
FormalIsomorphismPair<K> compose_pairs(const MorphismComplex<K>& C, const FormalIsomorphismPair<K>& after,
                                       const FormalIsomorphismPair<K>& first, std::size_t order) {
    for (const auto* p : {&after, &first}) {
        auto bad = validate_pair(C, *p);
        if (!bad.empty()) throw std::invalid_argument("compose_pairs: " + bad.front());
    }
    const MorphismPtr<K>& phi = C.morphism();
    const FieldCtx<K>& F = phi->source->field;
    FormalIsomorphismPair<K> out;
    out.phi = phi;
    out.order = order;
    out.psi = series_product(after.psi, first.psi, F, phi->source->dim(), order);
    out.theta = series_product(after.theta, first.theta, F, phi->target->dim(), order);
    return out;
}

template <class K>
struct EquivalenceReport {
    std::vector<std::string> pair_failures;
    std::size_t checked_to = 0;
    std::vector<std::size_t> mismatched_orders;
    bool equivalent = false;
};

// Does the pair carry `from` into `to`? Coefficients are compared
// through the smaller of the two orders.
template <class K>
EquivalenceReport<K> is_equivalence(const MorphismComplex<K>& C, const FormalIsomorphismPair<K>& p,
                                    const DeformationTriple<K>& from, const DeformationTriple<K>& to) {
    EquivalenceReport<K> rep;
    rep.pair_failures = validate_pair(C, p);
    if (!rep.pair_failures.empty()) return rep;
    require_verified(from);
    require_verified(to);
    DeformationTriple<K> conj = conjugate(C, p, from);
    rep.checked_to = std::min(conj.order, to.order);
    for (std::size_t r = 1; r <= rep.checked_to; ++r) {
        bool same = conj.mu[r - 1] == to.mu[r - 1] && conj.nu[r - 1] == to.nu[r - 1] &&
                    conj.phi_higher[r - 1] == to.phi_higher[r - 1];
        if (!same) rep.mismatched_orders.push_back(r);
    }
    rep.equivalent = rep.mismatched_orders.empty();
    return rep;
}

template <class K>
struct ClassCompareReport {
    bool cohomologous = false;
    // degree-1 cochain with d1(witness) = difference of the two
    // order-one coefficient triples, when one exists
    std::optional<MorphismCochain<K>> witness;
};

// Equivalent deformations have cohomologous infinitesimals; this
// checks the converse-side certificate directly on the order-one
// coefficients of two deformations of the same morphism.
template <class K>
ClassCompareReport<K> infinitesimal_class_compare(const MorphismComplex<K>& C, const DeformationTriple<K>& a,
                                                  const DeformationTriple<K>& b) {
    detail::require_same_morphism(C, a);
    detail::require_same_morphism(C, b);
    MorphismCochain<K> za = C.zero(2), zb = C.zero(2);
    if (a.order >= 1) {
        za.u = a.mu[0];
        za.v = a.nu[0];
        za.w = map_as_cochain(a.phi_higher[0], a.phi->source, C.mod_AB());
    }
    if (b.order >= 1) {
        zb.u = b.mu[0];
        zb.v = b.nu[0];
        zb.w = map_as_cochain(b.phi_higher[0], b.phi->source, C.mod_AB());
    }
    MorphismCochain<K> diff = za - zb;
    std::vector<K> rhs = C.to_invariant_coords(diff);
    auto x = solve_linear(C.d_matrix(1), rhs);
    ClassCompareReport<K> rep;
    if (x.has_value()) {
        rep.cohomologous = true;
        rep.witness = C.from_invariant_coords(1, *x);
    }
    return rep;
}

template <class K>
struct TrivializeOutcome {
    bool already_trivial = false;
    std::size_t killed_order = 0;
    std::optional<FormalIsomorphismPair<K>> pair;      // one coefficient, at killed_order
    std::optional<DeformationTriple<K>> reduced;       // conjugate of the input by that pair
    std::optional<MorphismCochain<K>> nonzero_class;   // first coefficient triple, when it blocks
    std::size_t rank_d1 = 0, rank_augmented = 0;       // certificate for the blocked case
    bool blocked() const { return nonzero_class.has_value(); }
};

// One step of formal trivialization: kill the first nonzero
// coefficient triple if it is a coboundary of the morphism complex.
// Solving d1(u, v, w) = z and conjugating by Psi = 1 + u t^n,
// Theta = 1 + (v + [., w]) t^n removes the order-n part; the inner
// derivation by w folds the correction slot into Theta.
template <class K>
TrivializeOutcome<K> trivialize_step(const MorphismComplex<K>& C, const DeformationTriple<K>& d) {
    require_verified(d);
    TrivializeOutcome<K> out;
    InfinitesimalInfo<K> info = infinitesimal_order(C, d);
    if (info.trivial) {
        out.already_trivial = true;
        return out;
    }
    std::size_t n = info.n;
    std::vector<K> rhs = C.to_invariant_coords(*info.cochain);
    const Matrix<K>& D1 = C.d_matrix(1);
    auto x = solve_linear(D1, rhs);
    if (!x.has_value()) {
        out.nonzero_class = *info.cochain;
        out.rank_d1 = rank(D1);
        Matrix<K> aug(D1.field(), D1.rows(), D1.cols() + 1);
        for (std::size_t r = 0; r < D1.rows(); ++r) {
            for (std::size_t c = 0; c < D1.cols(); ++c) aug.at(r, c) = D1.at(r, c);
            aug.at(r, D1.cols()) = rhs[r];
        }
        out.rank_augmented = rank(aug);
        return out;
    }
    MorphismCochain<K> sol = C.from_invariant_coords(1, *x);
    const MorphismPtr<K>& phi = d.phi;
    // theta coefficient: v plus the inner derivation b -> bw - wb,
    // which is the degree-zero coboundary of w in the regular bimodule
    // of the target
    Cochain<K> w0 = zero_cochain(phi->target, C.mod_BB(), 0);
    w0.coords = sol.w.coords;
    Cochain<K> inner = coboundary_apply(w0);
    FormalIsomorphismPair<K> p = identity_pair(C, n);
    p.psi[n - 1] = cochain_as_map(sol.u);
    p.theta[n - 1] = cochain_as_map(sol.v) + cochain_as_map(inner);
    out.killed_order = n;
    out.reduced = conjugate(C, p, d);
    out.pair = std::move(p);
    for (std::size_t r = 1; r <= n && r <= out.reduced->order; ++r)
        if (!(out.reduced->mu[r - 1].is_zero() && out.reduced->nu[r - 1].is_zero() &&
              out.reduced->phi_higher[r - 1].is_zero()))
            throw std::logic_error("trivialize_step: conjugation left a low-order coefficient");
    return out;
}

template <class K>
struct TrivializeResult {
    bool trivialized = false;
    std::size_t cleared_to = 0;
    std::optional<FormalIsomorphismPair<K>> pair;  // composition of all step pairs
    DeformationTriple<K> final_form;
    std::optional<TrivializeOutcome<K>> blocked_step;
};

// Full formal trivialization through the deformation's order, or the
// first step where a nonzero cohomology class stops it.
template <class K>
TrivializeResult<K> trivialize(const MorphismComplex<K>& C, const DeformationTriple<K>& d) {
    TrivializeResult<K> res;
    res.final_form = d;
    res.pair = identity_pair(C, d.order);
    while (true) {
        TrivializeOutcome<K> step = trivialize_step(C, res.final_form);
        if (step.already_trivial) {
            res.trivialized = true;
            res.cleared_to = d.order;
            return res;
        }
        if (step.blocked()) {
            res.blocked_step = std::move(step);
            return res;
        }
        res.pair = compose_pairs(C, *step.pair, *res.pair, d.order);
        res.cleared_to = step.killed_order;
        res.final_form = std::move(*step.reduced);
    }
}

// Only the sufficient direction is decided: vanishing H^2 forces every
// deformation to trivialize order by order, but a nonzero H^2 proves
// nothing, so the report never claims non-rigidity.
template <class K>
struct RigidityReport {
    std::size_t h2_dim = 0;
    bool rigid_sufficient = false;
    // dims of the self-cohomologies in degree 2 and the pulled-back
    // cohomology in degree 1; all three zero is the componentwise route
    // to the same conclusion.
    std::array<std::size_t, 3> ingredient_route{};
    std::size_t probe_order = 0;  // echoed for the caller's records
};

// The probe order is reported back untouched since no finite probe can
// strengthen the cohomological statement.
template <class K>
RigidityReport<K> rigidity_report(const MorphismComplex<K>& C, std::size_t probe_order) {
    VanishingReport<K> vc = C.vanishing_check(2);
    RigidityReport<K> rep;
    rep.h2_dim = vc.direct_dim;
    rep.rigid_sufficient = rep.h2_dim == 0;
    rep.ingredient_route = vc.ingredient_dims;
    rep.probe_order = probe_order;
    return rep;
}

}  // namespace defc
