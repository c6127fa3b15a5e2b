#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

#include "hochschild.hpp"

namespace defc {

// Element of the morphism complex in degree n >= 1: a pair of
// self-deforming cochains u on the source and v on the target, plus a
// correction w one degree down with values pulled back along phi.
template <class K>
struct MorphismCochain {
    std::size_t degree = 0;
    Cochain<K> u;  // C^n(A; A)
    Cochain<K> v;  // C^n(B; B)
    Cochain<K> w;  // C^{n-1}(A; B along phi)

    bool is_zero() const { return u.is_zero() && v.is_zero() && w.is_zero(); }

    MorphismCochain& operator+=(const MorphismCochain& o) {
        u += o.u;
        v += o.v;
        w += o.w;
        return *this;
    }
    MorphismCochain& operator-=(const MorphismCochain& o) {
        u -= o.u;
        v -= o.v;
        w -= o.w;
        return *this;
    }
    MorphismCochain operator-() const {
        MorphismCochain c = *this;
        c.u = -c.u;
        c.v = -c.v;
        c.w = -c.w;
        return c;
    }
    friend MorphismCochain operator+(MorphismCochain a, const MorphismCochain& b) { return a += b; }
    friend MorphismCochain operator-(MorphismCochain a, const MorphismCochain& b) { return a -= b; }
    friend bool operator==(const MorphismCochain& a, const MorphismCochain& b) {
        return a.degree == b.degree && a.u == b.u && a.v == b.v && a.w == b.w;
    }
    friend bool operator!=(const MorphismCochain& a, const MorphismCochain& b) { return !(a == b); }
};

template <class K>
struct MorphismCohomology {
    std::size_t degree = 0;
    std::array<std::size_t, 3> block_dims{};  // invariant dims of (u, v, w) blocks
    std::size_t dim_invariant = 0;
    std::size_t dim_cocycles = 0;
    std::size_t dim_coboundaries = 0;
    std::size_t dim_cohomology = 0;
    std::vector<MorphismCochain<K>> representatives;
};

template <class K>
struct VanishingReport {
    std::size_t degree = 0;
    // dim H_G^n(A;A), dim H_G^n(B;B), dim H_G^{n-1}(A;B)
    std::array<std::size_t, 3> ingredient_dims{};
    bool prediction_applicable = false;  // all ingredients vanish
    std::size_t direct_dim = 0;
    bool consistent = false;
};

// The cochain complex attached to an equivariant morphism, with the
// invariant subspaces and differential matrices cached per degree. The
// differential is
//   d(u, v, w) = (delta u, delta v, phi . u - v . phi^n - delta w),
// acting on invariant triples; degree 0 of the complex is zero by
// convention, so degree-1 cochains have no coboundaries.
template <class K>
class MorphismComplex {
  public:
    explicit MorphismComplex(MorphismPtr<K> phi)
        : phi_(std::move(phi)),
          mod_AA_(std::make_shared<BimoduleStructure<K>>(regular_bimodule(*phi_->source))),
          mod_BB_(std::make_shared<BimoduleStructure<K>>(regular_bimodule(*phi_->target))),
          mod_AB_(std::make_shared<BimoduleStructure<K>>(induced_bimodule(*phi_))) {
        if (!phi_->source_action->same_group_shape(*phi_->target_action))
            throw std::invalid_argument("MorphismComplex: actions have different group shapes");
    }

    const MorphismPtr<K>& morphism() const { return phi_; }
    BimodulePtr<K> mod_AA() const { return mod_AA_; }
    BimodulePtr<K> mod_BB() const { return mod_BB_; }
    BimodulePtr<K> mod_AB() const { return mod_AB_; }

    MorphismCochain<K> zero(std::size_t n) const {
        require_degree(n);
        MorphismCochain<K> c;
        c.degree = n;
        c.u = zero_cochain(phi_->source, mod_AA_, n);
        c.v = zero_cochain(phi_->target, mod_BB_, n);
        c.w = zero_cochain(phi_->source, mod_AB_, n - 1);
        return c;
    }

    MorphismCochain<K> d_apply(const MorphismCochain<K>& c) const {
        require_degree(c.degree);
        MorphismCochain<K> out;
        out.degree = c.degree + 1;
        out.u = coboundary_apply(c.u);
        out.v = coboundary_apply(c.v);
        out.w = postcompose_values(c.u, phi_->matrix, mod_AB_);
        std::vector<Matrix<K>> slots(c.degree, phi_->matrix);
        out.w -= precompose_slots(c.v, slots, phi_->source, mod_AB_);
        out.w -= coboundary_apply(c.w);
        return out;
    }

    const Subspace<K>& inv_AA(std::size_t n) const {
        auto it = inv_aa_.find(n);
        if (it == inv_aa_.end())
            it = inv_aa_
                     .emplace(n, invariant_subspace(phi_->source, mod_AA_, n, *phi_->source_action,
                                                    *phi_->source_action))
                     .first;
        return it->second;
    }
    const Subspace<K>& inv_BB(std::size_t n) const {
        auto it = inv_bb_.find(n);
        if (it == inv_bb_.end())
            it = inv_bb_
                     .emplace(n, invariant_subspace(phi_->target, mod_BB_, n, *phi_->target_action,
                                                    *phi_->target_action))
                     .first;
        return it->second;
    }
    const Subspace<K>& inv_AB(std::size_t n) const {
        auto it = inv_ab_.find(n);
        if (it == inv_ab_.end())
            it = inv_ab_
                     .emplace(n, invariant_subspace(phi_->source, mod_AB_, n, *phi_->source_action,
                                                    *phi_->target_action))
                     .first;
        return it->second;
    }

    std::array<std::size_t, 3> block_dims(std::size_t n) const {
        require_degree(n);
        return {inv_AA(n).dim(), inv_BB(n).dim(), inv_AB(n - 1).dim()};
    }

    std::vector<K> to_invariant_coords(const MorphismCochain<K>& c) const {
        require_degree(c.degree);
        auto cu = inv_AA(c.degree).coordinates(c.u.coords);
        auto cv = inv_BB(c.degree).coordinates(c.v.coords);
        auto cw = inv_AB(c.degree - 1).coordinates(c.w.coords);
        if (!cu || !cv || !cw)
            throw std::invalid_argument("to_invariant_coords: cochain is not invariant");
        std::vector<K> out;
        out.reserve(cu->size() + cv->size() + cw->size());
        out.insert(out.end(), cu->begin(), cu->end());
        out.insert(out.end(), cv->begin(), cv->end());
        out.insert(out.end(), cw->begin(), cw->end());
        return out;
    }

    MorphismCochain<K> from_invariant_coords(std::size_t n, const std::vector<K>& coords) const {
        auto dims = block_dims(n);
        if (coords.size() != dims[0] + dims[1] + dims[2])
            throw std::invalid_argument("from_invariant_coords: coordinate length mismatch");
        MorphismCochain<K> c = zero(n);
        std::vector<K> cu(coords.begin(), coords.begin() + dims[0]);
        std::vector<K> cv(coords.begin() + dims[0], coords.begin() + dims[0] + dims[1]);
        std::vector<K> cw(coords.begin() + dims[0] + dims[1], coords.end());
        c.u.coords = inv_AA(n).from_coordinates(cu);
        c.v.coords = inv_BB(n).from_coordinates(cv);
        c.w.coords = inv_AB(n - 1).from_coordinates(cw);
        return c;
    }

    // Differential on invariant coordinates, degree n -> n+1. Columns
    // are independent once the invariant bases are in the cache.
    const Matrix<K>& d_matrix(std::size_t n) const {
        auto it = dmat_.find(n);
        if (it != dmat_.end()) return it->second;
        auto in_dims = block_dims(n);
        auto out_dims = block_dims(n + 1);
        std::size_t cols = in_dims[0] + in_dims[1] + in_dims[2];
        std::size_t rows = out_dims[0] + out_dims[1] + out_dims[2];
        Matrix<K> D(phi_->source->field, rows, cols);
        const FieldCtx<K>& F = phi_->source->field;
        parallel_for(cols, [&](std::size_t c) {
            std::vector<K> unit(cols, F.zero());
            unit[c] = F.one();
            MorphismCochain<K> img = d_apply(from_invariant_coords(n, unit));
            std::vector<K> col = to_invariant_coords(img);
            for (std::size_t r = 0; r < rows; ++r) D.at(r, c) = col[r];
        });
        return dmat_.emplace(n, std::move(D)).first->second;
    }

    MorphismCohomology<K> cohomology(std::size_t n) const {
        require_degree(n);
        MorphismCohomology<K> res;
        res.degree = n;
        res.block_dims = block_dims(n);
        res.dim_invariant = res.block_dims[0] + res.block_dims[1] + res.block_dims[2];
        const Matrix<K>& Dn = d_matrix(n);
        Subspace<K> Z = kernel_basis(Dn);
        res.dim_cocycles = Z.dim();
        Subspace<K> B = (n == 1) ? Subspace<K>::zero(phi_->source->field, res.dim_invariant)
                                 : column_space(d_matrix(n - 1));
        res.dim_coboundaries = B.dim();
        res.dim_cohomology = res.dim_cocycles - res.dim_coboundaries;
        Subspace<K> seen = B;
        for (std::size_t j = 0; j < Z.dim() && res.representatives.size() < res.dim_cohomology; ++j) {
            std::vector<K> z = Z.basis().column(j);
            if (seen.contains(z)) continue;
            Matrix<K> grown(phi_->source->field, z.size(), seen.dim() + 1);
            for (std::size_t c = 0; c < seen.dim(); ++c)
                for (std::size_t r = 0; r < z.size(); ++r) grown.at(r, c) = seen.basis().at(r, c);
            for (std::size_t r = 0; r < z.size(); ++r) grown.at(r, seen.dim()) = z[r];
            seen = Subspace<K>::span(grown);
            res.representatives.push_back(from_invariant_coords(n, z));
        }
        return res;
    }

    // Compares the componentwise vanishing criterion against the direct
    // computation: if the two self-cohomologies in degree n and the
    // pulled-back cohomology in degree n-1 all vanish, the morphism
    // complex must vanish in degree n too.
    VanishingReport<K> vanishing_check(std::size_t n) const {
        if (n < 2) throw std::invalid_argument("vanishing_check: degree must be at least 2");
        VanishingReport<K> rep;
        rep.degree = n;
        rep.ingredient_dims[0] =
            equivariant_cohomology(phi_->source, mod_AA_, n, *phi_->source_action, *phi_->source_action)
                .dim_cohomology;
        rep.ingredient_dims[1] =
            equivariant_cohomology(phi_->target, mod_BB_, n, *phi_->target_action, *phi_->target_action)
                .dim_cohomology;
        rep.ingredient_dims[2] =
            equivariant_cohomology(phi_->source, mod_AB_, n - 1, *phi_->source_action, *phi_->target_action)
                .dim_cohomology;
        rep.prediction_applicable =
            rep.ingredient_dims[0] == 0 && rep.ingredient_dims[1] == 0 && rep.ingredient_dims[2] == 0;
        rep.direct_dim = cohomology(n).dim_cohomology;
        rep.consistent = !rep.prediction_applicable || rep.direct_dim == 0;
        return rep;
    }

  private:
    static void require_degree(std::size_t n) {
        if (n < 1) throw std::invalid_argument("MorphismComplex: degree must be at least 1");
    }

    MorphismPtr<K> phi_;
    BimodulePtr<K> mod_AA_, mod_BB_, mod_AB_;
    mutable std::map<std::size_t, Subspace<K>> inv_aa_, inv_bb_, inv_ab_;
    mutable std::map<std::size_t, Matrix<K>> dmat_;
};

}  // namespace defc
