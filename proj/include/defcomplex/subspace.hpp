#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "matrix.hpp"

namespace defc {

// Subspace of K^ambient with a canonical basis: the columns are the
// reduced column-echelon form of any generating set (RREF of the
// transpose, transposed back). Equal subspaces therefore compare equal
// as values, and pivot rows carry plain coordinates: column j has a 1
// in its pivot row and every other basis column has a 0 there, so for
// v in the span the j-th coordinate is just v[pivot_row[j]].
template <class K>
class Subspace {
  public:
    Subspace() = default;

    static Subspace zero(FieldCtx<K> field, std::size_t ambient) {
        return span(Matrix<K>(field, ambient, 0));
    }

    static Subspace full(FieldCtx<K> field, std::size_t ambient) {
        return span(Matrix<K>::identity(field, ambient));
    }

    // Canonicalizes the column span of `generators`.
    static Subspace span(const Matrix<K>& generators) {
        RrefResult<K> rr = rref(generators.transpose());
        Subspace s;
        s.ambient_ = generators.rows();
        s.pivot_rows_.assign(rr.pivots.begin(), rr.pivots.end());
        s.basis_ = Matrix<K>(generators.field(), s.ambient_, rr.rank);
        for (std::size_t j = 0; j < rr.rank; ++j)
            for (std::size_t i = 0; i < s.ambient_; ++i) s.basis_.at(i, j) = rr.reduced.at(j, i);
        return s;
    }

    static Subspace span_vectors(FieldCtx<K> field, std::size_t ambient, const std::vector<std::vector<K>>& vecs) {
        Matrix<K> g(field, ambient, vecs.size());
        for (std::size_t j = 0; j < vecs.size(); ++j) {
            if (vecs[j].size() != ambient) throw std::invalid_argument("Subspace: generator length mismatch");
            for (std::size_t i = 0; i < ambient; ++i) g.at(i, j) = vecs[j][i];
        }
        return span(g);
    }

    std::size_t ambient() const { return ambient_; }
    std::size_t dim() const { return basis_.cols(); }
    const Matrix<K>& basis() const { return basis_; }
    const std::vector<std::size_t>& pivot_rows() const { return pivot_rows_; }

    // Coordinates of v in the canonical basis, or nullopt if v is not
    // in the span. Candidate coordinates are read off the pivot rows
    // and then verified by recombination, which also makes membership a
    // single O(ambient * dim) pass.
    std::optional<std::vector<K>> coordinates(const std::vector<K>& v) const {
        if (v.size() != ambient_) throw std::invalid_argument("Subspace: vector length mismatch");
        const FieldCtx<K>& F = basis_.field();
        std::vector<K> c(dim(), F.zero());
        for (std::size_t j = 0; j < dim(); ++j) c[j] = v[pivot_rows_[j]];
        for (std::size_t i = 0; i < ambient_; ++i) {
            K acc = F.zero();
            for (std::size_t j = 0; j < dim(); ++j)
                if (!c[j].is_zero()) acc += basis_.at(i, j) * c[j];
            if (acc != v[i]) return std::nullopt;
        }
        return c;
    }

    bool contains(const std::vector<K>& v) const { return coordinates(v).has_value(); }

    std::vector<K> from_coordinates(const std::vector<K>& c) const {
        if (c.size() != dim()) throw std::invalid_argument("Subspace: coordinate length mismatch");
        return basis_.apply(c);
    }

    friend bool operator==(const Subspace& a, const Subspace& b) {
        return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
    }
    friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }

  private:
    std::size_t ambient_ = 0;
    Matrix<K> basis_;
    std::vector<std::size_t> pivot_rows_;
};

// Intersection of two subspaces of the same ambient space, via the
// kernel of [B_V | -B_W]: the V-part of each kernel vector recombines
// to a generator of the intersection.
template <class K>
Subspace<K> intersect(const Subspace<K>& v, const Subspace<K>& w) {
    if (v.ambient() != w.ambient()) throw std::invalid_argument("intersect: ambient mismatch");
    const FieldCtx<K>& F = v.basis().field();
    Matrix<K> stacked(F, v.ambient(), v.dim() + w.dim());
    for (std::size_t i = 0; i < v.ambient(); ++i) {
        for (std::size_t j = 0; j < v.dim(); ++j) stacked.at(i, j) = v.basis().at(i, j);
        for (std::size_t j = 0; j < w.dim(); ++j) stacked.at(i, v.dim() + j) = -w.basis().at(i, j);
    }
    Matrix<K> ker = kernel_matrix(stacked);
    Matrix<K> gens(F, v.ambient(), ker.cols());
    for (std::size_t j = 0; j < ker.cols(); ++j) {
        for (std::size_t i = 0; i < v.ambient(); ++i) {
            K acc = F.zero();
            for (std::size_t t = 0; t < v.dim(); ++t)
                if (!ker.at(t, j).is_zero()) acc += v.basis().at(i, t) * ker.at(t, j);
            gens.at(i, j) = acc;
        }
    }
    return Subspace<K>::span(gens);
}

template <class K>
Subspace<K> intersect_all(const std::vector<Subspace<K>>& spaces) {
    if (spaces.empty()) throw std::invalid_argument("intersect_all: empty list");
    Subspace<K> acc = spaces.front();
    for (std::size_t i = 1; i < spaces.size(); ++i) acc = intersect(acc, spaces[i]);
    return acc;
}

// Kernel of m as a canonical subspace of the column space.
template <class K>
Subspace<K> kernel_basis(const Matrix<K>& m) {
    return Subspace<K>::span(kernel_matrix(m));
}

// Column span of m as a canonical subspace.
template <class K>
Subspace<K> column_space(const Matrix<K>& m) {
    return Subspace<K>::span(m);
}

}  // namespace defc
