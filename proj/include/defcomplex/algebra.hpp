#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "matrix.hpp"

namespace defc {

// Finite-dimensional associative algebra given by structure constants:
// e_i * e_j = sum_k c[i][j][k] e_k. Nothing here assumes a unit.
template <class K>
struct Algebra {
    FieldCtx<K> field;
    std::vector<std::string> basis;
    std::vector<K> c;  // flattened [i][j][k]

    Algebra() = default;
    Algebra(FieldCtx<K> f, std::vector<std::string> names)
        : field(f), basis(std::move(names)), c(basis.size() * basis.size() * basis.size(), f.zero()) {}

    std::size_t dim() const { return basis.size(); }

    const K& sc(std::size_t i, std::size_t j, std::size_t k) const { return c[(i * dim() + j) * dim() + k]; }
    K& sc(std::size_t i, std::size_t j, std::size_t k) { return c[(i * dim() + j) * dim() + k]; }

    std::vector<K> mul(const std::vector<K>& a, const std::vector<K>& b) const {
        if (a.size() != dim() || b.size() != dim()) throw std::invalid_argument("Algebra::mul: size mismatch");
        std::vector<K> out(dim(), field.zero());
        for (std::size_t i = 0; i < dim(); ++i) {
            if (a[i].is_zero()) continue;
            for (std::size_t j = 0; j < dim(); ++j) {
                if (b[j].is_zero()) continue;
                K ab = a[i] * b[j];
                for (std::size_t k = 0; k < dim(); ++k)
                    if (!sc(i, j, k).is_zero()) out[k] += ab * sc(i, j, k);
            }
        }
        return out;
    }
};

template <class K>
using AlgebraPtr = std::shared_ptr<const Algebra<K>>;

struct AssocReport {
    // (i, j, k, l): coordinate l of (e_i e_j) e_k - e_i (e_j e_k) is nonzero.
    std::vector<std::array<std::size_t, 4>> violations;
    bool pass() const { return violations.empty(); }
};

template <class K>
AssocReport check_associativity(const Algebra<K>& A) {
    AssocReport rep;
    std::size_t d = A.dim();
    std::vector<K> ei(d, A.field.zero());
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < d; ++k)
                for (std::size_t l = 0; l < d; ++l) {
                    K lhs = A.field.zero(), rhs = A.field.zero();
                    for (std::size_t m = 0; m < d; ++m) {
                        lhs += A.sc(i, j, m) * A.sc(m, k, l);
                        rhs += A.sc(j, k, m) * A.sc(i, m, l);
                    }
                    if (lhs != rhs) rep.violations.push_back({i, j, k, l});
                }
    return rep;
}

// Bimodule over an algebra A, both actions as structure constants:
// e_i . m_s = sum_t left[i][s][t] m_t, and m_s . e_i = sum_t right[s][i][t] m_t.
template <class K>
struct BimoduleStructure {
    FieldCtx<K> field;
    std::size_t alg_dim = 0, mod_dim = 0;
    std::vector<K> left;
    std::vector<K> right;

    BimoduleStructure() = default;
    BimoduleStructure(FieldCtx<K> f, std::size_t da, std::size_t dm)
        : field(f),
          alg_dim(da),
          mod_dim(dm),
          left(da * dm * dm, f.zero()),
          right(dm * da * dm, f.zero()) {}

    const K& l(std::size_t i, std::size_t s, std::size_t t) const { return left[(i * mod_dim + s) * mod_dim + t]; }
    K& l(std::size_t i, std::size_t s, std::size_t t) { return left[(i * mod_dim + s) * mod_dim + t]; }
    const K& r(std::size_t s, std::size_t i, std::size_t t) const { return right[(s * alg_dim + i) * mod_dim + t]; }
    K& r(std::size_t s, std::size_t i, std::size_t t) { return right[(s * alg_dim + i) * mod_dim + t]; }

    // a . m for coordinate vectors.
    std::vector<K> left_act(const std::vector<K>& a, const std::vector<K>& m) const {
        std::vector<K> out(mod_dim, field.zero());
        for (std::size_t i = 0; i < alg_dim; ++i) {
            if (a[i].is_zero()) continue;
            for (std::size_t s = 0; s < mod_dim; ++s) {
                if (m[s].is_zero()) continue;
                K am = a[i] * m[s];
                for (std::size_t t = 0; t < mod_dim; ++t)
                    if (!l(i, s, t).is_zero()) out[t] += am * l(i, s, t);
            }
        }
        return out;
    }

    std::vector<K> right_act(const std::vector<K>& m, const std::vector<K>& a) const {
        std::vector<K> out(mod_dim, field.zero());
        for (std::size_t s = 0; s < mod_dim; ++s) {
            if (m[s].is_zero()) continue;
            for (std::size_t i = 0; i < alg_dim; ++i) {
                if (a[i].is_zero()) continue;
                K ma = m[s] * a[i];
                for (std::size_t t = 0; t < mod_dim; ++t)
                    if (!r(s, i, t).is_zero()) out[t] += ma * r(s, i, t);
            }
        }
        return out;
    }
};

template <class K>
using BimodulePtr = std::shared_ptr<const BimoduleStructure<K>>;

template <class K>
BimoduleStructure<K> regular_bimodule(const Algebra<K>& A) {
    BimoduleStructure<K> M(A.field, A.dim(), A.dim());
    for (std::size_t i = 0; i < A.dim(); ++i)
        for (std::size_t s = 0; s < A.dim(); ++s)
            for (std::size_t t = 0; t < A.dim(); ++t) {
                M.l(i, s, t) = A.sc(i, s, t);
                M.r(s, i, t) = A.sc(s, i, t);
            }
    return M;
}

struct BimoduleReport {
    std::vector<std::string> failures;
    bool pass() const { return failures.empty(); }
};

// Mixed associativity on basis triples: (ab)m = a(bm), (am)b = a(mb), (ma)b = m(ab).
template <class K>
BimoduleReport check_bimodule(const Algebra<K>& A, const BimoduleStructure<K>& M) {
    BimoduleReport rep;
    if (M.alg_dim != A.dim()) {
        rep.failures.push_back("algebra dimension mismatch");
        return rep;
    }
    std::size_t d = A.dim(), dm = M.mod_dim;
    auto basis_a = [&](std::size_t i) {
        std::vector<K> v(d, A.field.zero());
        v[i] = A.field.one();
        return v;
    };
    auto basis_m = [&](std::size_t s) {
        std::vector<K> v(dm, A.field.zero());
        v[s] = A.field.one();
        return v;
    };
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t s = 0; s < dm; ++s) {
                auto ab = A.mul(basis_a(i), basis_a(j));
                if (M.left_act(ab, basis_m(s)) != M.left_act(basis_a(i), M.left_act(basis_a(j), basis_m(s))))
                    rep.failures.push_back("(ab)m != a(bm) at (" + std::to_string(i) + "," + std::to_string(j) +
                                           "," + std::to_string(s) + ")");
                if (M.right_act(M.left_act(basis_a(i), basis_m(s)), basis_a(j)) !=
                    M.left_act(basis_a(i), M.right_act(basis_m(s), basis_a(j))))
                    rep.failures.push_back("(am)b != a(mb) at (" + std::to_string(i) + "," + std::to_string(s) +
                                           "," + std::to_string(j) + ")");
                if (M.right_act(M.right_act(basis_m(s), basis_a(i)), basis_a(j)) !=
                    M.right_act(basis_m(s), A.mul(basis_a(i), basis_a(j))))
                    rep.failures.push_back("(ma)b != m(ab) at (" + std::to_string(s) + "," + std::to_string(i) +
                                           "," + std::to_string(j) + ")");
            }
    return rep;
}

// Finite group acting on an algebra by linear maps, one matrix per
// element, with the multiplication table over element indices. The
// generator list records how the group was presented; invariance
// computations only need generators.
template <class K>
struct GroupAction {
    AlgebraPtr<K> algebra;
    std::vector<Matrix<K>> elements;
    std::size_t identity_index = 0;
    std::vector<std::vector<std::size_t>> mult_table;
    std::vector<std::size_t> generators;

    std::size_t order() const { return elements.size(); }
    const Matrix<K>& mat(std::size_t g) const { return elements[g]; }

    std::size_t inverse_index(std::size_t g) const {
        for (std::size_t h = 0; h < order(); ++h)
            if (mult_table[g][h] == identity_index) return h;
        throw std::logic_error("GroupAction: element without inverse");
    }

    // The abstract group must match for paired actions; matrices may differ.
    bool same_group_shape(const GroupAction& o) const {
        return order() == o.order() && identity_index == o.identity_index && mult_table == o.mult_table;
    }

    // Indices whose fixed spaces cut out all invariants: the recorded
    // generators, or every non-identity element when none are recorded.
    std::vector<std::size_t> cutting_set() const {
        if (!generators.empty()) return generators;
        std::vector<std::size_t> all;
        for (std::size_t g = 0; g < order(); ++g)
            if (g != identity_index) all.push_back(g);
        return all;
    }
};

template <class K>
using ActionPtr = std::shared_ptr<const GroupAction<K>>;

template <class K>
GroupAction<K> trivial_action(AlgebraPtr<K> A) {
    GroupAction<K> ga;
    ga.algebra = A;
    ga.elements.push_back(Matrix<K>::identity(A->field, A->dim()));
    ga.identity_index = 0;
    ga.mult_table = {{0}};
    return ga;
}

// Deterministic BFS closure of a generating set of invertible matrices.
// Elements are indexed in discovery order with the identity first, so
// two closures from the same generator lists agree index by index.
template <class K>
GroupAction<K> close_group(AlgebraPtr<K> A, const std::vector<Matrix<K>>& gens, std::size_t cap = 1024) {
    GroupAction<K> ga;
    ga.algebra = A;
    std::size_t d = A->dim();
    for (const auto& g : gens) {
        if (g.rows() != d || g.cols() != d) throw std::invalid_argument("close_group: generator shape mismatch");
        if (!inverse(g).has_value()) throw std::domain_error("close_group: generator is not invertible");
    }
    ga.elements.push_back(Matrix<K>::identity(A->field, d));
    ga.identity_index = 0;
    auto find = [&](const Matrix<K>& m) -> std::size_t {
        for (std::size_t i = 0; i < ga.elements.size(); ++i)
            if (ga.elements[i] == m) return i;
        return ga.elements.size();
    };
    for (const auto& g : gens) {
        std::size_t idx = find(g);
        if (idx == ga.elements.size()) ga.elements.push_back(g);
        ga.generators.push_back(idx);
    }
    for (std::size_t i = 0; i < ga.elements.size(); ++i) {
        for (std::size_t j = 0; j < ga.elements.size(); ++j) {
            Matrix<K> p = ga.elements[i] * ga.elements[j];
            std::size_t idx = find(p);
            if (idx == ga.elements.size()) {
                if (ga.elements.size() >= cap)
                    throw std::length_error("close_group: closure exceeds cap " + std::to_string(cap));
                ga.elements.push_back(p);
            }
        }
    }
    std::size_t n = ga.elements.size();
    ga.mult_table.assign(n, std::vector<std::size_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t idx = find(ga.elements[i] * ga.elements[j]);
            if (idx == n) throw std::logic_error("close_group: table fell outside closure");
            ga.mult_table[i][j] = idx;
        }
    return ga;
}

struct ActionReport {
    std::vector<std::string> failures;
    bool pass() const { return failures.empty(); }
};

template <class K>
ActionReport check_action(const GroupAction<K>& ga) {
    ActionReport rep;
    const Algebra<K>& A = *ga.algebra;
    std::size_t n = ga.order(), d = A.dim();
    if (n == 0) {
        rep.failures.push_back("empty group");
        return rep;
    }
    if (ga.identity_index >= n) {
        rep.failures.push_back("identity index out of range");
        return rep;
    }
    if (ga.elements[ga.identity_index] != Matrix<K>::identity(A.field, d))
        rep.failures.push_back("identity element does not act as the identity matrix");
    if (ga.mult_table.size() != n) {
        rep.failures.push_back("multiplication table has wrong shape");
        return rep;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (ga.mult_table[i].size() != n) {
            rep.failures.push_back("multiplication table has wrong shape");
            return rep;
        }
        for (std::size_t j = 0; j < n; ++j)
            if (ga.mult_table[i][j] >= n) {
                rep.failures.push_back("multiplication table entry out of range");
                return rep;
            }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (ga.mat(i).rows() != d || ga.mat(i).cols() != d) {
            rep.failures.push_back("element " + std::to_string(i) + " has wrong shape");
            return rep;
        }
        if (ga.mat(ga.mult_table[i][ga.identity_index]) != ga.mat(i) ||
            ga.mat(ga.mult_table[ga.identity_index][i]) != ga.mat(i))
            rep.failures.push_back("identity is not neutral for element " + std::to_string(i));
        bool has_inverse = false;
        for (std::size_t j = 0; j < n; ++j)
            if (ga.mult_table[i][j] == ga.identity_index) has_inverse = true;
        if (!has_inverse) rep.failures.push_back("element " + std::to_string(i) + " has no inverse");
        for (std::size_t j = 0; j < n; ++j)
            if (ga.mat(i) * ga.mat(j) != ga.mat(ga.mult_table[i][j]))
                rep.failures.push_back("table disagrees with matrix product at (" + std::to_string(i) + "," +
                                       std::to_string(j) + ")");
    }
    // Multiplicativity of each element on basis pairs.
    for (std::size_t g = 0; g < n; ++g)
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                std::vector<K> prod(d, A.field.zero());
                for (std::size_t k = 0; k < d; ++k) prod[k] = A.sc(i, j, k);
                std::vector<K> lhs = ga.mat(g).apply(prod);
                std::vector<K> rhs = A.mul(ga.mat(g).column(i), ga.mat(g).column(j));
                if (lhs != rhs)
                    rep.failures.push_back("element " + std::to_string(g) + " is not multiplicative at (" +
                                           std::to_string(i) + "," + std::to_string(j) + ")");
            }
    for (std::size_t g : ga.generators)
        if (g >= n) rep.failures.push_back("generator index out of range");
    return rep;
}

// Algebra morphism phi: A -> B intertwining a shared finite group that
// acts on both sides.
template <class K>
struct EquivariantMorphism {
    AlgebraPtr<K> source, target;
    ActionPtr<K> source_action, target_action;
    Matrix<K> matrix;  // dim B x dim A

    std::vector<K> apply(const std::vector<K>& a) const { return matrix.apply(a); }
};

template <class K>
using MorphismPtr = std::shared_ptr<const EquivariantMorphism<K>>;

struct MorphismReport {
    std::vector<std::array<std::size_t, 2>> mult_violations;   // basis pairs (i, j)
    std::vector<std::size_t> equivariance_violations;          // group element indices
    bool pass() const { return mult_violations.empty() && equivariance_violations.empty(); }
};

template <class K>
MorphismReport check_morphism(const EquivariantMorphism<K>& phi) {
    const Algebra<K>& A = *phi.source;
    const Algebra<K>& B = *phi.target;
    if (phi.matrix.rows() != B.dim() || phi.matrix.cols() != A.dim())
        throw std::invalid_argument("check_morphism: matrix shape mismatch");
    if (!phi.source_action->same_group_shape(*phi.target_action))
        throw std::invalid_argument("check_morphism: source and target actions have different group shapes");
    MorphismReport rep;
    std::size_t d = A.dim();
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            std::vector<K> prod(d, A.field.zero());
            for (std::size_t k = 0; k < d; ++k) prod[k] = A.sc(i, j, k);
            if (phi.apply(prod) != B.mul(phi.matrix.column(i), phi.matrix.column(j)))
                rep.mult_violations.push_back({i, j});
        }
    for (std::size_t g = 0; g < phi.source_action->order(); ++g)
        if (phi.matrix * phi.source_action->mat(g) != phi.target_action->mat(g) * phi.matrix)
            rep.equivariance_violations.push_back(g);
    return rep;
}

// Bimodule structure on B pulled back along phi: a.m = phi(a) m, m.a = m phi(a).
template <class K>
BimoduleStructure<K> induced_bimodule(const EquivariantMorphism<K>& phi) {
    const Algebra<K>& A = *phi.source;
    const Algebra<K>& B = *phi.target;
    BimoduleStructure<K> M(A.field, A.dim(), B.dim());
    for (std::size_t i = 0; i < A.dim(); ++i) {
        std::vector<K> fi = phi.matrix.column(i);
        for (std::size_t s = 0; s < B.dim(); ++s) {
            std::vector<K> es(B.dim(), B.field.zero());
            es[s] = B.field.one();
            std::vector<K> lm = B.mul(fi, es);
            std::vector<K> rm = B.mul(es, fi);
            for (std::size_t t = 0; t < B.dim(); ++t) {
                M.l(i, s, t) = lm[t];
                M.r(s, i, t) = rm[t];
            }
        }
    }
    return M;
}

}  // namespace defc
