#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "algebra.hpp"
#include "subspace.hpp"
#include "threading.hpp"

namespace defc {

inline std::size_t pow_sz(std::size_t b, std::size_t e) {
    std::size_t r = 1;
    while (e--) {
        if (b != 0 && r > std::numeric_limits<std::size_t>::max() / b)
            throw std::overflow_error("pow_sz: overflow");
        r *= b;
    }
    return r;
}

// Index of (t[0], ..., t[n-1]) among n-tuples over {0..d-1}, first slot
// most significant; the coordinate layout of cochains is [tuple][module].
inline std::size_t tuple_index(const std::size_t* t, std::size_t n, std::size_t d) {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < n; ++k) idx = idx * d + t[k];
    return idx;
}

inline void tuple_decode(std::size_t idx, std::size_t n, std::size_t d, std::size_t* out) {
    for (std::size_t k = n; k-- > 0;) {
        out[k] = idx % d;
        idx /= d;
    }
}

// Multilinear map A^(x n) -> M in the basis coordinates of its source
// algebra and value bimodule. Degree 0 is a plain module element.
template <class K>
struct Cochain {
    std::size_t degree = 0;
    AlgebraPtr<K> source;
    BimodulePtr<K> values;
    std::vector<K> coords;

    std::size_t arg_dim() const { return source->dim(); }
    std::size_t mod_dim() const { return values->mod_dim; }
    std::size_t tuples() const { return pow_sz(arg_dim(), degree); }

    const K& at(std::size_t tuple, std::size_t m) const { return coords[tuple * mod_dim() + m]; }
    K& at(std::size_t tuple, std::size_t m) { return coords[tuple * mod_dim() + m]; }

    bool is_zero() const {
        for (const K& x : coords)
            if (!x.is_zero()) return false;
        return true;
    }

    Cochain& operator+=(const Cochain& o) {
        check_shape(o);
        for (std::size_t i = 0; i < coords.size(); ++i) coords[i] += o.coords[i];
        return *this;
    }
    Cochain& operator-=(const Cochain& o) {
        check_shape(o);
        for (std::size_t i = 0; i < coords.size(); ++i) coords[i] -= o.coords[i];
        return *this;
    }
    Cochain operator-() const {
        Cochain c = *this;
        for (K& x : c.coords) x = -x;
        return c;
    }
    friend Cochain operator+(Cochain a, const Cochain& b) { return a += b; }
    friend Cochain operator-(Cochain a, const Cochain& b) { return a -= b; }
    friend bool operator==(const Cochain& a, const Cochain& b) {
        return a.degree == b.degree && a.coords == b.coords;
    }
    friend bool operator!=(const Cochain& a, const Cochain& b) { return !(a == b); }

    void check_shape(const Cochain& o) const {
        if (degree != o.degree || coords.size() != o.coords.size())
            throw std::invalid_argument("Cochain: shape mismatch");
    }
};

template <class K>
Cochain<K> zero_cochain(AlgebraPtr<K> A, BimodulePtr<K> M, std::size_t degree) {
    if (M->alg_dim != A->dim()) throw std::invalid_argument("zero_cochain: bimodule is over a different algebra");
    Cochain<K> c;
    c.degree = degree;
    c.source = A;
    c.values = M;
    c.coords.assign(pow_sz(A->dim(), degree) * M->mod_dim, A->field.zero());
    return c;
}

// The multiplication of A as a 2-cochain with values in the regular
// bimodule; deformation sums treat it as the order-zero coefficient.
template <class K>
Cochain<K> product_cochain(AlgebraPtr<K> A, BimodulePtr<K> regular) {
    Cochain<K> c = zero_cochain(A, regular, 2);
    std::size_t d = A->dim();
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < d; ++k) c.at(i * d + j, k) = A->sc(i, j, k);
    return c;
}

// Value of f on arbitrary coordinate vectors, one per slot.
template <class K>
std::vector<K> eval_multilinear(const Cochain<K>& f, const std::vector<std::vector<K>>& args) {
    if (args.size() != f.degree) throw std::invalid_argument("eval_multilinear: wrong number of arguments");
    const FieldCtx<K>& F = f.source->field;
    std::size_t d = f.arg_dim(), dm = f.mod_dim(), n = f.degree;
    std::vector<K> out(dm, F.zero());
    std::vector<std::size_t> digits(n);
    for (std::size_t t = 0; t < f.tuples(); ++t) {
        tuple_decode(t, n, d, digits.data());
        K w = F.one();
        bool dead = false;
        for (std::size_t k = 0; k < n; ++k) {
            const K& a = args[k][digits[k]];
            if (a.is_zero()) {
                dead = true;
                break;
            }
            w = w * a;
        }
        if (dead) continue;
        for (std::size_t m = 0; m < dm; ++m)
            if (!f.at(t, m).is_zero()) out[m] += w * f.at(t, m);
    }
    return out;
}

// Values pushed through a linear map: (m . f)(x..) = m(f(x..)). The
// matrix columns are indexed by the old value module, rows by the new one.
template <class K>
Cochain<K> postcompose_values(const Cochain<K>& f, const Matrix<K>& m, BimodulePtr<K> new_values) {
    if (m.cols() != f.mod_dim() || new_values->mod_dim != m.rows())
        throw std::invalid_argument("postcompose_values: shape mismatch");
    Cochain<K> out = zero_cochain(f.source, new_values, f.degree);
    for (std::size_t t = 0; t < f.tuples(); ++t)
        for (std::size_t j = 0; j < f.mod_dim(); ++j) {
            const K& val = f.at(t, j);
            if (val.is_zero()) continue;
            for (std::size_t i = 0; i < m.rows(); ++i)
                if (!m.at(i, j).is_zero()) out.at(t, i) += m.at(i, j) * val;
        }
    return out;
}

// Arguments pulled back slot by slot: out(x1..xn) = f(m1 x1, ..., mn xn).
// Each matrix maps the new argument space into f's argument space.
template <class K>
Cochain<K> precompose_slots(const Cochain<K>& f, const std::vector<Matrix<K>>& mats, AlgebraPtr<K> new_source,
                            BimodulePtr<K> new_values) {
    if (mats.size() != f.degree) throw std::invalid_argument("precompose_slots: one matrix per slot required");
    std::size_t nd = new_source->dim();
    for (const auto& m : mats)
        if (m.rows() != f.arg_dim() || m.cols() != nd) throw std::invalid_argument("precompose_slots: shape mismatch");
    if (new_values->mod_dim != f.mod_dim()) throw std::invalid_argument("precompose_slots: value module mismatch");
    std::size_t n = f.degree;
    Cochain<K> out = zero_cochain(new_source, new_values, n);
    std::vector<std::size_t> S(n);
    for (std::size_t s = 0; s < out.tuples(); ++s) {
        tuple_decode(s, n, nd, S.data());
        std::vector<std::vector<K>> args(n);
        for (std::size_t k = 0; k < n; ++k) args[k] = mats[k].column(S[k]);
        std::vector<K> val = eval_multilinear(f, args);
        for (std::size_t m = 0; m < f.mod_dim(); ++m) out.at(s, m) = val[m];
    }
    return out;
}

// Hochschild coboundary, computed by scattering every stored
// coefficient into the degree-(n+1) coordinates:
//   (df)(x1..x_{n+1}) = x1 f(x2..) + sum_i (-1)^i f(.., x_i x_{i+1}, ..)
//                       + (-1)^{n+1} f(..x_n) x_{n+1}.
template <class K>
Cochain<K> coboundary_apply(const Cochain<K>& f) {
    const Algebra<K>& A = *f.source;
    const BimoduleStructure<K>& M = *f.values;
    const FieldCtx<K>& F = A.field;
    std::size_t d = A.dim(), dm = M.mod_dim, n = f.degree;
    Cochain<K> out = zero_cochain(f.source, f.values, n + 1);
    const K one = F.one(), minus = -F.one();
    std::vector<std::size_t> T(n);
    for (std::size_t t = 0; t < f.tuples(); ++t) {
        tuple_decode(t, n, d, T.data());
        for (std::size_t m = 0; m < dm; ++m) {
            const K& val = f.at(t, m);
            if (val.is_zero()) continue;
            // x1 . f(x2..x_{n+1})
            for (std::size_t x = 0; x < d; ++x) {
                std::size_t ot = x * f.tuples() + t;
                for (std::size_t u = 0; u < dm; ++u)
                    if (!M.l(x, m, u).is_zero()) out.at(ot, u) += val * M.l(x, m, u);
            }
            // f(.., x_i x_{i+1}, ..) with x_i x_{i+1} expanded over basis
            // products landing in slot pos of the stored tuple.
            for (std::size_t pos = 0; pos < n; ++pos) {
                const K& sign = (pos % 2 == 0) ? minus : one;  // (-1)^{pos+1}
                std::size_t suffix_width = n - 1 - pos;
                std::size_t suffix_count = pow_sz(d, suffix_width);
                std::size_t low = t % suffix_count;
                std::size_t high = t / (suffix_count * d);  // digits before pos
                for (std::size_t a = 0; a < d; ++a)
                    for (std::size_t b = 0; b < d; ++b) {
                        const K& coef = A.sc(a, b, T[pos]);
                        if (coef.is_zero()) continue;
                        std::size_t ot = (((high * d) + a) * d + b) * suffix_count + low;
                        out.at(ot, m) += sign * val * coef;
                    }
            }
            // (-1)^{n+1} f(x1..x_n) . x_{n+1}
            const K& last_sign = (n % 2 == 0) ? minus : one;
            for (std::size_t x = 0; x < d; ++x) {
                std::size_t ot = t * d + x;
                for (std::size_t u = 0; u < dm; ++u)
                    if (!M.r(m, x, u).is_zero()) out.at(ot, u) += last_sign * val * M.r(m, x, u);
            }
        }
    }
    return out;
}

// Matrix of the coboundary C^n -> C^{n+1} in coordinate bases; columns
// are filled independently, so the loop parallelizes cleanly.
template <class K>
Matrix<K> coboundary_matrix(AlgebraPtr<K> A, BimodulePtr<K> M, std::size_t n) {
    std::size_t cols = pow_sz(A->dim(), n) * M->mod_dim;
    std::size_t rows = pow_sz(A->dim(), n + 1) * M->mod_dim;
    Matrix<K> D(A->field, rows, cols);
    parallel_for(cols, [&](std::size_t c) {
        Cochain<K> unit = zero_cochain(A, M, n);
        unit.coords[c] = A->field.one();
        Cochain<K> img = coboundary_apply(unit);
        for (std::size_t r = 0; r < rows; ++r) D.at(r, c) = img.coords[r];
    });
    return D;
}

// f(g x1, ..., g xn) = g f(x1, ..., xn) for every group element, checked
// on basis tuples. in_action moves the arguments, out_action the values.
template <class K>
bool is_invariant(const Cochain<K>& f, const GroupAction<K>& in_action, const GroupAction<K>& out_action) {
    if (!in_action.same_group_shape(out_action))
        throw std::invalid_argument("is_invariant: actions have different group shapes");
    std::size_t d = f.arg_dim(), dm = f.mod_dim(), n = f.degree;
    std::vector<std::size_t> T(n);
    for (std::size_t g = 0; g < in_action.order(); ++g) {
        if (g == in_action.identity_index) continue;
        const Matrix<K>& gin = in_action.mat(g);
        const Matrix<K>& gout = out_action.mat(g);
        for (std::size_t t = 0; t < f.tuples(); ++t) {
            tuple_decode(t, n, d, T.data());
            std::vector<std::vector<K>> args(n);
            for (std::size_t k = 0; k < n; ++k) args[k] = gin.column(T[k]);
            std::vector<K> lhs = eval_multilinear(f, args);
            std::vector<K> block(dm);
            for (std::size_t m = 0; m < dm; ++m) block[m] = f.at(t, m);
            if (lhs != gout.apply(block)) return false;
        }
    }
    return true;
}

// Matrix of f |-> g_out^{-1} f (g_in x ... x g_in) on cochain coordinates.
template <class K>
Matrix<K> action_operator(AlgebraPtr<K> A, BimodulePtr<K> M, std::size_t n, const Matrix<K>& gin,
                          const Matrix<K>& gout_inv) {
    std::size_t d = A->dim(), dm = M->mod_dim;
    std::size_t tuples = pow_sz(d, n);
    Matrix<K> L(A->field, tuples * dm, tuples * dm);
    std::vector<std::size_t> S(n), T(n);
    for (std::size_t s = 0; s < tuples; ++s) {
        tuple_decode(s, n, d, S.data());
        for (std::size_t t = 0; t < tuples; ++t) {
            tuple_decode(t, n, d, T.data());
            K w = A->field.one();
            bool dead = false;
            for (std::size_t k = 0; k < n; ++k) {
                const K& e = gin.at(T[k], S[k]);
                if (e.is_zero()) {
                    dead = true;
                    break;
                }
                w = w * e;
            }
            if (dead) continue;
            for (std::size_t u = 0; u < dm; ++u)
                for (std::size_t m = 0; m < dm; ++m)
                    if (!gout_inv.at(u, m).is_zero()) L.at(s * dm + u, t * dm + m) = w * gout_inv.at(u, m);
        }
    }
    return L;
}

// Invariant cochains as the joint fixed space of the generator
// operators. No averaging is involved, so this works in any
// characteristic, including characteristic dividing the group order.
template <class K>
Subspace<K> invariant_subspace(AlgebraPtr<K> A, BimodulePtr<K> M, std::size_t n,
                               const GroupAction<K>& in_action, const GroupAction<K>& out_action) {
    if (!in_action.same_group_shape(out_action))
        throw std::invalid_argument("invariant_subspace: actions have different group shapes");
    std::size_t dim = pow_sz(A->dim(), n) * M->mod_dim;
    std::vector<std::size_t> cutting = in_action.cutting_set();
    if (cutting.empty()) return Subspace<K>::full(A->field, dim);
    Matrix<K> stacked(A->field, cutting.size() * dim, dim);
    for (std::size_t gi = 0; gi < cutting.size(); ++gi) {
        std::size_t g = cutting[gi];
        const Matrix<K>& gout_inv = out_action.mat(out_action.inverse_index(g));
        Matrix<K> L = action_operator(A, M, n, in_action.mat(g), gout_inv);
        for (std::size_t r = 0; r < dim; ++r)
            for (std::size_t c = 0; c < dim; ++c) {
                K v = L.at(r, c);
                if (r == c) v -= A->field.one();
                stacked.at(gi * dim + r, c) = v;
            }
    }
    return kernel_basis(stacked);
}

// Averaging projector onto the invariants. Only valid when |G| is
// invertible; kept as an independent cross-check of the kernel route.
template <class K>
Subspace<K> reynolds_invariants(AlgebraPtr<K> A, BimodulePtr<K> M, std::size_t n,
                                const GroupAction<K>& in_action, const GroupAction<K>& out_action) {
    if (A->field.char_divides(in_action.order()))
        throw std::domain_error("reynolds_invariants: group order not invertible in the field");
    std::size_t dim = pow_sz(A->dim(), n) * M->mod_dim;
    Matrix<K> P(A->field, dim, dim);
    for (std::size_t g = 0; g < in_action.order(); ++g) {
        const Matrix<K>& gout_inv = out_action.mat(out_action.inverse_index(g));
        P += action_operator(A, M, n, in_action.mat(g), gout_inv);
    }
    K inv_order = A->field.from_int(static_cast<long long>(in_action.order())).inv();
    return column_space(P.scaled(inv_order));
}

template <class K>
struct CohomologyResult {
    std::size_t degree = 0;
    std::size_t dim_invariant = 0;
    std::size_t dim_cocycles = 0;
    std::size_t dim_coboundaries = 0;
    std::size_t dim_cohomology = 0;
    Subspace<K> cocycles;       // in full cochain coordinates
    Subspace<K> coboundaries;   // likewise
    std::vector<Cochain<K>> representatives;
};

// Cohomology of the invariant subcomplex in one degree. Cocycles are
// computed inside the invariant subspace; coboundaries are images of
// invariant cochains one degree down (invariant again, since the
// coboundary commutes with the group operators).
template <class K>
CohomologyResult<K> equivariant_cohomology(AlgebraPtr<K> A, BimodulePtr<K> M, std::size_t n,
                                           const GroupAction<K>& in_action, const GroupAction<K>& out_action) {
    const FieldCtx<K>& F = A->field;
    CohomologyResult<K> res;
    res.degree = n;
    Subspace<K> Vn = invariant_subspace(A, M, n, in_action, out_action);
    res.dim_invariant = Vn.dim();

    Matrix<K> Dn = coboundary_matrix(A, M, n);
    Matrix<K> Dn_restricted = Dn * Vn.basis();
    Subspace<K> ker_coords = kernel_basis(Dn_restricted);
    std::vector<std::vector<K>> lifted;
    for (std::size_t j = 0; j < ker_coords.dim(); ++j)
        lifted.push_back(Vn.from_coordinates(ker_coords.basis().column(j)));
    res.cocycles = Subspace<K>::span_vectors(F, Dn.cols(), lifted);
    res.dim_cocycles = res.cocycles.dim();

    if (n == 0) {
        res.coboundaries = Subspace<K>::zero(F, Dn.cols());
    } else {
        Subspace<K> Vprev = invariant_subspace(A, M, n - 1, in_action, out_action);
        Matrix<K> Dprev = coboundary_matrix(A, M, n - 1);
        res.coboundaries = column_space(Dprev * Vprev.basis());
    }
    res.dim_coboundaries = res.coboundaries.dim();
    res.dim_cohomology = res.dim_cocycles - res.dim_coboundaries;

    Subspace<K> seen = res.coboundaries;
    for (std::size_t j = 0; j < res.cocycles.dim() && res.representatives.size() < res.dim_cohomology; ++j) {
        std::vector<K> z = res.cocycles.basis().column(j);
        if (seen.contains(z)) continue;
        Matrix<K> grown(F, z.size(), seen.dim() + 1);
        for (std::size_t c = 0; c < seen.dim(); ++c)
            for (std::size_t r = 0; r < z.size(); ++r) grown.at(r, c) = seen.basis().at(r, c);
        for (std::size_t r = 0; r < z.size(); ++r) grown.at(r, seen.dim()) = z[r];
        seen = Subspace<K>::span(grown);
        Cochain<K> rep = zero_cochain(A, M, n);
        rep.coords = std::move(z);
        res.representatives.push_back(std::move(rep));
    }
    return res;
}

// Every unit cochain of degree n maps to zero under the composite of
// two coboundaries; same predicate as a matrix product being zero, but
// without materializing the larger matrix.
template <class K>
bool composite_coboundary_vanishes(AlgebraPtr<K> A, BimodulePtr<K> M, std::size_t n) {
    std::size_t cols = pow_sz(A->dim(), n) * M->mod_dim;
    std::vector<char> ok(cols, 0);
    parallel_for(cols, [&](std::size_t c) {
        Cochain<K> unit = zero_cochain(A, M, n);
        unit.coords[c] = A->field.one();
        ok[c] = coboundary_apply(coboundary_apply(unit)).is_zero() ? 1 : 0;
    });
    for (char c : ok)
        if (!c) return false;
    return true;
}

}  // namespace defc
