#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "field.hpp"

namespace defc {

// Dense row-major matrix over an exact field. Sizes here are desk scale
// (hundreds, rarely a few thousand rows), so plain Gaussian elimination
// with exact scalars is the right tool; no pivoting heuristics are
// needed for stability, and determinism matters more than speed.
template <class K>
class Matrix {
  public:
    Matrix() = default;
    Matrix(FieldCtx<K> field, std::size_t rows, std::size_t cols)
        : field_(field), rows_(rows), cols_(cols), e_(rows * cols, field.zero()) {}

    static Matrix identity(FieldCtx<K> field, std::size_t n) {
        Matrix m(field, n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = field.one();
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const FieldCtx<K>& field() const { return field_; }

    K& at(std::size_t r, std::size_t c) { return e_[r * cols_ + c]; }
    const K& at(std::size_t r, std::size_t c) const { return e_[r * cols_ + c]; }

    bool is_zero() const {
        for (const K& x : e_)
            if (!x.is_zero()) return false;
        return true;
    }

    Matrix transpose() const {
        Matrix t(field_, cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
        return t;
    }

    std::vector<K> apply(const std::vector<K>& v) const {
        if (v.size() != cols_) throw std::invalid_argument("Matrix::apply: size mismatch");
        std::vector<K> out(rows_, field_.zero());
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                if (!at(r, c).is_zero()) out[r] += at(r, c) * v[c];
        return out;
    }

    std::vector<K> column(std::size_t c) const {
        std::vector<K> out(rows_, field_.zero());
        for (std::size_t r = 0; r < rows_; ++r) out[r] = at(r, c);
        return out;
    }

    Matrix& operator+=(const Matrix& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < e_.size(); ++i) e_[i] += o.e_[i];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < e_.size(); ++i) e_[i] -= o.e_[i];
        return *this;
    }
    Matrix operator-() const {
        Matrix m = *this;
        for (K& x : m.e_) x = -x;
        return m;
    }
    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("Matrix: product shape mismatch");
        Matrix c(a.field_, a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const K& aik = a.at(i, k);
                if (aik.is_zero()) continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    if (!b.at(k, j).is_zero()) c.at(i, j) += aik * b.at(k, j);
            }
        return c;
    }

    Matrix scaled(const K& s) const {
        Matrix m = *this;
        for (K& x : m.e_) x = x * s;
        return m;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
    }
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  private:
    void check_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("Matrix: shape mismatch");
    }

    FieldCtx<K> field_;
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<K> e_;
};

template <class K>
struct RrefResult {
    Matrix<K> reduced;
    std::vector<std::size_t> pivots;  // pivot column of each nonzero row, in order
    std::size_t rank = 0;
};

// Reduced row echelon form with first-pivot tie-breaking: columns are
// scanned left to right and the pivot is the first remaining row with a
// nonzero entry. RREF is unique, so this choice only fixes the
// elimination order, but fixing it keeps intermediate states (and any
// future row bookkeeping) reproducible.
template <class K>
RrefResult<K> rref(Matrix<K> m) {
    RrefResult<K> out;
    std::size_t lead = 0;
    for (std::size_t col = 0; col < m.cols() && lead < m.rows(); ++col) {
        std::size_t piv = lead;
        while (piv < m.rows() && m.at(piv, col).is_zero()) ++piv;
        if (piv == m.rows()) continue;
        if (piv != lead)
            for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m.at(piv, c), m.at(lead, c));
        K s = m.at(lead, col).inv();
        for (std::size_t c = col; c < m.cols(); ++c) m.at(lead, c) = m.at(lead, c) * s;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == lead || m.at(r, col).is_zero()) continue;
            K f = m.at(r, col);
            for (std::size_t c = col; c < m.cols(); ++c) m.at(r, c) -= f * m.at(lead, c);
        }
        out.pivots.push_back(col);
        ++lead;
    }
    out.rank = out.pivots.size();
    out.reduced = std::move(m);
    return out;
}

template <class K>
std::size_t rank(const Matrix<K>& m) {
    return rref(m).rank;
}

// Canonical particular solution of m x = b: free variables are set to
// zero, so the answer is a function of (m, b) alone.
template <class K>
std::optional<std::vector<K>> solve_linear(const Matrix<K>& m, const std::vector<K>& b) {
    if (b.size() != m.rows()) throw std::invalid_argument("solve_linear: rhs size mismatch");
    const FieldCtx<K>& F = m.field();
    Matrix<K> aug(F, m.rows(), m.cols() + 1);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) aug.at(r, c) = m.at(r, c);
        aug.at(r, m.cols()) = b[r];
    }
    RrefResult<K> rr = rref(std::move(aug));
    std::vector<K> x(m.cols(), F.zero());
    for (std::size_t i = 0; i < rr.pivots.size(); ++i) {
        if (rr.pivots[i] == m.cols()) return std::nullopt;  // pivot in rhs column: inconsistent
        x[rr.pivots[i]] = rr.reduced.at(i, m.cols());
    }
    return x;
}

// Kernel basis in the standard back-substitution form: one vector per
// free column, with a 1 in the free position. Columns of the result
// span ker m exactly.
template <class K>
Matrix<K> kernel_matrix(const Matrix<K>& m) {
    const FieldCtx<K>& F = m.field();
    RrefResult<K> rr = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t p : rr.pivots) is_pivot[p] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < m.cols(); ++c)
        if (!is_pivot[c]) free_cols.push_back(c);
    Matrix<K> ker(F, m.cols(), free_cols.size());
    for (std::size_t j = 0; j < free_cols.size(); ++j) {
        std::size_t fc = free_cols[j];
        ker.at(fc, j) = F.one();
        for (std::size_t i = 0; i < rr.pivots.size(); ++i) ker.at(rr.pivots[i], j) = -rr.reduced.at(i, fc);
    }
    return ker;
}

template <class K>
std::optional<Matrix<K>> inverse(const Matrix<K>& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse: matrix not square");
    const FieldCtx<K>& F = m.field();
    std::size_t n = m.rows();
    if (n == 0) return Matrix<K>(F, 0, 0);
    Matrix<K> aug(F, n, 2 * n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) aug.at(r, c) = m.at(r, c);
        aug.at(r, n + r) = F.one();
    }
    RrefResult<K> rr = rref(std::move(aug));
    if (rr.rank < n || rr.pivots.back() >= n) return std::nullopt;
    Matrix<K> inv(F, n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) inv.at(r, c) = rr.reduced.at(r, n + c);
    return inv;
}

}  // namespace defc
