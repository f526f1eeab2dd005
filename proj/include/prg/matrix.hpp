#pragma once

#include <initializer_list>
#include <optional>
#include <utility>
#include <vector>

#include "prg/errors.hpp"
#include "prg/scalar.hpp"

namespace prg {

struct RrefResult;

// Dense matrix of exact rationals.  Row/column indices are 0-based at this
// level; the 1-based conventions of the math layer are translated at the
// call sites that mix matrices with tensors or generator labels.
class Matrix {
  public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {
        if (rows < 0 || cols < 0) throw dimension_error("Matrix: negative dimension");
    }
    // Row-major brace construction: Matrix{{a,b},{c,d}}.
    Matrix(std::initializer_list<std::initializer_list<Scalar>> rows) {
        rows_ = static_cast<int>(rows.size());
        cols_ = rows_ == 0 ? 0 : static_cast<int>(rows.begin()->size());
        a_.reserve(static_cast<size_t>(rows_) * cols_);
        for (const auto& r : rows) {
            if (static_cast<int>(r.size()) != cols_)
                throw dimension_error("Matrix: ragged initializer");
            for (const auto& x : r) a_.push_back(x);
        }
    }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }
    static Matrix zero(int rows, int cols) { return Matrix(rows, cols); }
    static Matrix diagonal(const std::vector<Scalar>& d) {
        Matrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
        for (int i = 0; i < m.rows(); ++i) m.at(i, i) = d[static_cast<size_t>(i)];
        return m;
    }
    static Matrix column(const std::vector<Scalar>& v) {
        Matrix m(static_cast<int>(v.size()), 1);
        for (int i = 0; i < m.rows(); ++i) m.at(i, 0) = v[static_cast<size_t>(i)];
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Scalar& at(int i, int j) {
        check_index(i, j);
        return a_[static_cast<size_t>(i) * cols_ + j];
    }
    const Scalar& at(int i, int j) const {
        check_index(i, j);
        return a_[static_cast<size_t>(i) * cols_ + j];
    }

    friend bool operator==(const Matrix& x, const Matrix& y) {
        return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
    }
    friend bool operator!=(const Matrix& x, const Matrix& y) { return !(x == y); }

    Matrix operator+(const Matrix& o) const {
        require_same_shape(o, "add");
        Matrix r = *this;
        for (size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
        return r;
    }
    Matrix operator-(const Matrix& o) const {
        require_same_shape(o, "subtract");
        Matrix r = *this;
        for (size_t i = 0; i < a_.size(); ++i) r.a_[i] -= o.a_[i];
        return r;
    }
    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_)
            throw dimension_error("Matrix: product shape mismatch");
        Matrix r(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const Scalar& aik = at(i, k);
                if (aik.is_zero()) continue;
                for (int j = 0; j < o.cols_; ++j) r.at(i, j) += aik * o.at(k, j);
            }
        return r;
    }
    Matrix operator*(const Scalar& c) const {
        Matrix r = *this;
        for (auto& x : r.a_) x *= c;
        return r;
    }
    friend Matrix operator*(const Scalar& c, const Matrix& m) { return m * c; }
    Matrix operator-() const { return *this * Scalar(-1); }

    Matrix transpose() const {
        Matrix r(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    bool is_square() const { return rows_ == cols_; }
    bool is_zero() const {
        for (const auto& x : a_) if (!x.is_zero()) return false;
        return true;
    }
    bool is_identity() const {
        if (!is_square()) return false;
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                if (at(i, j) != Scalar(i == j ? 1 : 0)) return false;
        return true;
    }

    // Reduced row echelon form by exact Gauss-Jordan elimination: pivots are
    // 1, pivot columns are cleared above and below.
    RrefResult rref() const;

    int rank() const;

    // Solves A x = b for a single right-hand-side column; returns the
    // particular solution with all free variables set to zero, or nullopt if
    // the system is inconsistent.
    std::optional<Matrix> solve(const Matrix& b) const;

    std::optional<Matrix> inverse() const;

    Scalar determinant() const {
        if (!is_square()) throw dimension_error("Matrix::determinant: not square");
        Matrix m = *this;
        Scalar det(1);
        for (int c = 0; c < cols_; ++c) {
            int p = -1;
            for (int i = c; i < rows_; ++i)
                if (!m.at(i, c).is_zero()) { p = i; break; }
            if (p < 0) return Scalar(0);
            if (p != c) { m.swap_rows(p, c); det = -det; }
            det *= m.at(c, c);
            Scalar inv = m.at(c, c).inverse();
            for (int i = c + 1; i < rows_; ++i) {
                if (m.at(i, c).is_zero()) continue;
                Scalar f = m.at(i, c) * inv;
                for (int j = c; j < cols_; ++j) m.at(i, j) -= f * m.at(c, j);
            }
        }
        return det;
    }

    // Integer power of a square matrix; negative exponents require
    // invertibility.
    Matrix pow(long e) const {
        if (!is_square()) throw dimension_error("Matrix::pow: not square");
        Matrix base = *this;
        if (e < 0) {
            auto inv = inverse();
            if (!inv) throw precondition_error("Matrix::pow: negative power of a singular matrix");
            base = *inv;
        }
        unsigned long n = static_cast<unsigned long>(e < 0 ? -e : e);
        Matrix acc = identity(rows_);
        while (n > 0) {
            if (n & 1) acc = acc * base;
            base = base * base;
            n >>= 1;
        }
        return acc;
    }

    // A nonzero column v with v^T * this == 0, if one exists (i.e. the rows
    // are linearly dependent).  Used to produce degeneracy witnesses.
    std::optional<Matrix> left_kernel_vector() const;

  private:
    void check_index(int i, int j) const {
        if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
            throw dimension_error("Matrix: index out of range");
    }
    void require_same_shape(const Matrix& o, const char* op) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw dimension_error(std::string("Matrix: shape mismatch in ") + op);
    }
    void swap_rows(int i, int j) {
        if (i == j) return;
        for (int c = 0; c < cols_; ++c) std::swap(at(i, c), at(j, c));
    }

    int rows_, cols_;
    std::vector<Scalar> a_;
};

struct RrefResult {
    Matrix reduced;
    int rank = 0;
    std::vector<int> pivot_cols; // 0-based, strictly increasing
};

inline RrefResult Matrix::rref() const {
    RrefResult res;
    res.reduced = *this;
    Matrix& m = res.reduced;
    int r = 0;
    for (int c = 0; c < cols_ && r < rows_; ++c) {
        int p = -1;
        for (int i = r; i < rows_; ++i)
            if (!m.at(i, c).is_zero()) { p = i; break; }
        if (p < 0) continue;
        m.swap_rows(p, r);
        Scalar inv = m.at(r, c).inverse();
        for (int j = c; j < cols_; ++j) m.at(r, j) *= inv;
        for (int i = 0; i < rows_; ++i) {
            if (i == r || m.at(i, c).is_zero()) continue;
            Scalar f = m.at(i, c);
            for (int j = c; j < cols_; ++j) m.at(i, j) -= f * m.at(r, j);
        }
        res.pivot_cols.push_back(c);
        ++r;
    }
    res.rank = r;
    return res;
}

inline int Matrix::rank() const { return rref().rank; }

inline std::optional<Matrix> Matrix::solve(const Matrix& b) const {
    if (b.rows_ != rows_ || b.cols_ != 1)
        throw dimension_error("Matrix::solve: rhs must be a rows()x1 column");
    Matrix aug(rows_, cols_ + 1);
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
        aug.at(i, cols_) = b.at(i, 0);
    }
    RrefResult rr = aug.rref();
    for (int c : rr.pivot_cols)
        if (c == cols_) return std::nullopt; // pivot in the rhs column: inconsistent
    Matrix x(cols_, 1);
    for (size_t k = 0; k < rr.pivot_cols.size(); ++k)
        x.at(rr.pivot_cols[k], 0) = rr.reduced.at(static_cast<int>(k), cols_);
    return x;
}

inline std::optional<Matrix> Matrix::inverse() const {
    if (!is_square()) throw dimension_error("Matrix::inverse: not square");
    Matrix aug(rows_, 2 * cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
        aug.at(i, cols_ + i) = 1;
    }
    RrefResult rr = aug.rref();
    // Invertible iff the left block reduced to the identity, i.e. the first
    // n pivots are exactly columns 0..n-1.
    if (rr.rank < rows_ || rr.pivot_cols[static_cast<size_t>(rows_) - 1] != rows_ - 1)
        return std::nullopt;
    Matrix inv(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) inv.at(i, j) = rr.reduced.at(i, cols_ + j);
    return inv;
}

inline std::optional<Matrix> Matrix::left_kernel_vector() const {
    Matrix t = transpose();
    RrefResult rr = t.rref();
    if (rr.rank == rows_) return std::nullopt;
    // First non-pivot column of the transpose gives a kernel basis vector.
    std::vector<bool> is_pivot(static_cast<size_t>(rows_), false);
    for (int c : rr.pivot_cols) is_pivot[static_cast<size_t>(c)] = true;
    int free_col = -1;
    for (int c = 0; c < rows_; ++c)
        if (!is_pivot[static_cast<size_t>(c)]) { free_col = c; break; }
    Matrix v(rows_, 1);
    v.at(free_col, 0) = 1;
    for (size_t k = 0; k < rr.pivot_cols.size(); ++k) {
        int pc = rr.pivot_cols[k];
        if (pc < free_col)
            v.at(pc, 0) = -rr.reduced.at(static_cast<int>(k), free_col);
    }
    return v;
}

} // namespace prg
