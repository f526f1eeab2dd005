#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "prg/errors.hpp"
#include "prg/matrix.hpp"
#include "prg/scalar.hpp"

namespace prg {

// Multi-index with 1-based component values, as in the usual subscript
// notation e_{i1...im}.
using MultiIndex = std::vector<int>;

// Advances idx through [1..n]^k in lexicographic order (last component
// fastest).  Returns false once idx has wrapped past (n,...,n).
inline bool next_index(MultiIndex& idx, int n) {
    for (size_t t = idx.size(); t-- > 0;) {
        if (idx[t] < n) { ++idx[t]; return true; }
        idx[t] = 1;
    }
    return false;
}

// Big-endian mixed-radix rank of a 1-based multi-index over [1..n]^k,
// yielding a 0-based linear position.  Inverse of unflatten_index.
inline long flatten_index(const MultiIndex& idx, int n) {
    long lin = 0;
    for (int v : idx) {
        if (v < 1 || v > n) throw dimension_error("flatten_index: component out of range");
        lin = lin * n + (v - 1);
    }
    return lin;
}

inline MultiIndex unflatten_index(long lin, size_t k, int n) {
    MultiIndex idx(k);
    for (size_t t = k; t-- > 0;) {
        idx[t] = static_cast<int>(lin % n) + 1;
        lin /= n;
    }
    return idx;
}

// Sparse tensor of exact rationals with explicit shape.  Only nonzero
// entries are stored; entries are keyed by 1-based multi-indices.
class SparseTensor {
  public:
    SparseTensor() = default;
    explicit SparseTensor(std::vector<int> shape) : shape_(std::move(shape)) {
        for (int d : shape_)
            if (d <= 0) throw dimension_error("SparseTensor: nonpositive extent");
    }

    static SparseTensor from_matrix(const Matrix& m) {
        SparseTensor t({m.rows(), m.cols()});
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j)
                if (!m.at(i, j).is_zero()) t.set({i + 1, j + 1}, m.at(i, j));
        return t;
    }

    Matrix to_matrix() const {
        if (order() != 2) throw dimension_error("SparseTensor::to_matrix: order != 2");
        Matrix m(shape_[0], shape_[1]);
        for (const auto& [idx, val] : entries_) m.at(idx[0] - 1, idx[1] - 1) = val;
        return m;
    }

    const std::vector<int>& shape() const { return shape_; }
    size_t order() const { return shape_.size(); }
    size_t nonzero_count() const { return entries_.size(); }
    bool is_zero() const { return entries_.empty(); }

    Scalar at(const MultiIndex& idx) const {
        check_index(idx);
        auto it = entries_.find(idx);
        return it == entries_.end() ? Scalar(0) : it->second;
    }

    void set(const MultiIndex& idx, const Scalar& v) {
        check_index(idx);
        if (v.is_zero()) entries_.erase(idx);
        else entries_[idx] = v;
    }

    void add_at(const MultiIndex& idx, const Scalar& v) {
        check_index(idx);
        auto [it, inserted] = entries_.try_emplace(idx, v);
        if (!inserted) {
            it->second += v;
            if (it->second.is_zero()) entries_.erase(it);
        }
    }

    // Nonzero entries in lexicographic index order (map order).
    const std::map<MultiIndex, Scalar>& entries() const { return entries_; }

    SparseTensor scaled(const Scalar& c) const {
        SparseTensor r(shape_);
        if (c.is_zero()) return r;
        for (const auto& [idx, val] : entries_) r.entries_[idx] = val * c;
        return r;
    }

    SparseTensor operator+(const SparseTensor& o) const {
        if (shape_ != o.shape_) throw dimension_error("SparseTensor: shape mismatch in add");
        SparseTensor r = *this;
        for (const auto& [idx, val] : o.entries_) r.add_at(idx, val);
        return r;
    }
    SparseTensor operator-(const SparseTensor& o) const { return *this + o.scaled(Scalar(-1)); }

    friend bool operator==(const SparseTensor& a, const SparseTensor& b) {
        return a.shape_ == b.shape_ && a.entries_ == b.entries_;
    }
    friend bool operator!=(const SparseTensor& a, const SparseTensor& b) { return !(a == b); }

    // Reorders slots: result index j takes its value from old slot perm[j].
    SparseTensor permuted(const std::vector<size_t>& perm) const {
        if (perm.size() != order()) throw dimension_error("SparseTensor::permuted: bad permutation size");
        std::vector<int> new_shape(order());
        for (size_t j = 0; j < perm.size(); ++j) new_shape[j] = shape_.at(perm[j]);
        SparseTensor r(new_shape);
        MultiIndex nidx(order());
        for (const auto& [idx, val] : entries_) {
            for (size_t j = 0; j < perm.size(); ++j) nidx[j] = idx[perm[j]];
            r.entries_[nidx] = val;
        }
        return r;
    }

    // Cyclic shift moving the last slot to the front:
    // result_{i1 i2 ... im} = this_{i2 ... im i1}.
    SparseTensor cycled_last_to_front() const {
        std::vector<size_t> perm(order());
        for (size_t j = 0; j < order(); ++j) perm[j] = (j + order() - 1) % order();
        return permuted(perm);
    }

    // Pairwise contraction: slot slots_a[t] of a is summed against slot
    // slots_b[t] of b.  The result carries a's remaining slots (in order)
    // followed by b's remaining slots (in order).
    static SparseTensor contract(const SparseTensor& a, const std::vector<size_t>& slots_a,
                                 const SparseTensor& b, const std::vector<size_t>& slots_b) {
        if (slots_a.size() != slots_b.size())
            throw dimension_error("SparseTensor::contract: slot count mismatch");
        for (size_t t = 0; t < slots_a.size(); ++t) {
            if (slots_a[t] >= a.order() || slots_b[t] >= b.order())
                throw dimension_error("SparseTensor::contract: slot out of range");
            if (a.shape_[slots_a[t]] != b.shape_[slots_b[t]])
                throw dimension_error("SparseTensor::contract: contracted extents differ");
        }
        std::vector<bool> used_a(a.order(), false), used_b(b.order(), false);
        for (size_t s : slots_a) {
            if (used_a[s]) throw dimension_error("SparseTensor::contract: repeated slot");
            used_a[s] = true;
        }
        for (size_t s : slots_b) {
            if (used_b[s]) throw dimension_error("SparseTensor::contract: repeated slot");
            used_b[s] = true;
        }
        std::vector<size_t> keep_a, keep_b;
        for (size_t s = 0; s < a.order(); ++s) if (!used_a[s]) keep_a.push_back(s);
        for (size_t s = 0; s < b.order(); ++s) if (!used_b[s]) keep_b.push_back(s);

        std::vector<int> rshape;
        for (size_t s : keep_a) rshape.push_back(a.shape_[s]);
        for (size_t s : keep_b) rshape.push_back(b.shape_[s]);
        SparseTensor r(rshape);

        // Bucket b's entries by their contracted sub-index.
        std::map<MultiIndex, std::vector<std::pair<MultiIndex, Scalar>>> buckets;
        MultiIndex key(slots_b.size()), rem_b(keep_b.size());
        for (const auto& [idx, val] : b.entries_) {
            for (size_t t = 0; t < slots_b.size(); ++t) key[t] = idx[slots_b[t]];
            for (size_t t = 0; t < keep_b.size(); ++t) rem_b[t] = idx[keep_b[t]];
            buckets[key].emplace_back(rem_b, val);
        }

        MultiIndex ridx(rshape.size());
        for (const auto& [idx, val] : a.entries_) {
            for (size_t t = 0; t < slots_a.size(); ++t) key[t] = idx[slots_a[t]];
            auto it = buckets.find(key);
            if (it == buckets.end()) continue;
            for (size_t t = 0; t < keep_a.size(); ++t) ridx[t] = idx[keep_a[t]];
            for (const auto& [rem, bval] : it->second) {
                for (size_t t = 0; t < rem.size(); ++t) ridx[keep_a.size() + t] = rem[t];
                r.add_at(ridx, val * bval);
            }
        }
        return r;
    }

  private:
    void check_index(const MultiIndex& idx) const {
        if (idx.size() != shape_.size())
            throw dimension_error("SparseTensor: index order mismatch");
        for (size_t t = 0; t < idx.size(); ++t)
            if (idx[t] < 1 || idx[t] > shape_[t])
                throw dimension_error("SparseTensor: index component out of range");
    }

    std::vector<int> shape_;
    std::map<MultiIndex, Scalar> entries_;
};

} // namespace prg
