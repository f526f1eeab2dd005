#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "prg/form.hpp"
#include "prg/matrix.hpp"
#include "prg/scalar.hpp"
#include "prg/tensor.hpp"

namespace prg {

// Deterministic random source.  Every randomized verification records the
// seed it ran with, so reports are reproducible bit for bit.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : seed_(seed), eng_(seed) {}

    std::uint64_t seed() const { return seed_; }

    long int_in(long lo, long hi) {
        std::uniform_int_distribution<long> d(lo, hi);
        return d(eng_);
    }

    Scalar integer_scalar(long lo, long hi) { return Scalar(int_in(lo, hi)); }

    Scalar nonzero_integer_scalar(long lo, long hi) {
        for (;;) {
            Scalar s = integer_scalar(lo, hi);
            if (!s.is_zero()) return s;
        }
    }

    Matrix matrix(int rows, int cols, long lo, long hi) {
        Matrix m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m.at(i, j) = integer_scalar(lo, hi);
        return m;
    }

    // Rejection-samples integer matrices until one is invertible.  For the
    // small sizes used here a handful of draws suffices.
    Matrix invertible_matrix(int n, long lo, long hi) {
        for (;;) {
            Matrix m = matrix(n, n, lo, hi);
            if (m.inverse()) return m;
        }
    }

    SparseTensor tensor(const std::vector<int>& shape, long lo, long hi) {
        SparseTensor t(shape);
        MultiIndex idx(shape.size(), 1);
        if (shape.empty()) return t;
        do {
            t.set(idx, integer_scalar(lo, hi));
        } while (next_index_shaped(idx, shape));
        return t;
    }

    // Random preregular form.  For m = 2 any invertible matrix works.  For
    // m > 2 a cyclically symmetric tensor has twist psi = I by construction,
    // so it is preregular as soon as it is first-slot nondegenerate;
    // rejection-sample the symmetrization until that holds.
    MLForm preregular_form(int m, int n, long lo = -3, long hi = 3) {
        if (m == 2) {
            MLForm f = MLForm::from_matrix(invertible_matrix(n, lo, hi));
            return f;
        }
        std::vector<int> shape(static_cast<size_t>(m), n);
        for (;;) {
            SparseTensor raw = tensor(shape, lo, hi);
            SparseTensor sym(shape);
            SparseTensor cyc = raw;
            for (int r = 0; r < m; ++r) {
                sym = sym + cyc;
                cyc = cyc.cycled_last_to_front();
            }
            if (sym.is_zero()) continue;
            MLForm f(m, n);
            f.coeffs = sym;
            if (check_nondegenerate(f).nondegenerate) return f;
        }
    }

    std::mt19937_64& engine() { return eng_; }

  private:
    static bool next_index_shaped(MultiIndex& idx, const std::vector<int>& shape) {
        for (size_t t = idx.size(); t-- > 0;) {
            if (idx[t] < shape[t]) { ++idx[t]; return true; }
            idx[t] = 1;
        }
        return false;
    }

    std::uint64_t seed_;
    std::mt19937_64 eng_;
};

} // namespace prg
