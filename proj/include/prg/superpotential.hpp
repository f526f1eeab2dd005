#pragma once

#include <vector>

#include "prg/errors.hpp"
#include "prg/form.hpp"
#include "prg/matrix.hpp"
#include "prg/tensor.hpp"

namespace prg {

// Degree-N relation space of the algebra associated to an m-linear form:
// the span of the slices of f over its first m-N indices, each slice read
// as a homogeneous relation sum c_{j1..jN} x_{j1}...x_{jN}.
struct RelationSpace {
    int N = 0;
    int dim = 0;
    std::vector<SparseTensor> basis; // linearly independent, RREF-canonical
    int rank = 0;
};

struct GradedDims {
    int maxdeg = 0;
    std::vector<long> dims; // indexed 0..maxdeg
};

inline long int_pow(int base, int exp) {
    long r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

// Slices f over its first m-N indices and returns an RREF-canonical basis of
// the span of those slices inside V^{tensor N}.
inline RelationSpace derive_relations(const MLForm& f, int N) {
    f.validate();
    if (N < 2 || N > f.arity)
        throw precondition_error("derive_relations: need 2 <= N <= arity");
    const int n = f.dim;
    const int prefix_len = f.arity - N;
    const long rows = int_pow(n, prefix_len);
    const long cols = int_pow(n, N);

    Matrix flat(static_cast<int>(rows), static_cast<int>(cols));
    for (const auto& [idx, val] : f.coeffs.entries()) {
        MultiIndex prefix(idx.begin(), idx.begin() + prefix_len);
        MultiIndex suffix(idx.begin() + prefix_len, idx.end());
        flat.at(static_cast<int>(flatten_index(prefix, n)),
                static_cast<int>(flatten_index(suffix, n))) = val;
    }

    RrefResult rr = flat.rref();
    RelationSpace out;
    out.N = N;
    out.dim = n;
    out.rank = rr.rank;
    for (int r = 0; r < rr.rank; ++r) {
        SparseTensor rel(std::vector<int>(static_cast<size_t>(N), n));
        for (int c = 0; c < flat.cols(); ++c) {
            const Scalar& v = rr.reduced.at(r, c);
            if (!v.is_zero()) rel.set(unflatten_index(c, static_cast<size_t>(N), n), v);
        }
        out.basis.push_back(std::move(rel));
    }
    return out;
}

// Hilbert data of the quotient by the relation space: dims[k] is the corank
// of sum_{i+N+j=k} V^{i} * R * V^{j} inside the degree-k word space, computed
// by exact elimination over the word basis.  Word counts above the budget
// raise budget_error rather than grinding.
inline GradedDims graded_dimension_of_space(const RelationSpace& rs, int maxdeg,
                                            long word_budget = 100000) {
    const int n = rs.dim;
    GradedDims out;
    out.maxdeg = maxdeg;
    out.dims.assign(static_cast<size_t>(maxdeg) + 1, 0);
    for (int k = 0; k <= maxdeg; ++k) {
        long words = int_pow(n, k);
        if (words > word_budget)
            throw budget_error("graded_dimension: degree " + std::to_string(k) + " needs " +
                               std::to_string(words) + " words, budget is " +
                               std::to_string(word_budget));
        if (k < rs.N) {
            out.dims[static_cast<size_t>(k)] = words;
            continue;
        }
        // Rows span V^i * R * V^j over all splits i + N + j = k.
        long row_count = 0;
        for (int i = 0; i + rs.N <= k; ++i)
            row_count += static_cast<long>(rs.basis.size()) * int_pow(n, k - rs.N);
        Matrix rows(static_cast<int>(row_count), static_cast<int>(words));
        int r = 0;
        for (int i = 0; i + rs.N <= k; ++i) {
            int j = k - rs.N - i;
            const long lo = int_pow(n, i), hi = int_pow(n, j);
            for (const SparseTensor& rel : rs.basis) {
                for (long u = 0; u < lo; ++u) {
                    for (long v = 0; v < hi; ++v) {
                        for (const auto& [idx, val] : rel.entries()) {
                            long mid = flatten_index(idx, n);
                            long col = (u * int_pow(n, rs.N) + mid) * hi + v;
                            rows.at(r, static_cast<int>(col)) = val;
                        }
                        ++r;
                    }
                }
            }
        }
        out.dims[static_cast<size_t>(k)] = words - rows.rref().rank;
    }
    return out;
}

inline GradedDims graded_dimension(const MLForm& f, int N, int maxdeg,
                                   long word_budget = 100000) {
    return graded_dimension_of_space(derive_relations(f, N), maxdeg, word_budget);
}

} // namespace prg
