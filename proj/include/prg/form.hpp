#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "prg/errors.hpp"
#include "prg/matrix.hpp"
#include "prg/scalar.hpp"
#include "prg/tensor.hpp"

namespace prg {

// m-linear form on an n-dimensional space, stored as the coefficient tensor
// f_{i1...im} of shape [n]^m (1-based indices).
struct MLForm {
    int arity = 0; // m >= 2 for the constructions downstream; >= 1 tolerated here
    int dim = 0;   // n >= 1
    SparseTensor coeffs;

    MLForm() = default;
    MLForm(int m, int n) : arity(m), dim(n), coeffs(std::vector<int>(static_cast<size_t>(m), n)) {
        if (m < 1 || n < 1) throw dimension_error("MLForm: arity and dim must be positive");
    }

    static MLForm from_matrix(const Matrix& e) {
        if (!e.is_square()) throw dimension_error("MLForm::from_matrix: not square");
        MLForm f(2, e.rows());
        f.coeffs = SparseTensor::from_matrix(e);
        return f;
    }

    Scalar at(const MultiIndex& idx) const { return coeffs.at(idx); }
    void set(const MultiIndex& idx, const Scalar& v) { coeffs.set(idx, v); }

    bool operator==(const MLForm& o) const {
        return arity == o.arity && dim == o.dim && coeffs == o.coeffs;
    }
    bool operator!=(const MLForm& o) const { return !(*this == o); }

    bool shape_ok() const {
        if (arity < 1 || dim < 1) return false;
        if (coeffs.order() != static_cast<size_t>(arity)) return false;
        for (int d : coeffs.shape())
            if (d != dim) return false;
        return true;
    }
    void validate() const {
        if (!shape_ok()) throw precondition_error("MLForm: inconsistent shape");
        if (coeffs.is_zero()) throw precondition_error("MLForm: zero form");
    }
};

struct NondegeneracyResult {
    bool nondegenerate = false;
    std::optional<Matrix> witness; // nonzero v (n x 1) with sum_i v_i f_{i,rest} = 0 for all rest
};

struct PreregularityReport {
    NondegeneracyResult nondegeneracy;
    std::optional<Matrix> twist; // psi solving the cyclic identity, if the system is consistent
    bool twist_invertible = false;
    bool pass() const {
        return nondegeneracy.nondegenerate && twist.has_value() && twist_invertible;
    }
};

struct AutMembership {
    bool member = false;
    Scalar lambda; // nonzero scale factor when member
};

// Flattening of the first slot against the rest: G(i, flat(i2..im)) where the
// column rank runs over [1..n]^(m-1) big-endian.
inline Matrix first_slot_flattening(const MLForm& f) {
    f.validate();
    long cols = 1;
    for (int t = 1; t < f.arity; ++t) cols *= f.dim;
    Matrix g(f.dim, static_cast<int>(cols));
    for (const auto& [idx, val] : f.coeffs.entries()) {
        MultiIndex rest(idx.begin() + 1, idx.end());
        g.at(idx[0] - 1, static_cast<int>(flatten_index(rest, f.dim))) = val;
    }
    return g;
}

// Flattening of the last slot against the rest: H(flat(i1..i(m-1)), j).
inline Matrix last_slot_flattening(const MLForm& f) {
    f.validate();
    long rows = 1;
    for (int t = 1; t < f.arity; ++t) rows *= f.dim;
    Matrix h(static_cast<int>(rows), f.dim);
    for (const auto& [idx, val] : f.coeffs.entries()) {
        MultiIndex rest(idx.begin(), idx.end() - 1);
        h.at(static_cast<int>(flatten_index(rest, f.dim)), idx.back() - 1) = val;
    }
    return h;
}

// Nondegeneracy in the first slot: the flattening must have full row rank n.
// When it does not, a nonzero left-kernel vector witnesses a v1 annihilating
// the form against all other arguments.
inline NondegeneracyResult check_nondegenerate(const MLForm& f) {
    Matrix g = first_slot_flattening(f);
    NondegeneracyResult res;
    auto v = g.left_kernel_vector();
    if (v) {
        res.nondegenerate = false;
        res.witness = std::move(*v);
    } else {
        res.nondegenerate = true;
    }
    return res;
}

namespace detail {

// Solves the cyclic-twist linear system f_{i1..im} = sum_j psi_{j,im} *
// f_{j,i1..i(m-1)} column by column.  Returns the (by nondegeneracy unique)
// solution if consistent, regardless of its invertibility.
inline std::optional<Matrix> solve_cyclic_twist(const MLForm& f) {
    Matrix g = first_slot_flattening(f); // n x n^(m-1)
    Matrix gt = g.transpose();           // n^(m-1) x n; column t of psi solves gt * x = c_t
    Matrix h = last_slot_flattening(f);  // n^(m-1) x n; column t is c_t
    Matrix psi(f.dim, f.dim);
    for (int t = 0; t < f.dim; ++t) {
        Matrix ct(h.rows(), 1);
        for (int r = 0; r < h.rows(); ++r) ct.at(r, 0) = h.at(r, t);
        auto x = gt.solve(ct);
        if (!x) return std::nullopt;
        for (int j = 0; j < f.dim; ++j) psi.at(j, t) = x->at(j, 0);
    }
    return psi;
}

} // namespace detail

// The twist psi in f(v1,...,vm) = f(psi(vm), v1, ..., v(m-1)); requires
// nondegeneracy (which makes the solution unique) and returns nullopt when
// the system is inconsistent or the solution is singular.
inline std::optional<Matrix> find_cyclic_twist(const MLForm& f) {
    if (!check_nondegenerate(f).nondegenerate)
        throw precondition_error("find_cyclic_twist: form is degenerate in the first slot");
    auto psi = detail::solve_cyclic_twist(f);
    if (!psi) return std::nullopt;
    if (!psi->inverse()) return std::nullopt;
    return psi;
}

inline PreregularityReport check_preregular(const MLForm& f) {
    PreregularityReport rep;
    rep.nondegeneracy = check_nondegenerate(f);
    if (!rep.nondegeneracy.nondegenerate) return rep;
    rep.twist = detail::solve_cyclic_twist(f);
    rep.twist_invertible = rep.twist && rep.twist->inverse().has_value();
    return rep;
}

// Dual form: sum over i1..i(m-1) of dual_{i,i1..i(m-1)} * f_{i1..i(m-1),j}
// equals delta_{ij}.  For m > 2 the system is under-determined; the
// RREF-pivot particular solution (free variables zero) is chosen so results
// are deterministic.
inline MLForm dual_form(const MLForm& f) {
    f.validate();
    Matrix h = last_slot_flattening(f); // n^(m-1) x n
    Matrix ht = h.transpose();          // n x n^(m-1); row i of dual flattening solves ht * x = delta_i
    MLForm dual(f.arity, f.dim);
    for (int i = 0; i < f.dim; ++i) {
        Matrix rhs(f.dim, 1);
        rhs.at(i, 0) = 1;
        auto x = ht.solve(rhs);
        if (!x)
            throw precondition_error("dual_form: no solution (form is degenerate in the last slot)");
        for (int r = 0; r < x->rows(); ++r) {
            if (x->at(r, 0).is_zero()) continue;
            MultiIndex rest = unflatten_index(r, static_cast<size_t>(f.arity) - 1, f.dim);
            MultiIndex idx;
            idx.reserve(static_cast<size_t>(f.arity));
            idx.push_back(i + 1);
            idx.insert(idx.end(), rest.begin(), rest.end());
            dual.set(idx, x->at(r, 0));
        }
    }
    return dual;
}

// Transforms every slot of e by phi (as functions: e(phi v1, ..., phi vm)),
// i.e. contracts each slot's index against the ROW index of phi.
inline SparseTensor transform_all_slots(const SparseTensor& t, const Matrix& phi) {
    SparseTensor cur = t;
    SparseTensor p2 = SparseTensor::from_matrix(phi);
    for (size_t s = 0; s < t.order(); ++s)
        cur = SparseTensor::contract(cur, {0}, p2, {0}); // consumed slot cycles to the back
    return cur;
}

// Membership of phi in the automorphism group of e: e composed with phi in
// every slot must equal lambda * e for a nonzero scalar lambda, read off the
// first nonzero entry and then confirmed on all entries.
inline AutMembership aut_membership(const MLForm& e, const Matrix& phi) {
    e.validate();
    if (phi.rows() != e.dim || phi.cols() != e.dim)
        throw dimension_error("aut_membership: phi has wrong size");
    if (!phi.inverse()) throw precondition_error("aut_membership: phi is singular");
    SparseTensor transformed = transform_all_slots(e.coeffs, phi);
    const auto& [idx0, v0] = *e.coeffs.entries().begin();
    Scalar lambda = transformed.at(idx0) / v0;
    AutMembership res;
    if (lambda.is_zero()) return res;
    if (transformed == e.coeffs.scaled(lambda)) {
        res.member = true;
        res.lambda = lambda;
    }
    return res;
}

// Twisted form: e^phi_{i1..im} = sum e_{i1,l2..lm} (phi^{-1})_{l2,i2} ...
// (phi^{-(m-1)})_{lm,im}.  Slot j >= 2 is contracted against the row index
// of phi^{-(j-1)}; slot 1 is untouched.
inline MLForm twist_form(const MLForm& e, const Matrix& phi) {
    e.validate();
    if (phi.rows() != e.dim || phi.cols() != e.dim)
        throw dimension_error("twist_form: phi has wrong size");
    auto phi_inv = phi.inverse();
    if (!phi_inv) throw precondition_error("twist_form: phi is singular");
    SparseTensor cur = e.coeffs;
    Matrix power = Matrix::identity(e.dim);
    // After contracting slot 1, the new index lands at the back, so slot 1 is
    // always the next un-twisted slot; m-1 rounds rotate everything into place.
    for (int j = 2; j <= e.arity; ++j) {
        power = power * *phi_inv; // phi^{-(j-1)}
        cur = SparseTensor::contract(cur, {1}, SparseTensor::from_matrix(power), {0});
    }
    MLForm out(e.arity, e.dim);
    out.coeffs = cur;
    return out;
}

// Definitional identity for the twist: contracting slots 2..m of e^phi with
// phi, phi^2, ..., phi^(m-1) (row side) recovers e.  Used by tests and the
// connectivity verifier as an internal consistency check.
inline bool twist_form_roundtrip_ok(const MLForm& e, const MLForm& twisted, const Matrix& phi) {
    SparseTensor cur = twisted.coeffs;
    Matrix power = Matrix::identity(e.dim);
    for (int j = 2; j <= e.arity; ++j) {
        power = power * phi;
        cur = SparseTensor::contract(cur, {1}, SparseTensor::from_matrix(power), {0});
    }
    return cur == e.coeffs;
}

// Twisted-superpotential condition: s equals psi^{-T} applied to the first
// slot of the cyclic shift c(s) (last slot moved to the front).  The inverse
// transpose is the action of psi on covariant tensor components.
inline bool superpotential_check(const SparseTensor& s, const Matrix& psi) {
    if (s.order() < 1) throw dimension_error("superpotential_check: order-0 tensor");
    for (int d : s.shape())
        if (d != psi.rows()) throw dimension_error("superpotential_check: shape mismatch");
    auto inv = psi.inverse();
    if (!inv) throw precondition_error("superpotential_check: psi is singular");
    Matrix m = inv->transpose();
    SparseTensor cs = s.cycled_last_to_front();
    // Result slots: m's row index first, then the remaining slots of cs.
    SparseTensor lhs = SparseTensor::contract(SparseTensor::from_matrix(m), {1}, cs, {0});
    return lhs == s;
}

} // namespace prg
