#include <catch2/catch_amalgamated.hpp>

#include "prg/form.hpp"
#include "prg/matrix.hpp"
#include "prg/rng.hpp"

using prg::AutMembership;
using prg::Matrix;
using prg::MLForm;
using prg::Rng;
using prg::Scalar;
using prg::SparseTensor;

namespace {
const Matrix kAntisym{{0, 1}, {-1, 0}};
const Matrix kJordan{{0, 1}, {-1, 1}};
const Matrix kQuantumHalf{{0, 1}, {Scalar(-1, 2), 0}}; // quantum plane at q = 2

MLForm scalar_form(int m, const Scalar& value) {
    MLForm f(m, 1);
    f.set(prg::MultiIndex(static_cast<size_t>(m), 1), value);
    return f;
}
} // namespace

TEST_CASE("nondegeneracy: invertible bilinear, zero-row trilinear, scalar trilinear") {
    CHECK(prg::check_nondegenerate(MLForm::from_matrix(kAntisym)).nondegenerate);

    // First-slot degenerate: every entry with i1 = 1 vanishes.
    MLForm f(3, 2);
    f.set({2, 1, 1}, 1);
    f.set({2, 2, 2}, 1);
    auto res = prg::check_nondegenerate(f);
    CHECK_FALSE(res.nondegenerate);
    REQUIRE(res.witness);
    CHECK(*res.witness == Matrix::column({Scalar(1), Scalar(0)}));

    CHECK(prg::check_nondegenerate(scalar_form(3, Scalar(1))).nondegenerate);
}

TEST_CASE("cyclic twist of the antisymmetric form is -I, of a symmetric form is I") {
    auto psi = prg::find_cyclic_twist(MLForm::from_matrix(kAntisym));
    REQUIRE(psi);
    CHECK(*psi == -Matrix::identity(2));

    auto psi_sym = prg::find_cyclic_twist(MLForm::from_matrix(Matrix{{2, 1}, {1, 1}}));
    REQUIRE(psi_sym);
    CHECK(*psi_sym == Matrix::identity(2));

    auto psi_scalar = prg::find_cyclic_twist(scalar_form(3, Scalar(1)));
    REQUIRE(psi_scalar);
    CHECK(*psi_scalar == Matrix::identity(1));

    MLForm degenerate(2, 2);
    degenerate.set({2, 1}, 1);
    CHECK_THROWS_AS(prg::find_cyclic_twist(degenerate), prg::precondition_error);
}

TEST_CASE("m = 2 twist matches the closed form E^{-T} E") {
    for (const Matrix& e : {kAntisym, kJordan, kQuantumHalf, Matrix{{1, 2}, {3, 4}}}) {
        auto psi = prg::find_cyclic_twist(MLForm::from_matrix(e));
        REQUIRE(psi);
        CHECK(*psi == e.transpose().pow(-1) * e);
    }
    // Quantum plane at q = 2: psi = diag(-1/2, -2).
    auto psi_q = prg::find_cyclic_twist(MLForm::from_matrix(kQuantumHalf));
    CHECK(*psi_q == Matrix{{Scalar(-1, 2), 0}, {0, -2}});
}

TEST_CASE("preregularity reports: quantum plane and Jordan pass, singular fails with witness") {
    auto rq = prg::check_preregular(MLForm::from_matrix(kQuantumHalf));
    CHECK(rq.pass());
    auto rj = prg::check_preregular(MLForm::from_matrix(kJordan));
    CHECK(rj.pass());

    auto rs = prg::check_preregular(MLForm::from_matrix(Matrix{{1, 0}, {0, 0}}));
    CHECK_FALSE(rs.pass());
    CHECK_FALSE(rs.nondegeneracy.nondegenerate);
    REQUIRE(rs.nondegeneracy.witness);
    CHECK(*rs.nondegeneracy.witness == Matrix::column({Scalar(0), Scalar(1)}));
}

TEST_CASE("dual form contracts back to the identity") {
    CHECK(prg::dual_form(MLForm::from_matrix(Matrix::identity(2))).coeffs.to_matrix() ==
          Matrix::identity(2));
    CHECK(prg::dual_form(MLForm::from_matrix(kAntisym)).coeffs.to_matrix() ==
          Matrix{{0, -1}, {1, 0}});
    CHECK(prg::dual_form(scalar_form(3, Scalar(2))).at({1, 1, 1}) == Scalar(1, 2));

    MLForm last_degenerate(2, 2);
    last_degenerate.set({1, 1}, 1);
    last_degenerate.set({2, 1}, 1);
    CHECK_THROWS_AS(prg::dual_form(last_degenerate), prg::precondition_error);
}

TEST_CASE("dual form identity holds for random preregular forms of arity 2 and 3") {
    Rng rng(5150);
    for (int trial = 0; trial < 20; ++trial) {
        int m = trial % 2 == 0 ? 2 : 3;
        int n = static_cast<int>(rng.int_in(1, m == 2 ? 3 : 2));
        MLForm f = rng.preregular_form(m, n);
        MLForm dual = prg::dual_form(f);
        // sum over middle indices: dual_{i, r} f_{r, j} = delta_{ij}.
        std::vector<size_t> dual_slots, f_slots;
        for (int t = 1; t < m; ++t) {
            dual_slots.push_back(static_cast<size_t>(t));
            f_slots.push_back(static_cast<size_t>(t - 1));
        }
        SparseTensor prod = SparseTensor::contract(dual.coeffs, dual_slots, f.coeffs, f_slots);
        CHECK(prod.to_matrix() == Matrix::identity(n));
    }
}

TEST_CASE("automorphism membership: identity, antisymmetric scaling, shear rejection") {
    MLForm e = MLForm::from_matrix(kAntisym);
    AutMembership m1 = prg::aut_membership(e, Matrix::identity(2));
    CHECK(m1.member);
    CHECK(m1.lambda == Scalar(1));

    AutMembership m2 = prg::aut_membership(e, Matrix{{2, 0}, {0, 3}});
    CHECK(m2.member);
    CHECK(m2.lambda == Scalar(6)); // phi^T E phi = det(phi) E in dimension 2

    AutMembership m3 = prg::aut_membership(MLForm::from_matrix(Matrix::identity(2)),
                                           Matrix{{1, 1}, {0, 1}});
    CHECK_FALSE(m3.member);

    CHECK_THROWS_AS(prg::aut_membership(e, Matrix{{1, 1}, {1, 1}}), prg::precondition_error);
}

TEST_CASE("every invertible phi is an automorphism of the 2x2 antisymmetric form") {
    Rng rng(99);
    MLForm e = MLForm::from_matrix(kAntisym);
    for (int trial = 0; trial < 10; ++trial) {
        Matrix phi = rng.invertible_matrix(2, -5, 5);
        AutMembership m = prg::aut_membership(e, phi);
        CHECK(m.member);
        CHECK(m.lambda == phi.determinant());
    }
}

TEST_CASE("twist by the identity is trivial; bilinear twist is E phi^{-1}") {
    MLForm e = MLForm::from_matrix(kJordan);
    CHECK(prg::twist_form(e, Matrix::identity(2)).coeffs == e.coeffs);

    Matrix phi{{2, 1}, {1, 1}};
    MLForm tw = prg::twist_form(e, phi);
    CHECK(tw.coeffs.to_matrix() == kJordan * phi.pow(-1));
    CHECK(prg::twist_form_roundtrip_ok(e, tw, phi));

    CHECK_THROWS_AS(prg::twist_form(e, Matrix{{1, 1}, {1, 1}}), prg::precondition_error);
}

TEST_CASE("scalar cubic twist picks up inverse powers of phi") {
    MLForm f = scalar_form(3, Scalar(1));
    Matrix phi(1, 1);
    phi.at(0, 0) = Scalar(2);
    MLForm tw = prg::twist_form(f, phi);
    // slot 2 gets phi^{-1}, slot 3 gets phi^{-2}: total factor 2^{-3}.
    CHECK(tw.at({1, 1, 1}) == Scalar(1, 8));
    CHECK(prg::twist_form_roundtrip_ok(f, tw, phi));
}

TEST_CASE("twisting by an automorphism preserves preregularity") {
    Rng rng(31337);
    MLForm e = MLForm::from_matrix(kAntisym);
    for (int trial = 0; trial < 8; ++trial) {
        Matrix phi = rng.invertible_matrix(2, -4, 4);
        REQUIRE(prg::aut_membership(e, phi).member);
        MLForm tw = prg::twist_form(e, phi);
        CHECK(prg::check_preregular(tw).pass());
        CHECK(prg::twist_form_roundtrip_ok(e, tw, phi));
    }
    // Also for a cubic form with a non-automorphism twist: the definitional
    // round trip must still hold even when preregularity is not preserved.
    MLForm f = rng.preregular_form(3, 2);
    Matrix phi = rng.invertible_matrix(2, -3, 3);
    CHECK(prg::twist_form_roundtrip_ok(f, prg::twist_form(f, phi), phi));
}

TEST_CASE("superpotential check: antisymmetric passes with -I, asymmetric fails with I") {
    SparseTensor s({2, 2});
    s.set({1, 2}, 1);
    s.set({2, 1}, -1);
    CHECK(prg::superpotential_check(s, -Matrix::identity(2)));

    SparseTensor cube({1, 1, 1});
    cube.set({1, 1, 1}, 1);
    CHECK(prg::superpotential_check(cube, Matrix::identity(1)));

    SparseTensor bad({2, 2});
    bad.set({1, 1}, 1);
    bad.set({1, 2}, 1);
    CHECK_FALSE(prg::superpotential_check(bad, Matrix::identity(2)));

    SparseTensor mismatch({2, 2});
    mismatch.set({1, 1}, 1);
    CHECK_THROWS_AS(prg::superpotential_check(mismatch, Matrix::identity(3)),
                    prg::dimension_error);
}

TEST_CASE("round trip: every preregular form is a twisted superpotential for its own twist") {
    for (const Matrix& e : {kAntisym, kJordan, kQuantumHalf}) {
        MLForm f = MLForm::from_matrix(e);
        auto psi = prg::find_cyclic_twist(f);
        REQUIRE(psi);
        CHECK(prg::superpotential_check(f.coeffs, *psi));
    }
    Rng rng(808);
    for (int trial = 0; trial < 12; ++trial) {
        int m = trial % 2 == 0 ? 2 : 3;
        int n = static_cast<int>(rng.int_in(1, m == 2 ? 3 : 2));
        MLForm f = rng.preregular_form(m, n);
        auto psi = prg::find_cyclic_twist(f);
        REQUIRE(psi);
        CHECK(prg::superpotential_check(f.coeffs, *psi));
    }
}
