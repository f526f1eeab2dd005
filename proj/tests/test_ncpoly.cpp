#include <catch2/catch_amalgamated.hpp>

#include "prg/ncpoly.hpp"
#include "prg/rng.hpp"

using prg::Automorphism;
using prg::GenMorphism;
using prg::GenSymbol;
using prg::NCPoly;
using prg::Presentation;
using prg::PresPtr;
using prg::Rng;
using prg::Scalar;
using prg::Word;

namespace {

// Free presentation on x1..xn in degree 1, no relations.
PresPtr free_pres(int n) {
    auto p = std::make_shared<Presentation>();
    for (int i = 1; i <= n; ++i) {
        p->alphabet.push_back(GenSymbol::x(i));
        p->grading[GenSymbol::x(i)] = 1;
    }
    return p;
}

NCPoly gen(const GenSymbol& s) { return NCPoly::generator(s); }

} // namespace

TEST_CASE("normalize prunes zeros, cancels, and sorts factors") {
    GenSymbol a11 = GenSymbol::a(1, 1), b11 = GenSymbol::b(1, 1), a12 = GenSymbol::a(1, 2);

    NCPoly p = prg::normalize({{{a11, b11}, Scalar(1)}, {{a12}, Scalar(0)}});
    CHECK(p.term_count() == 1);
    CHECK(p.coeff({a11, b11}) == Scalar(1));

    GenSymbol x1 = GenSymbol::x(1), x2 = GenSymbol::x(2);
    NCPoly q = prg::normalize({{{x1, x2}, Scalar(1)}, {{x2, x1}, Scalar(-1)}, {{x2, x1}, Scalar(1)}});
    CHECK(q.term_count() == 1);
    CHECK(q.coeff({x1, x2}) == Scalar(1));

    // Cross-factor symbols commute: factor-2 symbol stored after factor-1.
    GenSymbol y2 = GenSymbol::x(1, 2);
    NCPoly r = prg::normalize({{{y2, x1}, Scalar(3)}});
    CHECK(r.coeff({x1, y2}) == Scalar(3));
    CHECK(r.coeff(Word{y2, x1}) == Scalar(3)); // coeff() normalizes its query too
}

TEST_CASE("multiplication is distributive, unital, and order-preserving") {
    GenSymbol a11 = GenSymbol::a(1, 1), b11 = GenSymbol::b(1, 1), b12 = GenSymbol::b(1, 2);
    CHECK(NCPoly::unit() * gen(a11) == gen(a11));
    CHECK(gen(a11) * NCPoly::unit() == gen(a11));

    NCPoly sum = gen(b11) + gen(b12);
    NCPoly prod = gen(a11) * sum;
    CHECK(prod.coeff({a11, b11}) == Scalar(1));
    CHECK(prod.coeff({a11, b12}) == Scalar(1));
    CHECK(prod.term_count() == 2);

    GenSymbol x1 = GenSymbol::x(1), x2 = GenSymbol::x(2);
    NCPoly s = gen(x1) + gen(x2);
    NCPoly sq = s * s;
    CHECK(sq.term_count() == 4);
    for (const GenSymbol& u : {x1, x2})
        for (const GenSymbol& v : {x1, x2}) CHECK(sq.coeff({u, v}) == Scalar(1));
}

TEST_CASE("multiplication is associative on random polynomials") {
    Rng rng(1234);
    auto random_poly = [&](int factors) {
        NCPoly p;
        for (int t = 0; t < 3; ++t) {
            Word w;
            int len = static_cast<int>(rng.int_in(0, 3));
            for (int i = 0; i < len; ++i)
                w.push_back(GenSymbol::x(static_cast<int>(rng.int_in(1, 2)),
                                         static_cast<int>(rng.int_in(1, factors))));
            p.add_term(w, rng.integer_scalar(-3, 3));
        }
        return p;
    };
    for (int trial = 0; trial < 30; ++trial) {
        NCPoly p = random_poly(2), q = random_poly(2), r = random_poly(2);
        CHECK((p * q) * r == p * (q * r));
    }
}

TEST_CASE("tensor normal form is invariant under cross-factor interleaving") {
    Rng rng(555);
    for (int trial = 0; trial < 30; ++trial) {
        // Build one word per factor, then interleave randomly: the normalized
        // product must not depend on the interleaving.
        Word w1, w2;
        for (int i = 0; i < 3; ++i) {
            w1.push_back(GenSymbol::x(static_cast<int>(rng.int_in(1, 2)), 1));
            w2.push_back(GenSymbol::x(static_cast<int>(rng.int_in(1, 2)), 2));
        }
        Word interleaved;
        size_t i1 = 0, i2 = 0;
        while (i1 < w1.size() || i2 < w2.size()) {
            bool take_first = i2 >= w2.size() || (i1 < w1.size() && rng.int_in(0, 1) == 0);
            interleaved.push_back(take_first ? w1[i1++] : w2[i2++]);
        }
        Word sorted = w1;
        sorted.insert(sorted.end(), w2.begin(), w2.end());
        NCPoly a = prg::normalize({{interleaved, Scalar(1)}});
        NCPoly b = prg::normalize({{sorted, Scalar(1)}});
        CHECK(a == b);
    }
}

TEST_CASE("presentation validation catches inhomogeneous relations and unpaired D") {
    auto p = std::make_shared<Presentation>();
    p->alphabet = {GenSymbol::x(1)};
    p->grading[GenSymbol::x(1)] = 1;
    p->relations.push_back(gen(GenSymbol::x(1)) - NCPoly::unit()); // deg 1 vs deg 0
    CHECK_THROWS_AS(p->validate(), prg::precondition_error);

    auto q = std::make_shared<Presentation>();
    q->alphabet = {GenSymbol::dpos()};
    q->grading[GenSymbol::dpos()] = 2;
    CHECK_THROWS_AS(q->validate(), prg::precondition_error);
}

TEST_CASE("tensor presentations join alphabets with shifted factor tags") {
    auto p = free_pres(2);
    {
        auto mut = std::const_pointer_cast<Presentation>(p);
        mut->relations.push_back(gen(GenSymbol::x(1)) * gen(GenSymbol::x(2)) -
                                 gen(GenSymbol::x(2)) * gen(GenSymbol::x(1)));
    }
    PresPtr t = prg::tensor_presentation(p, p);
    CHECK(t->factors == 2);
    CHECK(t->alphabet.size() == 4);
    CHECK(t->relations.size() == 2);
    CHECK(t->in_alphabet(GenSymbol::x(1, 2)));
    CHECK(t->degree_of(Word{GenSymbol::x(1, 1), GenSymbol::x(2, 2)}) == 2);
    // Factor-2 copy of the relation uses factor-2 symbols only.
    for (const auto& [w, c] : t->relations[1].terms()) {
        (void)c;
        for (const auto& s : w) CHECK(s.factor == 2);
    }

    PresPtr with_trivial = prg::tensor_presentation(p, prg::trivial_presentation());
    CHECK(with_trivial->alphabet == p->alphabet);
    CHECK(with_trivial->relations.size() == 1);
    CHECK(with_trivial->factors == 2);
}

TEST_CASE("morphism application respects opposite codomains") {
    auto p = free_pres(2);
    auto op = std::make_shared<Presentation>(*p);
    op->opposite = true;

    GenMorphism m;
    m.domain = p;
    m.codomain = op;
    m.images[GenSymbol::x(1)] = gen(GenSymbol::x(1));
    m.images[GenSymbol::x(2)] = gen(GenSymbol::x(2));
    m.validate();
    // x1 x2 maps to x1 * x2 in the opposite algebra = x2.x1 as a word.
    NCPoly img = m.apply(gen(GenSymbol::x(1)) * gen(GenSymbol::x(2)));
    CHECK(img.coeff({GenSymbol::x(2), GenSymbol::x(1)}) == Scalar(1));
    CHECK(img.term_count() == 1);
}

TEST_CASE("composition and tensor of morphisms act factor-wise") {
    auto p = free_pres(1);
    GenMorphism dbl;
    dbl.domain = p;
    dbl.codomain = p;
    dbl.images[GenSymbol::x(1)] = gen(GenSymbol::x(1)).scaled(Scalar(2));

    GenMorphism comp = prg::compose(dbl, dbl);
    CHECK(comp.images[GenSymbol::x(1)] == gen(GenSymbol::x(1)).scaled(Scalar(4)));

    GenMorphism t = prg::tensor_morphism(dbl, prg::identity_morphism(p));
    CHECK(t.domain->factors == 2);
    CHECK(t.images[GenSymbol::x(1, 1)] == gen(GenSymbol::x(1, 1)).scaled(Scalar(2)));
    CHECK(t.images[GenSymbol::x(1, 2)] == gen(GenSymbol::x(1, 2)));
}

TEST_CASE("zhang twist with identity automorphism is the plain product") {
    auto p = free_pres(2);
    Automorphism id{prg::identity_morphism(p), prg::identity_morphism(p)};
    id.validate();
    Rng rng(777);
    for (int trial = 0; trial < 10; ++trial) {
        NCPoly a, b;
        for (int t = 0; t < 2; ++t) {
            Word w(static_cast<size_t>(rng.int_in(0, 2)));
            for (auto& s : w) s = GenSymbol::x(static_cast<int>(rng.int_in(1, 2)));
            a.add_term(w, rng.integer_scalar(-2, 2));
            Word v(static_cast<size_t>(rng.int_in(0, 2)));
            for (auto& s : v) s = GenSymbol::x(static_cast<int>(rng.int_in(1, 2)));
            b.add_term(v, rng.integer_scalar(-2, 2));
        }
        CHECK(prg::zhang_twisted_multiply(a, b, id) == a * b);
    }
}

TEST_CASE("zhang twist applies the automorphism once per degree") {
    auto p = free_pres(1);
    GenSymbol x1 = GenSymbol::x(1);
    Automorphism phi;
    phi.fwd.domain = phi.fwd.codomain = p;
    phi.inv.domain = phi.inv.codomain = p;
    phi.fwd.images[x1] = gen(x1).scaled(Scalar(3));
    phi.inv.images[x1] = gen(x1).scaled(Scalar(1, 3));
    phi.validate();

    // x of degree 1: x o x = x * phi(x) = 3 x^2.
    NCPoly x = gen(x1);
    NCPoly twisted = prg::zhang_twisted_multiply(x, x, phi);
    CHECK(twisted.coeff({x1, x1}) == Scalar(3));
    // Degree-0 left operand multiplies plainly.
    CHECK(prg::zhang_twisted_multiply(NCPoly::unit(Scalar(5)), x, phi) == x.scaled(Scalar(5)));
    // x^2 o x applies phi twice: 9 x^3.
    NCPoly x2 = x * x;
    CHECK(prg::zhang_twisted_multiply(x2, x, phi).coeff({x1, x1, x1}) == Scalar(9));
}

TEST_CASE("zhang twist is associative on homogeneous triples") {
    auto p = free_pres(2);
    GenSymbol x1 = GenSymbol::x(1), x2 = GenSymbol::x(2);
    // phi: x1 -> 2 x2, x2 -> x1 (degree-preserving, invertible).
    Automorphism phi;
    phi.fwd.domain = phi.fwd.codomain = p;
    phi.inv.domain = phi.inv.codomain = p;
    phi.fwd.images[x1] = gen(x2).scaled(Scalar(2));
    phi.fwd.images[x2] = gen(x1);
    phi.inv.images[x1] = gen(x2);
    phi.inv.images[x2] = gen(x1).scaled(Scalar(1, 2));
    phi.validate();

    Rng rng(31415);
    auto random_homog = [&](int deg) {
        NCPoly out;
        for (int t = 0; t < 3; ++t) {
            Word w(static_cast<size_t>(deg));
            for (auto& s : w) s = GenSymbol::x(static_cast<int>(rng.int_in(1, 2)));
            out.add_term(w, rng.integer_scalar(-3, 3));
        }
        return out;
    };
    for (int trial = 0; trial < 25; ++trial) {
        NCPoly a = random_homog(static_cast<int>(rng.int_in(0, 2)));
        NCPoly b = random_homog(static_cast<int>(rng.int_in(0, 2)));
        NCPoly c = random_homog(static_cast<int>(rng.int_in(0, 2)));
        NCPoly lhs = prg::zhang_twisted_multiply(prg::zhang_twisted_multiply(a, b, phi), c, phi);
        NCPoly rhs = prg::zhang_twisted_multiply(a, prg::zhang_twisted_multiply(b, c, phi), phi);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("automorphism validation rejects inhomogeneous or non-inverse data") {
    auto p = free_pres(1);
    GenSymbol x1 = GenSymbol::x(1);
    Automorphism bad;
    bad.fwd.domain = bad.fwd.codomain = p;
    bad.inv.domain = bad.inv.codomain = p;
    bad.fwd.images[x1] = gen(x1) + NCPoly::unit(); // x1 + 1: inhomogeneous
    bad.inv.images[x1] = gen(x1);
    CHECK_THROWS_AS(bad.validate(), prg::precondition_error);

    Automorphism not_inverse;
    not_inverse.fwd.domain = not_inverse.fwd.codomain = p;
    not_inverse.inv.domain = not_inverse.inv.codomain = p;
    not_inverse.fwd.images[x1] = gen(x1).scaled(Scalar(2));
    not_inverse.inv.images[x1] = gen(x1);
    CHECK_THROWS_AS(not_inverse.validate(), prg::precondition_error);
}
