// Acceptance gate: one pass/fail line per criterion, exact arithmetic
// throughout, wall-clock budgets enforced.  Exit code = number of failures.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "prg/cogroupoid.hpp"
#include "prg/io.hpp"
#include "prg/modules.hpp"
#include "prg/rng.hpp"
#include "prg/superpotential.hpp"

using namespace prg;

namespace {

const Matrix kAntisym{{0, 1}, {-1, 0}};
const Matrix kJordan{{0, 1}, {-1, 1}};
const Matrix kQuantumHalf{{0, 1}, {Scalar(-1, 2), 0}};

struct Check {
    bool ok = true;
    std::ostringstream why;

    void require(bool cond, const std::string& msg) {
        if (!cond) {
            if (!ok) why << "; ";
            ok = false;
            why << msg;
        }
    }
};

// --------------------------------------------------------------- criterion 1
void preregularity_suite(Check& c) {
    const std::vector<std::pair<const char*, Matrix>> cases = {
        {"antisymmetric", kAntisym},
        {"symmetric", Matrix::identity(2)},
        {"quantum q=2", kQuantumHalf},
        {"jordan", kJordan},
    };
    for (const auto& [name, E] : cases) {
        MLForm e = MLForm::from_matrix(E);
        auto rep = check_preregular(e);
        c.require(rep.pass(), std::string(name) + ": preregularity fails");
        Matrix expected = E.inverse()->transpose() * E;
        c.require(rep.twist && *rep.twist == expected,
                  std::string(name) + ": twist is not E^-T E");
        c.require(rep.twist && superpotential_check(e.coeffs, *rep.twist),
                  std::string(name) + ": definitional twisted-superpotential identity fails");
    }
    // Singular matrix: fails with an explicit first-slot kernel witness.
    MLForm sing(2, 2);
    sing.set({1, 1}, Scalar(1));
    sing.set({1, 2}, Scalar(2));
    sing.set({2, 1}, Scalar(2));
    sing.set({2, 2}, Scalar(4));
    auto bad = check_preregular(sing);
    c.require(!bad.pass(), "singular form passes");
    c.require(bad.nondegeneracy.witness.has_value(), "no kernel witness for singular form");
    if (bad.nondegeneracy.witness) {
        const Matrix& v = *bad.nondegeneracy.witness;
        c.require(!v.is_zero(), "kernel witness is zero");
        bool annihilates = true;
        for (int rest = 1; rest <= 2; ++rest) {
            Scalar s(0);
            for (int i = 1; i <= 2; ++i) s += v.at(i - 1, 0) * sing.at({i, rest});
            if (!s.is_zero()) annihilates = false;
        }
        c.require(annihilates, "kernel witness does not annihilate the first slot");
    }
}

// --------------------------------------------------------------- criterion 2
// Independent word-span oracle: dims[k] = corank of the span of all
// u * r * v with |u| + N + |v| = k inside the degree-k word space.
std::vector<long> dims_oracle(const Matrix& E, int maxdeg) {
    const int n = E.rows();
    std::vector<long> dims{1, n};
    for (int k = 2; k <= maxdeg; ++k) {
        long total = 1;
        for (int i = 0; i < k; ++i) total *= n;
        // Rows of the relation span, one per (i, j) split and relation entry.
        std::vector<std::vector<Scalar>> rows;
        long left_count = 1;
        for (int i = 0; i + 2 <= k; ++i) {
            long right_count = 1;
            for (int t = 0; t < k - i - 2; ++t) right_count *= n;
            for (long li = 0; li < left_count; ++li)
                for (long ri = 0; ri < right_count; ++ri) {
                    std::vector<Scalar> row(static_cast<size_t>(total), Scalar(0));
                    for (int p = 1; p <= n; ++p)
                        for (int q = 1; q <= n; ++q) {
                            if (E.at(p - 1, q - 1).is_zero()) continue;
                            long word = (li * n + (p - 1)) * n + (q - 1);
                            word = word * right_count + ri;
                            row[static_cast<size_t>(word)] += E.at(p - 1, q - 1);
                        }
                    rows.push_back(std::move(row));
                }
            left_count *= n;
        }
        Matrix span(static_cast<int>(rows.size()), static_cast<int>(total));
        for (size_t r = 0; r < rows.size(); ++r)
            for (long col = 0; col < total; ++col)
                span.at(static_cast<int>(r), static_cast<int>(col)) =
                    rows[r][static_cast<size_t>(col)];
        dims.push_back(static_cast<int>(total) - span.rref().rank);
    }
    return dims;
}

void superpotential_suite(Check& c) {
    const std::vector<long> expected{1, 2, 3, 4, 5, 6, 7};
    for (const auto& [name, E] :
         {std::pair<const char*, Matrix>{"quantum", kQuantumHalf}, {"jordan", kJordan}}) {
        auto gd = graded_dimension(MLForm::from_matrix(E), 2, 6);
        c.require(gd.dims == expected, std::string(name) + ": dims not (1..7)");
        c.require(dims_oracle(E, 6) == expected, std::string(name) + ": oracle disagrees");
    }
}

// --------------------------------------------------------------- criterion 3
void presentation_suite(Check& c) {
    MLForm anti = MLForm::from_matrix(kAntisym);
    UQGPresentation H = build_presentation(anti, anti);
    c.require(H.pres->relations.size() == 14, "relation count != 14");

    auto a = [](int i, int j) { return GenSymbol::a(i, j); };
    auto b = [](int i, int j) { return GenSymbol::b(i, j); };
    const GenSymbol D = GenSymbol::dpos(), Di = GenSymbol::dneg();
    auto poly = [](std::initializer_list<std::pair<Word, Scalar>> ts) {
        NCPoly p;
        for (const auto& [w, s] : ts) p.add_term(w, s);
        return p;
    };
    const std::vector<NCPoly> expected = {
        poly({{{a(1, 1), a(2, 1)}, 1}, {{a(2, 1), a(1, 1)}, -1}}),
        poly({{{a(1, 1), a(2, 2)}, 1}, {{a(2, 1), a(1, 2)}, -1}, {{D}, -1}}),
        poly({{{a(1, 2), a(2, 1)}, 1}, {{a(2, 2), a(1, 1)}, -1}, {{D}, 1}}),
        poly({{{a(1, 2), a(2, 2)}, 1}, {{a(2, 2), a(1, 2)}, -1}}),
        poly({{{b(2, 1), b(1, 1)}, 1}, {{b(1, 1), b(2, 1)}, -1}}),
        poly({{{b(2, 2), b(1, 1)}, 1}, {{b(1, 2), b(2, 1)}, -1}, {{Di}, -1}}),
        poly({{{b(2, 1), b(1, 2)}, 1}, {{b(1, 1), b(2, 2)}, -1}, {{Di}, 1}}),
        poly({{{b(2, 2), b(1, 2)}, 1}, {{b(1, 2), b(2, 2)}, -1}}),
        poly({{{D, Di}, 1}, {{}, -1}}),
        poly({{{Di, D}, 1}, {{}, -1}}),
        poly({{{a(1, 1), b(1, 1)}, 1}, {{a(1, 2), b(2, 1)}, 1}, {{}, -1}}),
        poly({{{a(1, 1), b(1, 2)}, 1}, {{a(1, 2), b(2, 2)}, 1}}),
        poly({{{a(2, 1), b(1, 1)}, 1}, {{a(2, 2), b(2, 1)}, 1}}),
        poly({{{a(2, 1), b(1, 2)}, 1}, {{a(2, 2), b(2, 2)}, 1}, {{}, -1}}),
    };
    for (size_t i = 0; i < expected.size() && i < H.pres->relations.size(); ++i)
        c.require(H.pres->relations[i] == expected[i],
                  "relation " + std::to_string(i) + " (" + relation_label(H, i) +
                      ") differs from the expected relation list");

    // General coefficient shape: quantum vs jordan mixed pair still emits
    // l^m + k^m + 2 + k^2 relations.
    UQGPresentation M =
        build_presentation(MLForm::from_matrix(kQuantumHalf), MLForm::from_matrix(kJordan));
    c.require(M.pres->relations.size() == 14, "mixed 2x2 pair: relation count != 14");
}

// --------------------------------------------------------------- criterion 4
void cocategory_suite(Check& c) {
    Rng rng(46801);
    for (int trial = 0; trial < 10; ++trial) {
        int m = trial % 2 == 0 ? 2 : 3;
        auto draw = [&] { return rng.preregular_form(m, static_cast<int>(rng.int_in(1, 3))); };
        MLForm e = draw(), f = draw(), g = draw(), h = draw();
        auto rep = verify_cocategory(e, f, g, h);
        c.require(rep.all_verified(), "quadruple " + std::to_string(trial) + " (m=" +
                                          std::to_string(m) + ") failed");
    }
}

// --------------------------------------------------------------- criterion 5
void antipode_lemma_suite(Check& c) {
    MLForm anti = MLForm::from_matrix(kAntisym);
    UQGPresentation H = build_presentation(anti, anti);

    auto antipode = verify_antipode(anti, anti);
    c.require(antipode.all_verified(), "antipode laws not fully verified (inconclusive = FAIL)");
    c.require(antipode.bound <= 8, "antipode bound exceeds 8");
    for (const auto& part : antipode.parts) {
        if (part.name != "antipode-left" && part.name != "antipode-right") continue;
        for (const auto& chk : part.checks) {
            c.require(chk.membership.witness.has_value(), part.name + "/" + chk.name +
                                                              ": no witness");
            if (chk.membership.witness) {
                c.require(chk.membership.witness->bound <= 8,
                          part.name + "/" + chk.name + ": witness bound > 8");
                c.require(verify_witness(*chk.membership.witness, *H.pres, chk.target),
                          part.name + "/" + chk.name + ": witness fails re-expansion");
            }
        }
    }

    auto lemma = verify_lemma_identities(anti, anti);
    c.require(lemma.all_verified(), "lemma identities not fully verified");
    for (const auto& chk : lemma.checks) {
        c.require(chk.membership.witness.has_value(), chk.name + ": no witness");
        if (chk.membership.witness) {
            c.require(chk.membership.witness->bound <= 8, chk.name + ": witness bound > 8");
            c.require(verify_witness(*chk.membership.witness, *H.pres, chk.target),
                      chk.name + ": witness fails re-expansion");
        }
    }
}

// --------------------------------------------------------------- criterion 6
void module_suite(Check& c) {
    Rng rng(70707);
    for (int trial = 0; trial < 20; ++trial) {
        Matrix E = rng.invertible_matrix(2, -3, 3);
        Matrix F = rng.invertible_matrix(2, -3, 3);
        Matrix A0 = rng.invertible_matrix(2, -3, 3);
        auto fam = extend_module(E, F, A0, -5, 5);
        auto rep = verify_module(fam);
        c.require(rep.pass, "trial " + std::to_string(trial) + ": verify_module failed");

        MLForm e = MLForm::from_matrix(E), f = MLForm::from_matrix(F);
        UQGPresentation H = build_presentation(e, f);
        for (size_t i = 0; i < H.pres->relations.size(); ++i) {
            int evaluated = 0;
            for (int d = -7; d <= 7; ++d) {
                Matrix val;
                try {
                    val = evaluate(H.pres->relations[i], fam, d);
                } catch (const precondition_error&) {
                    continue; // word leaves the window at this degree
                }
                ++evaluated;
                if (!val.is_zero()) {
                    c.require(false, "trial " + std::to_string(trial) + ": relation " +
                                         relation_label(H, i) + " nonzero at degree " +
                                         std::to_string(d));
                    break;
                }
            }
            c.require(evaluated > 0, "trial " + std::to_string(trial) + ": relation " +
                                         relation_label(H, i) + " never evaluable");
        }

        auto cert = nonvanishing_certificate(e, f, A0);
        c.require(cert.verdict == "nonzero",
                  "trial " + std::to_string(trial) + ": verdict not nonzero");
        c.require(validate_certificate(cert),
                  "trial " + std::to_string(trial) + ": certificate fails revalidation");
    }
}

// --------------------------------------------------------------- criterion 7
void twisting_suite(Check& c) {
    MLForm anti = MLForm::from_matrix(kAntisym);
    Rng rng(31337);
    for (int trial = 0; trial < 10; ++trial) {
        Matrix phi = rng.invertible_matrix(2, -3, 3);
        auto rep = build_twisting_pair(anti, phi);
        c.require(rep.lambda == phi.determinant(),
                  "trial " + std::to_string(trial) + ": lambda != det phi");
        c.require(rep.pass(), "trial " + std::to_string(trial) + ": pair checks failed");
        c.require(rep.p1_status == RelationCheckStatus::verified &&
                      rep.p2_status == RelationCheckStatus::verified,
                  "trial " + std::to_string(trial) + ": P1/P2 not exact");
    }
    c.require(verify_twisting_conditions(anti).pass(), "T1/T2 fail for m=2");
    Rng rng3(31338);
    c.require(verify_twisting_conditions(rng3.preregular_form(3, 2)).pass(),
              "T1/T2 fail for m=3");
}

// --------------------------------------------------------------- criterion 8
void connectivity_suite(Check& c) {
    MLForm anti = MLForm::from_matrix(kAntisym);
    Matrix phi{{2, 0}, {0, Scalar(1, 2)}};
    auto rep = verify_cocycle_connectivity(anti, phi);
    c.require(rep.all_verified(), "comparison map not fully verified");
    c.require(rep.bound <= 8, "bound exceeds 8");
    for (const auto& chk : rep.checks)
        if (chk.membership.witness)
            c.require(chk.membership.witness->bound <= 8, chk.name + ": witness bound > 8");
}

NCPoly word_poly(const Word& w) {
    NCPoly p;
    p.add_term(w, Scalar(1));
    return p;
}

// --------------------------------------------------------------- criterion 9
void property_suite(Check& c) {
    // (a) witness re-expansion soundness on the rank-one algebra
    {
        Rng rng(11111);
        MLForm one = MLForm::from_matrix(Matrix{{1}});
        UQGPresentation H = build_presentation(one, one);
        const auto& alphabet = H.pres->alphabet;
        int sound = 0;
        for (int t = 0; t < 200; ++t) {
            size_t ri = static_cast<size_t>(rng.int_in(0, static_cast<long>(
                                                              H.pres->relations.size() - 1)));
            Word u, v;
            if (rng.int_in(0, 1))
                u.push_back(alphabet[static_cast<size_t>(
                    rng.int_in(0, static_cast<long>(alphabet.size() - 1)))]);
            if (rng.int_in(0, 1))
                v.push_back(alphabet[static_cast<size_t>(
                    rng.int_in(0, static_cast<long>(alphabet.size() - 1)))]);
            Scalar coeff(rng.int_in(1, 5), rng.int_in(1, 3));
            NCPoly target = NCPoly::unit(coeff);
            target = target * word_poly(u) * H.pres->relations[ri] * word_poly(v);
            if (target.is_zero()) continue; // the combination collapsed
            int bound = 0;
            for (const auto& [w, s] : target.terms()) {
                (void)s;
                bound = std::max(bound, static_cast<int>(w.size()));
            }
            auto res = ideal_membership_deepening(target, *H.pres, bound);
            if (res.status != MembershipStatus::member || !res.witness) {
                c.require(false, "witness trial " + std::to_string(t) + ": member not found");
                continue;
            }
            if (!verify_witness(*res.witness, *H.pres, target)) {
                c.require(false, "witness trial " + std::to_string(t) + ": unsound witness");
                continue;
            }
            ++sound;
        }
        c.require(sound >= 150, "too few successful witness trials: " + std::to_string(sound));
    }

    // (b) evaluate multiplicativity on random bilinear module families
    {
        Rng rng(22222);
        int done = 0;
        while (done < 200) {
            Matrix E = rng.invertible_matrix(2, -2, 2);
            Matrix F = rng.invertible_matrix(2, -2, 2);
            auto fam = extend_module(E, F, rng.invertible_matrix(2, -2, 2), -5, 5);
            UQGPresentation H =
                build_presentation(MLForm::from_matrix(E), MLForm::from_matrix(F));
            const auto& alphabet = H.pres->alphabet;
            for (int inner = 0; inner < 10 && done < 200; ++inner) {
                auto word = [&](int len) {
                    Word w;
                    for (int i = 0; i < len; ++i)
                        w.push_back(alphabet[static_cast<size_t>(
                            rng.int_in(0, static_cast<long>(alphabet.size() - 1)))]);
                    return w;
                };
                NCPoly p, q;
                Word wp = word(static_cast<int>(rng.int_in(1, 2)));
                Word wq = word(static_cast<int>(rng.int_in(1, 2)));
                p.add_term(wp, Scalar(rng.int_in(1, 3)));
                q.add_term(wq, Scalar(rng.int_in(1, 3)));
                int d = static_cast<int>(rng.int_in(-3, 3));
                int degq = 0;
                for (const auto& s : wq) degq += H.pres->degree_of(s);
                Matrix lhs, rhs_p, rhs_q;
                try {
                    lhs = evaluate(p * q, fam, d);
                    rhs_p = evaluate(p, fam, d + degq);
                    rhs_q = evaluate(q, fam, d);
                } catch (const precondition_error&) {
                    continue; // out of window: draw again
                }
                c.require(lhs == rhs_p * rhs_q,
                          "multiplicativity trial " + std::to_string(done) + " failed");
                ++done;
            }
        }
    }

    // (c) Zhang-twist associativity under a twisting-pair automorphism
    {
        Rng rng(33333);
        MLForm anti = MLForm::from_matrix(kAntisym);
        UQGPresentation H = build_presentation(anti, anti);
        const auto& alphabet = H.pres->alphabet;
        for (int t = 0; t < 200; ++t) {
            Matrix phi = rng.invertible_matrix(2, -2, 2);
            Automorphism psi = detail::make_twist_automorphism(
                H, phi, *phi.inverse(), phi.determinant(), t % 2 == 0);
            auto word = [&](int len) {
                Word w;
                for (int i = 0; i < len; ++i)
                    w.push_back(alphabet[static_cast<size_t>(
                        rng.int_in(0, static_cast<long>(alphabet.size() - 1)))]);
                return w;
            };
            NCPoly p, q, r;
            p.add_term(word(static_cast<int>(rng.int_in(0, 2))), Scalar(rng.int_in(-2, 2)));
            q.add_term(word(static_cast<int>(rng.int_in(0, 2))), Scalar(rng.int_in(-2, 2)));
            r.add_term(word(static_cast<int>(rng.int_in(0, 2))), Scalar(rng.int_in(-2, 2)));
            NCPoly left = zhang_twisted_multiply(zhang_twisted_multiply(p, q, psi), r, psi);
            NCPoly right = zhang_twisted_multiply(p, zhang_twisted_multiply(q, r, psi), psi);
            c.require(left == right, "zhang trial " + std::to_string(t) + " not associative");
        }
    }

    // (d) rref idempotence
    {
        Rng rng(44444);
        for (int t = 0; t < 200; ++t) {
            int rows = static_cast<int>(rng.int_in(1, 5));
            int cols = static_cast<int>(rng.int_in(1, 5));
            Matrix m(rows, cols);
            for (int i = 0; i < rows; ++i)
                for (int j = 0; j < cols; ++j)
                    m.at(i, j) = Scalar(rng.int_in(-4, 4), rng.int_in(1, 3));
            Matrix once = m.rref().reduced;
            Matrix twice = once.rref().reduced;
            c.require(once == twice, "rref trial " + std::to_string(t) + " not idempotent");
        }
    }
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* title;
        double budget_s;
        std::function<void(Check&)> body;
    };
    const std::vector<Criterion> criteria = {
        {1, "preregularity suite", 1.0, preregularity_suite},
        {2, "superpotential-algebra dimensions", 10.0, superpotential_suite},
        {3, "presentation suite", 10.0, presentation_suite},
        {4, "cocategory diagrams", 5.0, cocategory_suite},
        {5, "antipode and inverse-law identities", 120.0, antipode_lemma_suite},
        {6, "module families and nonvanishing certificates", 30.0, module_suite},
        {7, "twisting pairs and twisting conditions", 10.0, twisting_suite},
        {8, "2-cocycle comparison map", 120.0, connectivity_suite},
        {9, "randomized property suite", 600.0, property_suite},
    };

    int failures = 0;
    for (const auto& crit : criteria) {
        Check c;
        auto t0 = std::chrono::steady_clock::now();
        try {
            crit.body(c);
        } catch (const std::exception& e) {
            c.require(false, std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > crit.budget_s)
            c.require(false, "runtime " + std::to_string(secs) + "s exceeds budget");
        std::ostringstream line;
        line << (c.ok ? "PASS" : "FAIL") << " criterion " << crit.id << ": " << crit.title
             << " (" << secs << "s, budget " << crit.budget_s << "s)";
        if (!c.ok) line << " -- " << c.why.str();
        std::cout << line.str() << std::endl;
        if (!c.ok) ++failures;
    }
    std::cout << (failures == 0 ? "ACCEPTANCE: all criteria passed"
                                : "ACCEPTANCE: " + std::to_string(failures) + " criteria failed")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
