#pragma once

#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "prg/io.hpp"

// Command-line surface.  Exit codes: 0 = all checks verified, 1 = a check is
// definitely falsified, 2 = inconclusive (search bound or budget hit),
// 3 = input error (bad file, malformed JSON, violated precondition).
namespace prg::cli {

constexpr int exit_verified = 0;
constexpr int exit_falsified = 1;
constexpr int exit_inconclusive = 2;
constexpr int exit_input_error = 3;

namespace detail {

struct Output {
    std::string format = "json"; // "json" | "text"

    void emit(const io::json& j) const {
        if (format == "text") std::cout << io::to_text(j);
        else std::cout << j.dump(2) << '\n';
    }
};

inline int worst(int a, int b) { return a > b ? a : b; }

inline int exit_for(RelationCheckStatus s) {
    switch (s) {
        case RelationCheckStatus::verified: return exit_verified;
        case RelationCheckStatus::falsified: return exit_falsified;
        case RelationCheckStatus::inconclusive: return exit_inconclusive;
    }
    return exit_input_error;
}

inline int exit_for(const AxiomReport& r) {
    int code = exit_verified;
    for (const auto& p : r.parts) {
        code = worst(code, exit_for(p.status));
        for (const auto& c : p.checks) code = worst(code, exit_for(c.status));
    }
    return code;
}

inline int exit_for(const std::vector<NamedCheck>& checks) {
    int code = exit_verified;
    for (const auto& c : checks) code = worst(code, exit_for(c.status));
    return code;
}

inline Matrix bilinear_matrix(const MLForm& e, const char* which) {
    if (e.arity != 2)
        throw precondition_error(std::string(which) +
                                 ": graded module families need bilinear forms (m = 2)");
    return e.coeffs.to_matrix();
}

} // namespace detail

inline int run_cli(int argc, const char* const* argv) {
    detail::Output out;
    int rc = exit_verified;

    CLI::App app{"exact constructor and verifier for preregular multilinear forms,\n"
                 "their universal quantum-group presentations, twisting data, and\n"
                 "graded module families"};
    app.require_subcommand(1);
    app.add_option("--format", out.format, "output format")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();

    // ---------------------------------------------------------------- form
    auto* form = app.add_subcommand("form", "preregular-form operations");
    form->require_subcommand(1);

    std::string form_path, phi_path;
    auto* form_check = form->add_subcommand("check", "decide preregularity");
    form_check->add_option("form", form_path, "form JSON")->required();
    form_check->callback([&] {
        auto rep = check_preregular(io::form_from_json(io::load_json(form_path)));
        out.emit(io::preregularity_to_json(rep));
        rc = rep.pass() ? exit_verified : exit_falsified;
    });

    auto* form_dual = form->add_subcommand("dual", "compute the dual form");
    form_dual->add_option("form", form_path, "form JSON")->required();
    form_dual->callback([&] {
        out.emit(io::form_to_json(dual_form(io::form_from_json(io::load_json(form_path)))));
        rc = exit_verified;
    });

    auto* form_aut = form->add_subcommand("aut", "decide symmetry-group membership");
    form_aut->add_option("form", form_path, "form JSON")->required();
    form_aut->add_option("phi", phi_path, "matrix JSON")->required();
    form_aut->callback([&] {
        auto rep = aut_membership(io::form_from_json(io::load_json(form_path)),
                                  io::matrix_from_json(io::load_json(phi_path)));
        out.emit(io::aut_membership_to_json(rep));
        rc = rep.member ? exit_verified : exit_falsified;
    });

    // ------------------------------------------------------------- algebra
    auto* algebra = app.add_subcommand("algebra", "derived relation spaces and Hilbert data");
    algebra->require_subcommand(1);

    int N = 2, maxdeg = 6;
    auto* alg_rel = algebra->add_subcommand("relations", "derive the degree-N relation space");
    alg_rel->add_option("form", form_path, "form JSON")->required();
    alg_rel->add_option("--N", N, "relation degree")->capture_default_str();
    alg_rel->callback([&] {
        auto rs = derive_relations(io::form_from_json(io::load_json(form_path)), N);
        out.emit(io::relation_space_to_json(rs));
        rc = exit_verified;
    });

    auto* alg_dims = algebra->add_subcommand("dims", "graded dimensions of the quotient");
    alg_dims->add_option("form", form_path, "form JSON")->required();
    alg_dims->add_option("--N", N, "relation degree")->capture_default_str();
    alg_dims->add_option("--max-deg", maxdeg, "top degree")->capture_default_str();
    alg_dims->callback([&] {
        auto gd = graded_dimension(io::form_from_json(io::load_json(form_path)), N, maxdeg);
        out.emit(io::graded_dims_to_json(gd));
        rc = exit_verified;
    });

    // ----------------------------------------------------------------- uqg
    auto* uqg = app.add_subcommand("uqg", "universal quantum-group presentations");
    uqg->require_subcommand(1);

    std::string e_path, f_path, g_path, h_path;
    int len_bound = 0, delta_bound = 0;

    auto* uqg_present = uqg->add_subcommand("present", "emit the presentation of H(e,f)");
    uqg_present->add_option("e", e_path, "left form JSON")->required();
    uqg_present->add_option("f", f_path, "right form JSON")->required();
    uqg_present->callback([&] {
        auto H = build_presentation(io::form_from_json(io::load_json(e_path)),
                                    io::form_from_json(io::load_json(f_path)));
        out.emit(io::uqg_to_json(H));
        rc = exit_verified;
    });

    auto* uqg_axioms =
        uqg->add_subcommand("verify-axioms", "cocategory diagrams and antipode laws");
    uqg_axioms->add_option("e_form", e_path, "left form JSON")->required();
    uqg_axioms->add_option("f_form", f_path, "right form JSON")->required();
    uqg_axioms->add_option("g_form", g_path, "third form JSON (optional)");
    uqg_axioms->add_option("h_form", h_path, "fourth form JSON (optional)");
    uqg_axioms->add_option("--len-bound", len_bound, "antipode search bound (0 = default)")
        ->capture_default_str();
    uqg_axioms
        ->add_option("--delta-bound", delta_bound,
                     "coproduct relation-preservation search bound (0 = skip)")
        ->capture_default_str();
    uqg_axioms->callback([&] {
        MLForm e = io::form_from_json(io::load_json(e_path));
        MLForm f = io::form_from_json(io::load_json(f_path));
        MLForm g = g_path.empty() ? e : io::form_from_json(io::load_json(g_path));
        MLForm h = h_path.empty() ? f : io::form_from_json(io::load_json(h_path));
        auto diagrams = verify_cocategory(e, f, g, h, delta_bound);
        auto antipode = verify_antipode(e, f, len_bound);
        io::json j;
        j["cocategory"] = io::axiom_report_to_json(diagrams);
        j["antipode"] = io::axiom_report_to_json(antipode);
        out.emit(j);
        rc = detail::worst(detail::exit_for(diagrams), detail::exit_for(antipode));
    });

    auto* uqg_lemma = uqg->add_subcommand("lemma", "inverse-law identities for A and B");
    uqg_lemma->add_option("e", e_path, "left form JSON")->required();
    uqg_lemma->add_option("f", f_path, "right form JSON")->required();
    uqg_lemma->add_option("--len-bound", len_bound, "search bound (0 = default)")
        ->capture_default_str();
    uqg_lemma->callback([&] {
        auto rep = verify_lemma_identities(io::form_from_json(io::load_json(e_path)),
                                           io::form_from_json(io::load_json(f_path)),
                                           len_bound);
        out.emit(io::lemma_report_to_json(rep));
        rc = detail::exit_for(rep.checks);
    });

    // --------------------------------------------------------------- twist
    auto* twist = app.add_subcommand("twist", "twisting pairs and 2-cocycle comparison");
    twist->require_subcommand(1);

    auto* twist_pair = twist->add_subcommand("pair", "build and verify a twisting pair");
    twist_pair->add_option("e", e_path, "form JSON")->required();
    twist_pair->add_option("phi", phi_path, "matrix JSON")->required();
    twist_pair->add_option("--len-bound", len_bound, "search bound (0 = default)")
        ->capture_default_str();
    twist_pair->callback([&] {
        auto rep = build_twisting_pair(io::form_from_json(io::load_json(e_path)),
                                       io::matrix_from_json(io::load_json(phi_path)),
                                       len_bound);
        out.emit(io::twisting_pair_to_json(rep));
        int code = detail::exit_for(rep.relation_checks);
        code = detail::worst(code, detail::exit_for(rep.algebra_map_phi1));
        code = detail::worst(code, detail::exit_for(rep.algebra_map_phi2));
        code = detail::worst(code, detail::exit_for(rep.p1_status));
        code = detail::worst(code, detail::exit_for(rep.p2_status));
        rc = code;
    });

    auto* twist_cocycle =
        twist->add_subcommand("cocycle", "compare H(e^phi) to H(e) through the graded twist");
    twist_cocycle->add_option("e", e_path, "form JSON")->required();
    twist_cocycle->add_option("phi", phi_path, "matrix JSON")->required();
    twist_cocycle->add_option("--len-bound", len_bound, "search bound (0 = default)")
        ->capture_default_str();
    twist_cocycle->callback([&] {
        auto rep = verify_cocycle_connectivity(io::form_from_json(io::load_json(e_path)),
                                               io::matrix_from_json(io::load_json(phi_path)),
                                               len_bound);
        out.emit(io::connectivity_to_json(rep));
        rc = detail::exit_for(rep.checks);
    });

    // ------------------------------------------------------- module-family
    std::string seed_path, out_path;
    std::vector<int> window{-5, 5};
    std::uint64_t rng_seed = 20240815ull;

    auto* modfam = app.add_subcommand("module-family", "build and verify a graded module family");
    modfam->add_option("e", e_path, "left bilinear form JSON")->required();
    modfam->add_option("f", f_path, "right bilinear form JSON")->required();
    modfam->add_option("--seed", seed_path, "seed matrix JSON (default: identity)");
    modfam->add_option("--window", window, "degree window [lo hi]")
        ->expected(2)
        ->capture_default_str();
    modfam->callback([&] {
        Matrix E = detail::bilinear_matrix(io::form_from_json(io::load_json(e_path)), "e");
        Matrix F = detail::bilinear_matrix(io::form_from_json(io::load_json(f_path)), "f");
        Matrix A0 = seed_path.empty() ? Matrix::identity(E.rows())
                                      : io::matrix_from_json(io::load_json(seed_path));
        auto fam = extend_module(E, F, A0, window[0], window[1]);
        auto rep = verify_module(fam);
        io::json j;
        j["family"] = io::module_family_to_json(fam);
        j["verification"] = io::module_report_to_json(rep);
        out.emit(j);
        rc = rep.pass ? exit_verified : exit_falsified;
    });

    // -------------------------------------------------------- nonvanishing
    auto* nonvan = app.add_subcommand("nonvanishing",
                                      "emit a nonvanishing certificate for H_2(e,f)");
    nonvan->add_option("e", e_path, "left bilinear form JSON")->required();
    nonvan->add_option("f", f_path, "right bilinear form JSON")->required();
    nonvan->add_option("--seed", seed_path, "explicit seed matrix JSON");
    nonvan->add_option("--rng-seed", rng_seed, "seed for the random seed-matrix draw")
        ->capture_default_str();
    nonvan->add_option("--out", out_path, "also write the certificate to this file");
    nonvan->callback([&] {
        MLForm e = io::form_from_json(io::load_json(e_path));
        MLForm f = io::form_from_json(io::load_json(f_path));
        std::optional<Matrix> seed;
        if (!seed_path.empty()) seed = io::matrix_from_json(io::load_json(seed_path));
        auto cert = nonvanishing_certificate(e, f, seed, rng_seed);
        io::json j = io::certificate_to_json(cert);
        out.emit(j);
        if (!out_path.empty()) io::save_json(out_path, j);
        rc = cert.verdict == "nonzero" ? exit_verified : exit_falsified;
    });

    // ------------------------------------------------------------- certify
    auto* certify = app.add_subcommand("certify", "re-validate stored certificates");
    certify->require_subcommand(1);
    std::string cert_path;
    auto* certify_verify = certify->add_subcommand("verify", "re-run a certificate's checks");
    certify_verify->add_option("cert", cert_path, "certificate JSON")->required();
    certify_verify->callback([&] {
        auto cert = io::certificate_from_json(io::load_json(cert_path));
        bool ok = validate_certificate(cert);
        io::json j;
        j["valid"] = ok;
        j["verdict"] = cert.verdict;
        out.emit(j);
        rc = ok ? exit_verified : exit_falsified;
    });

    // Let global options (--format) appear after the subcommand name too.
    std::function<void(CLI::App*)> enable_fallthrough = [&](CLI::App* a) {
        for (auto* s : a->get_subcommands([](CLI::App*) { return true; })) {
            s->fallthrough();
            enable_fallthrough(s);
        }
    };
    enable_fallthrough(&app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_input_error;
    } catch (const budget_error& e) {
        std::cerr << "budget exceeded: " << e.what() << '\n';
        return exit_inconclusive;
    } catch (const error& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return exit_input_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input_error;
    }
    return rc;
}

} // namespace prg::cli
