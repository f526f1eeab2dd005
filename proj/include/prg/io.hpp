#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "prg/cogroupoid.hpp"
#include "prg/errors.hpp"
#include "prg/form.hpp"
#include "prg/matrix.hpp"
#include "prg/membership.hpp"
#include "prg/modules.hpp"
#include "prg/ncpoly.hpp"
#include "prg/superpotential.hpp"
#include "prg/tensor.hpp"

// JSON wire formats and text rendering.  ordered_json keeps key order fixed,
// so identical values always serialize to identical bytes.
namespace prg::io {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Files

inline json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const nlohmann::json::parse_error& ex) {
        throw parse_error(path + ": " + ex.what());
    }
}

inline void save_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw parse_error("cannot open '" + path + "' for writing");
    out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Scalars, matrices, tensors, forms

inline json scalar_to_json(const Scalar& s) { return s.str(); }

inline Scalar scalar_from_json(const json& j) {
    if (j.is_number_integer()) return Scalar(j.get<long>());
    if (j.is_string()) return Scalar::from_string(j.get<std::string>());
    throw parse_error("scalar: expected a string \"p/q\" or an integer, got " + j.dump());
}

// {"shape":[...],"entries":[{"idx":[...],"val":"p/q"},...]}; 1-based indices,
// omitted entries are zero.
inline json tensor_to_json(const SparseTensor& t) {
    json j;
    j["shape"] = t.shape();
    json entries = json::array();
    for (const auto& [idx, val] : t.entries()) {
        json e;
        e["idx"] = idx;
        e["val"] = val.str();
        entries.push_back(std::move(e));
    }
    j["entries"] = std::move(entries);
    return j;
}

inline SparseTensor tensor_from_json(const json& j) {
    if (!j.is_object() || !j.contains("shape"))
        throw parse_error("tensor: expected an object with \"shape\"");
    SparseTensor t(j.at("shape").get<std::vector<int>>());
    for (const auto& e : j.value("entries", json::array()))
        t.set(e.at("idx").get<MultiIndex>(), scalar_from_json(e.at("val")));
    return t;
}

inline json matrix_to_json(const Matrix& m) {
    json j;
    j["shape"] = {m.rows(), m.cols()};
    json entries = json::array();
    for (int i = 0; i < m.rows(); ++i)
        for (int c = 0; c < m.cols(); ++c)
            if (!m.at(i, c).is_zero()) {
                json e;
                e["idx"] = {i + 1, c + 1};
                e["val"] = m.at(i, c).str();
                entries.push_back(std::move(e));
            }
    j["entries"] = std::move(entries);
    return j;
}

inline Matrix matrix_from_json(const json& j) {
    SparseTensor t = tensor_from_json(j);
    if (t.order() != 2) throw parse_error("matrix: shape must have exactly two axes");
    return t.to_matrix();
}

// Form JSON adds "m" and "dim" on top of the tensor body.
inline json form_to_json(const MLForm& f) {
    json j;
    j["m"] = f.arity;
    j["dim"] = f.dim;
    json body = tensor_to_json(f.coeffs);
    j["shape"] = std::move(body["shape"]);
    j["entries"] = std::move(body["entries"]);
    return j;
}

inline MLForm form_from_json(const json& j) {
    if (!j.is_object() || !j.contains("m") || !j.contains("dim"))
        throw parse_error("form: expected an object with \"m\" and \"dim\"");
    MLForm f(j.at("m").get<int>(), j.at("dim").get<int>());
    SparseTensor t = tensor_from_json(j);
    f.coeffs = std::move(t);
    if (!f.shape_ok())
        throw parse_error("form: shape does not match m copies of dim");
    return f;
}

// ---------------------------------------------------------------------------
// Polynomial text format: "+"-separated terms "3/2 * a[1,2].b[2,1].D^-1";
// tensor factors beyond the first render as "#k" suffixes.

namespace detail {

inline GenSymbol sym_from_text(const std::string& s) {
    std::string base = s;
    int factor = 1;
    if (auto pos = s.find('#'); pos != std::string::npos) {
        base = s.substr(0, pos);
        try {
            factor = std::stoi(s.substr(pos + 1));
        } catch (...) {
            throw parse_error("symbol: bad factor tag in '" + s + "'");
        }
    }
    auto indices = [&](size_t want) {
        auto lb = base.find('['), rb = base.find(']');
        if (lb == std::string::npos || rb == std::string::npos || rb < lb)
            throw parse_error("symbol: expected indices in '" + s + "'");
        std::vector<int> out;
        std::istringstream is(base.substr(lb + 1, rb - lb - 1));
        std::string part;
        while (std::getline(is, part, ',')) {
            try {
                out.push_back(std::stoi(part));
            } catch (...) {
                throw parse_error("symbol: bad index in '" + s + "'");
            }
        }
        if (out.size() != want)
            throw parse_error("symbol: wrong index count in '" + s + "'");
        return out;
    };
    if (base == "D") return GenSymbol::dpos(factor);
    if (base == "D^-1") return GenSymbol::dneg(factor);
    if (base.rfind("a[", 0) == 0) {
        auto ij = indices(2);
        return GenSymbol::a(ij[0], ij[1], factor);
    }
    if (base.rfind("b[", 0) == 0) {
        auto ij = indices(2);
        return GenSymbol::b(ij[0], ij[1], factor);
    }
    if (base.rfind("x[", 0) == 0) return GenSymbol::x(indices(1)[0], factor);
    throw parse_error("symbol: cannot parse '" + s + "'");
}

inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

inline Word word_from_text(const std::string& s) {
    if (s == "1") return {};
    Word w;
    std::istringstream is(s);
    std::string part;
    while (std::getline(is, part, '.')) w.push_back(sym_from_text(trim(part)));
    return w;
}

} // namespace detail

inline std::string poly_to_text(const NCPoly& p) { return p.str(); }

inline NCPoly poly_from_text(const std::string& text) {
    std::string t = detail::trim(text);
    if (t.empty()) throw parse_error("polynomial: empty string");
    if (t == "0") return NCPoly();
    NCPoly p;
    std::istringstream is(t);
    std::string term;
    while (std::getline(is, term, '+')) {
        term = detail::trim(term);
        if (term.empty()) throw parse_error("polynomial: empty term in '" + text + "'");
        Scalar c(1);
        std::string word_part = term;
        if (auto pos = term.find('*'); pos != std::string::npos) {
            c = Scalar::from_string(detail::trim(term.substr(0, pos)));
            word_part = detail::trim(term.substr(pos + 1));
        } else if (term.find_first_of("abDx") == std::string::npos) {
            // a bare rational: coefficient times the empty word
            p.add_term({}, Scalar::from_string(term));
            continue;
        }
        p.add_term(detail::word_from_text(word_part), c);
    }
    return p;
}

// ---------------------------------------------------------------------------
// Presentations and morphisms

inline json presentation_to_json(const Presentation& p) {
    json j;
    j["factors"] = p.factors;
    j["opposite"] = p.opposite;
    json alpha = json::array();
    for (const auto& s : p.alphabet) alpha.push_back(sym_to_string(s));
    j["alphabet"] = std::move(alpha);
    json grading = json::object();
    for (const auto& [s, d] : p.grading) grading[sym_to_string(s)] = d;
    j["grading"] = std::move(grading);
    json rels = json::array();
    for (const auto& r : p.relations) rels.push_back(r.str());
    j["relations"] = std::move(rels);
    return j;
}

inline json morphism_images_to_json(const GenMorphism& m) {
    json j = json::object();
    for (const auto& [s, img] : m.images) j[sym_to_string(s)] = img.str();
    return j;
}

inline json uqg_to_json(const UQGPresentation& H) {
    json j;
    j["k"] = H.k;
    j["l"] = H.l;
    j["m"] = H.m;
    j["P"] = matrix_to_json(H.P);
    j["Q"] = matrix_to_json(H.Q);
    j["presentation"] = presentation_to_json(*H.pres);
    json labels = json::array();
    for (size_t i = 0; i < H.pres->relations.size(); ++i)
        labels.push_back(relation_label(H, i));
    j["relation_labels"] = std::move(labels);
    return j;
}

// ---------------------------------------------------------------------------
// Membership results and named checks

inline json witness_to_json(const MembershipWitness& w) {
    json j;
    j["bound"] = w.bound;
    json combo = json::array();
    for (const auto& t : w.combination) {
        json e;
        e["coeff"] = t.coeff.str();
        e["left"] = word_to_string(t.left);
        e["relation"] = t.relation_index;
        e["right"] = word_to_string(t.right);
        combo.push_back(std::move(e));
    }
    j["combination"] = std::move(combo);
    return j;
}

inline json membership_to_json(const MembershipResult& r) {
    json j;
    j["status"] = to_string(r.status);
    j["bound"] = r.bound;
    j["words_seen"] = r.words_seen;
    if (!r.detail.empty()) j["detail"] = r.detail;
    if (r.witness) j["witness"] = witness_to_json(*r.witness);
    return j;
}

inline json named_check_to_json(const NamedCheck& c) {
    json j;
    j["name"] = c.name;
    j["status"] = to_string(c.status);
    if (!c.target.is_zero()) j["target"] = c.target.str();
    if (c.membership.bound > 0 || c.membership.witness || c.membership.words_seen > 0 ||
        !c.membership.detail.empty())
        j["membership"] = membership_to_json(c.membership);
    return j;
}

inline json axiom_report_to_json(const AxiomReport& r) {
    json j;
    j["all_verified"] = r.all_verified();
    j["bound"] = r.bound;
    if (!r.antipode_convention.empty()) j["antipode_convention"] = r.antipode_convention;
    json parts = json::array();
    for (const auto& p : r.parts) {
        json pj;
        pj["name"] = p.name;
        pj["status"] = to_string(p.status);
        json checks = json::array();
        for (const auto& c : p.checks) checks.push_back(named_check_to_json(c));
        pj["checks"] = std::move(checks);
        parts.push_back(std::move(pj));
    }
    j["parts"] = std::move(parts);
    return j;
}

inline json lemma_report_to_json(const LemmaReport& r) {
    json j;
    j["all_verified"] = r.all_verified();
    j["convention"] = r.convention;
    j["bound"] = r.bound;
    json checks = json::array();
    for (const auto& c : r.checks) checks.push_back(named_check_to_json(c));
    j["checks"] = std::move(checks);
    return j;
}

// ---------------------------------------------------------------------------
// Twisting reports

inline json twisting_pair_to_json(const TwistingPairReport& r) {
    json j;
    j["pass"] = r.pass();
    j["lambda"] = r.lambda.str();
    j["bound"] = r.bound;
    j["phi1"] = morphism_images_to_json(r.phi1.fwd);
    j["phi2"] = morphism_images_to_json(r.phi2.fwd);
    j["algebra_map_phi1"] = to_string(r.algebra_map_phi1);
    j["algebra_map_phi2"] = to_string(r.algebra_map_phi2);
    j["p1_status"] = to_string(r.p1_status);
    j["p1_phi1_side"] = r.p1_phi1_side;
    j["p1_phi2_side"] = r.p1_phi2_side;
    j["p2_status"] = to_string(r.p2_status);
    j["commute"] = r.commute_ok;
    json checks = json::array();
    for (const auto& c : r.relation_checks) checks.push_back(named_check_to_json(c));
    j["relation_checks"] = std::move(checks);
    return j;
}

inline json twisting_conditions_to_json(const TwistingConditionsReport& r) {
    json j;
    j["pass"] = r.pass();
    json checks = json::array();
    for (const auto& c : r.checks) checks.push_back(named_check_to_json(c));
    j["checks"] = std::move(checks);
    return j;
}

inline json connectivity_to_json(const ConnectivityReport& r) {
    json j;
    j["all_verified"] = r.all_verified();
    j["lambda"] = r.lambda.str();
    j["twisted_form"] = form_to_json(r.twisted_form);
    j["bound"] = r.bound;
    json checks = json::array();
    for (const auto& c : r.checks) checks.push_back(named_check_to_json(c));
    j["checks"] = std::move(checks);
    return j;
}

// ---------------------------------------------------------------------------
// Forms module reports

inline json preregularity_to_json(const PreregularityReport& r) {
    json j;
    j["pass"] = r.pass();
    j["nondegenerate"] = r.nondegeneracy.nondegenerate;
    if (r.nondegeneracy.witness)
        j["degeneracy_witness"] = matrix_to_json(*r.nondegeneracy.witness);
    if (r.twist) j["twist"] = matrix_to_json(*r.twist);
    j["twist_invertible"] = r.twist_invertible;
    return j;
}

inline json aut_membership_to_json(const AutMembership& r) {
    json j;
    j["member"] = r.member;
    if (r.member) j["lambda"] = r.lambda.str();
    return j;
}

inline json relation_space_to_json(const RelationSpace& r) {
    json j;
    j["N"] = r.N;
    j["dim"] = r.dim;
    j["rank"] = r.rank;
    json basis = json::array();
    for (const auto& t : r.basis) basis.push_back(tensor_to_json(t));
    j["basis"] = std::move(basis);
    return j;
}

inline json graded_dims_to_json(const GradedDims& r) {
    json j;
    j["maxdeg"] = r.maxdeg;
    j["dims"] = r.dims;
    return j;
}

// ---------------------------------------------------------------------------
// Graded module families and certificates

inline json module_report_to_json(const ModuleReport& r) {
    json j;
    j["pass"] = r.pass;
    json checks = json::array();
    for (const auto& c : r.checks) {
        json cj;
        cj["d"] = c.d;
        cj["identity"] = c.identity;
        cj["ok"] = c.ok;
        checks.push_back(std::move(cj));
    }
    j["checks"] = std::move(checks);
    return j;
}

inline json module_family_to_json(const ModuleFamily& fam) {
    json j;
    j["E"] = matrix_to_json(fam.E);
    j["F"] = matrix_to_json(fam.F);
    j["window"] = {fam.dlo, fam.dhi};
    json amaps = json::object();
    for (const auto& [d, mat] : fam.A_maps) amaps[std::to_string(d)] = matrix_to_json(mat);
    j["A_maps"] = std::move(amaps);
    json bmaps = json::object();
    for (const auto& [d, mat] : fam.B_maps) bmaps[std::to_string(d)] = matrix_to_json(mat);
    j["B_maps"] = std::move(bmaps);
    return j;
}

inline json certificate_to_json(const NonvanishingCertificate& c) {
    json j;
    j["e"] = form_to_json(c.e);
    j["f"] = form_to_json(c.f);
    j["seed"] = matrix_to_json(c.seed);
    j["window"] = {c.dlo, c.dhi};
    if (c.rng_seed) j["rng_seed"] = *c.rng_seed;
    j["verdict"] = c.verdict;
    j["equivalence_note"] = c.equivalence_note;
    j["checks"] = module_report_to_json(c.checks);
    return j;
}

inline NonvanishingCertificate certificate_from_json(const json& j) {
    NonvanishingCertificate c;
    c.e = form_from_json(j.at("e"));
    c.f = form_from_json(j.at("f"));
    c.seed = matrix_from_json(j.at("seed"));
    auto window = j.at("window").get<std::vector<int>>();
    if (window.size() != 2) throw parse_error("certificate: window must be [dlo, dhi]");
    c.dlo = window[0];
    c.dhi = window[1];
    if (j.contains("rng_seed")) c.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    c.verdict = j.value("verdict", std::string());
    c.equivalence_note = j.value("equivalence_note", std::string());
    const json& checks = j.at("checks");
    c.checks.pass = checks.at("pass").get<bool>();
    for (const auto& cj : checks.at("checks")) {
        ModuleCheck mc;
        mc.d = cj.at("d").get<int>();
        mc.identity = cj.at("identity").get<std::string>();
        mc.ok = cj.at("ok").get<bool>();
        c.checks.checks.push_back(std::move(mc));
    }
    return c;
}

// ---------------------------------------------------------------------------
// Text rendering: a line-oriented projection of the JSON report.

namespace detail {
inline void render_text(const json& j, std::ostream& os, int indent) {
    std::string pad(static_cast<size_t>(indent), ' ');
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) {
            if (v.is_object() || v.is_array()) {
                os << pad << k << ":\n";
                render_text(v, os, indent + 2);
            } else {
                os << pad << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump())
                   << '\n';
            }
        }
    } else if (j.is_array()) {
        for (const auto& v : j) {
            if (v.is_object() || v.is_array()) {
                os << pad << "-\n";
                render_text(v, os, indent + 2);
            } else {
                os << pad << "- " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
            }
        }
    } else {
        os << pad << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
    }
}
} // namespace detail

inline std::string to_text(const json& j) {
    std::ostringstream os;
    detail::render_text(j, os, 0);
    return os.str();
}

} // namespace prg::io
