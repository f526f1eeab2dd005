#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "prg/errors.hpp"
#include "prg/scalar.hpp"

namespace prg {

// Generator classes: the k x l matrix a_{ij}, the l x k matrix b_{ij}, the
// grouplike pair D / D^{-1}, free-algebra variables x_i, and a marker for
// the scalar unit used only during parsing (never stored inside words).
enum class SymClass : std::uint8_t { A, B, Dpos, Dneg, X, Unit };

struct GenSymbol {
    SymClass cls = SymClass::Unit;
    std::int16_t row = 0;    // 1-based; 0 for D and unit
    std::int16_t col = 0;    // 1-based; 0 for D, x, unit
    std::int16_t factor = 1; // tensor-factor tag; 1 for plain algebras

    auto operator<=>(const GenSymbol&) const = default;

    static GenSymbol a(int i, int j, int factor = 1) {
        return {SymClass::A, static_cast<std::int16_t>(i), static_cast<std::int16_t>(j),
                static_cast<std::int16_t>(factor)};
    }
    static GenSymbol b(int i, int j, int factor = 1) {
        return {SymClass::B, static_cast<std::int16_t>(i), static_cast<std::int16_t>(j),
                static_cast<std::int16_t>(factor)};
    }
    static GenSymbol dpos(int factor = 1) {
        return {SymClass::Dpos, 0, 0, static_cast<std::int16_t>(factor)};
    }
    static GenSymbol dneg(int factor = 1) {
        return {SymClass::Dneg, 0, 0, static_cast<std::int16_t>(factor)};
    }
    static GenSymbol x(int i, int factor = 1) {
        return {SymClass::X, static_cast<std::int16_t>(i), 0, static_cast<std::int16_t>(factor)};
    }
};

// Word in the free algebra; the empty word is the unit.
using Word = std::vector<GenSymbol>;

inline std::string sym_to_string(const GenSymbol& s) {
    std::ostringstream os;
    switch (s.cls) {
        case SymClass::A: os << "a[" << s.row << "," << s.col << "]"; break;
        case SymClass::B: os << "b[" << s.row << "," << s.col << "]"; break;
        case SymClass::Dpos: os << "D"; break;
        case SymClass::Dneg: os << "D^-1"; break;
        case SymClass::X: os << "x[" << s.row << "]"; break;
        case SymClass::Unit: os << "1"; break;
    }
    if (s.factor != 1) os << "#" << s.factor;
    return os.str();
}

inline std::string word_to_string(const Word& w) {
    if (w.empty()) return "1";
    std::string out;
    for (size_t i = 0; i < w.size(); ++i) {
        if (i) out += '.';
        out += sym_to_string(w[i]);
    }
    return out;
}

// Cross-factor commutation normal form: symbols of different tensor factors
// commute, so words are stored with factors ascending; the order within each
// factor is preserved (stable sort).
inline Word normalize_word(Word w) {
    std::stable_sort(w.begin(), w.end(),
                     [](const GenSymbol& x, const GenSymbol& y) { return x.factor < y.factor; });
    return w;
}

// Noncommutative polynomial: finitely many words with nonzero exact
// coefficients, words kept in cross-factor normal form.
class NCPoly {
  public:
    NCPoly() = default;

    static NCPoly zero() { return NCPoly(); }
    static NCPoly unit(const Scalar& c = Scalar(1)) {
        NCPoly p;
        p.add_term({}, c);
        return p;
    }
    static NCPoly generator(const GenSymbol& g, const Scalar& c = Scalar(1)) {
        NCPoly p;
        p.add_term({g}, c);
        return p;
    }

    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }
    const std::map<Word, Scalar>& terms() const { return terms_; }

    Scalar coeff(const Word& w) const {
        auto it = terms_.find(normalize_word(w));
        return it == terms_.end() ? Scalar(0) : it->second;
    }

    void add_term(const Word& w, const Scalar& c) {
        if (c.is_zero()) return;
        Word nw = normalize_word(w);
        auto [it, inserted] = terms_.try_emplace(std::move(nw), c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    NCPoly operator+(const NCPoly& o) const {
        NCPoly r = *this;
        for (const auto& [w, c] : o.terms_) r.add_term(w, c);
        return r;
    }
    NCPoly operator-(const NCPoly& o) const {
        NCPoly r = *this;
        for (const auto& [w, c] : o.terms_) r.add_term(w, -c);
        return r;
    }
    NCPoly operator-() const { return scaled(Scalar(-1)); }
    NCPoly scaled(const Scalar& c) const {
        NCPoly r;
        if (c.is_zero()) return r;
        for (const auto& [w, v] : terms_) r.terms_[w] = v * c;
        return r;
    }

    // Distributive concatenation product (ordinary order; opposite algebras
    // are handled by Presentation::mult, which swaps the operands).
    NCPoly operator*(const NCPoly& o) const {
        NCPoly r;
        for (const auto& [w1, c1] : terms_) {
            for (const auto& [w2, c2] : o.terms_) {
                Word w = w1;
                w.insert(w.end(), w2.begin(), w2.end());
                r.add_term(w, c1 * c2);
            }
        }
        return r;
    }

    friend bool operator==(const NCPoly& x, const NCPoly& y) { return x.terms_ == y.terms_; }
    friend bool operator!=(const NCPoly& x, const NCPoly& y) { return !(x == y); }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string out;
        bool first = true;
        for (const auto& [w, c] : terms_) {
            if (!first) out += " + ";
            first = false;
            if (c.is_one() && !w.empty()) out += word_to_string(w);
            else if (w.empty()) out += c.str();
            else out += c.str() + " * " + word_to_string(w);
        }
        return out;
    }

  private:
    std::map<Word, Scalar> terms_;
};

// Assembles a polynomial from raw (word, coefficient) pairs: zero pruning,
// cancellation, and cross-factor reordering all happen in add_term.
inline NCPoly normalize(const std::vector<std::pair<Word, Scalar>>& raw) {
    NCPoly p;
    for (const auto& [w, c] : raw) p.add_term(w, c);
    return p;
}

// Retags every symbol of a word/polynomial into a later tensor factor.
inline GenSymbol shift_factor(GenSymbol s, int offset) {
    s.factor = static_cast<std::int16_t>(s.factor + offset);
    return s;
}
inline Word shift_factors(Word w, int offset) {
    for (auto& s : w) s = shift_factor(s, offset);
    return w;
}
inline NCPoly shift_factors(const NCPoly& p, int offset) {
    NCPoly r;
    for (const auto& [w, c] : p.terms()) r.add_term(shift_factors(w, offset), c);
    return r;
}

// Graded presentation of an algebra by generators and relations.  The
// opposite flag realizes A^{op}: multiplication swaps operands; relations
// are stored un-reversed (the two-sided ideal is the same subspace either
// way).
struct Presentation {
    std::vector<GenSymbol> alphabet;
    std::map<GenSymbol, int> grading;
    std::vector<NCPoly> relations;
    bool opposite = false;
    int factors = 1;

    bool in_alphabet(const GenSymbol& s) const {
        return std::find(alphabet.begin(), alphabet.end(), s) != alphabet.end();
    }

    int degree_of(const GenSymbol& s) const {
        auto it = grading.find(s);
        if (it == grading.end())
            throw precondition_error("Presentation: ungraded symbol " + sym_to_string(s));
        return it->second;
    }

    int degree_of(const Word& w) const {
        int d = 0;
        for (const auto& s : w) d += degree_of(s);
        return d;
    }

    // Degree if homogeneous (zero poly counts as homogeneous of any degree).
    std::optional<int> homogeneous_degree(const NCPoly& p) const {
        std::optional<int> deg;
        for (const auto& [w, c] : p.terms()) {
            (void)c;
            int d = degree_of(w);
            if (!deg) deg = d;
            else if (*deg != d) return std::nullopt;
        }
        return p.is_zero() ? std::optional<int>(0) : deg;
    }

    std::map<int, NCPoly> homogeneous_parts(const NCPoly& p) const {
        std::map<int, NCPoly> parts;
        for (const auto& [w, c] : p.terms()) parts[degree_of(w)].add_term(w, c);
        return parts;
    }

    NCPoly mult(const NCPoly& p, const NCPoly& q) const { return opposite ? q * p : p * q; }

    void validate() const {
        for (const auto& s : alphabet)
            if (!grading.count(s))
                throw precondition_error("Presentation: alphabet symbol without grading: " +
                                         sym_to_string(s));
        for (size_t i = 0; i < relations.size(); ++i) {
            for (const auto& [w, c] : relations[i].terms()) {
                (void)c;
                for (const auto& s : w)
                    if (!in_alphabet(s))
                        throw precondition_error("Presentation: relation " + std::to_string(i) +
                                                 " uses foreign symbol " + sym_to_string(s));
            }
            if (!homogeneous_degree(relations[i]))
                throw precondition_error("Presentation: relation " + std::to_string(i) +
                                         " is not homogeneous");
        }
        for (int f = 1; f <= factors; ++f) {
            bool has_dpos = in_alphabet(GenSymbol::dpos(f));
            bool has_dneg = in_alphabet(GenSymbol::dneg(f));
            if (has_dpos != has_dneg)
                throw precondition_error("Presentation: D and D^-1 must come in pairs");
        }
    }

    friend bool operator==(const Presentation& x, const Presentation& y) {
        return x.alphabet == y.alphabet && x.grading == y.grading &&
               x.relations == y.relations && x.opposite == y.opposite && x.factors == y.factors;
    }
};

using PresPtr = std::shared_ptr<const Presentation>;

// Tensor-product presentation: factor-tagged union of alphabets; relations
// of each factor survive unchanged; cross-factor commutation lives in the
// word normal form rather than in stored relations.
inline PresPtr tensor_presentation(const PresPtr& p, const PresPtr& q) {
    if (p->opposite || q->opposite)
        throw precondition_error("tensor_presentation: opposite factors not supported");
    auto out = std::make_shared<Presentation>();
    out->factors = p->factors + q->factors;
    out->alphabet = p->alphabet;
    out->grading = p->grading;
    out->relations = p->relations;
    for (const auto& s : q->alphabet) out->alphabet.push_back(shift_factor(s, p->factors));
    for (const auto& [s, d] : q->grading) out->grading[shift_factor(s, p->factors)] = d;
    for (const auto& r : q->relations) out->relations.push_back(shift_factors(r, p->factors));
    out->validate();
    return out;
}

// The one-generator-free presentation of the ground field (empty alphabet):
// codomain of counits.
inline PresPtr trivial_presentation() {
    auto out = std::make_shared<Presentation>();
    return out;
}

// Algebra (or antialgebra, when the codomain is flagged opposite) morphism
// given on generators.  apply() extends multiplicatively using the
// codomain's multiplication, so an opposite codomain yields the
// order-reversing extension automatically.
struct GenMorphism {
    PresPtr domain;
    PresPtr codomain;
    std::map<GenSymbol, NCPoly> images;

    const NCPoly& image_of(const GenSymbol& s) const {
        auto it = images.find(s);
        if (it == images.end())
            throw precondition_error("GenMorphism: no image for " + sym_to_string(s));
        return it->second;
    }

    NCPoly apply_word(const Word& w) const {
        NCPoly acc = NCPoly::unit();
        for (const auto& s : w) acc = codomain->mult(acc, image_of(s));
        return acc;
    }

    NCPoly apply(const NCPoly& p) const {
        NCPoly out;
        for (const auto& [w, c] : p.terms()) out = out + apply_word(w).scaled(c);
        return out;
    }

    // Structural sanity: every generator has an image, images use only
    // codomain symbols and are homogeneous (not necessarily of the same
    // degree as the source generator; comultiplications and counits change
    // degree by design).
    void validate() const {
        for (const auto& s : domain->alphabet) {
            const NCPoly& img = image_of(s);
            for (const auto& [w, c] : img.terms()) {
                (void)c;
                for (const auto& t : w)
                    if (!codomain->in_alphabet(t))
                        throw precondition_error("GenMorphism: image of " + sym_to_string(s) +
                                                 " uses foreign symbol " + sym_to_string(t));
            }
            if (!codomain->homogeneous_degree(img))
                throw precondition_error("GenMorphism: image of " + sym_to_string(s) +
                                         " is not homogeneous");
        }
    }
};

inline GenMorphism identity_morphism(const PresPtr& p) {
    GenMorphism m;
    m.domain = p;
    m.codomain = p;
    for (const auto& s : p->alphabet) m.images[s] = NCPoly::generator(s);
    return m;
}

// g after f.  The presentations must match as values, not just pointers.
inline GenMorphism compose(const GenMorphism& g, const GenMorphism& f) {
    if (!(*f.codomain == *g.domain))
        throw precondition_error("compose: codomain of inner map differs from domain of outer map");
    GenMorphism out;
    out.domain = f.domain;
    out.codomain = g.codomain;
    for (const auto& [s, img] : f.images) out.images[s] = g.apply(img);
    return out;
}

// Factor-wise tensor of morphisms: f acts on the first block of factors,
// g (suitably retagged) on the rest.
inline GenMorphism tensor_morphism(const GenMorphism& f, const GenMorphism& g) {
    GenMorphism out;
    out.domain = tensor_presentation(f.domain, g.domain);
    out.codomain = tensor_presentation(f.codomain, g.codomain);
    for (const auto& [s, img] : f.images) out.images[s] = img;
    for (const auto& [s, img] : g.images)
        out.images[shift_factor(s, f.domain->factors)] = shift_factors(img, f.codomain->factors);
    return out;
}

// Degree-preserving automorphism bundled with its inverse, so that negative
// Zhang powers are available exactly.
struct Automorphism {
    GenMorphism fwd;
    GenMorphism inv;

    const PresPtr& pres() const { return fwd.domain; }

    void validate() const {
        if (!(*fwd.domain == *fwd.codomain) || !(*inv.domain == *inv.codomain) ||
            !(*fwd.domain == *inv.domain))
            throw precondition_error("Automorphism: must be an endomorphism with matching inverse");
        fwd.validate();
        inv.validate();
        for (const auto& s : fwd.domain->alphabet) {
            // Degree preservation, both ways.
            auto d1 = fwd.codomain->homogeneous_degree(fwd.image_of(s));
            auto d2 = inv.codomain->homogeneous_degree(inv.image_of(s));
            int d = fwd.domain->degree_of(s);
            if (!fwd.image_of(s).is_zero() && (!d1 || *d1 != d))
                throw precondition_error("Automorphism: image of " + sym_to_string(s) +
                                         " does not preserve degree");
            if (!inv.image_of(s).is_zero() && (!d2 || *d2 != d))
                throw precondition_error("Automorphism: inverse image of " + sym_to_string(s) +
                                         " does not preserve degree");
            // Two-sided inverse on generators.
            if (inv.apply(fwd.image_of(s)) != NCPoly::generator(s) ||
                fwd.apply(inv.image_of(s)) != NCPoly::generator(s))
                throw precondition_error("Automorphism: maps are not mutually inverse on " +
                                         sym_to_string(s));
        }
    }

    NCPoly apply_power(const NCPoly& p, long d) const {
        const GenMorphism& m = d >= 0 ? fwd : inv;
        long steps = d >= 0 ? d : -d;
        NCPoly cur = p;
        for (long i = 0; i < steps; ++i) cur = m.apply(cur);
        return cur;
    }
};

// Right-hand Zhang twist: p twisted-times q = sum over graded-homogeneous
// parts r of p of r * phi^{deg r}(q).
inline NCPoly zhang_twisted_multiply(const NCPoly& p, const NCPoly& q, const Automorphism& phi) {
    const PresPtr& pres = phi.pres();
    if (pres->opposite)
        throw precondition_error("zhang_twisted_multiply: opposite presentations not supported");
    NCPoly out;
    for (const auto& [deg, part] : pres->homogeneous_parts(p))
        out = out + part * phi.apply_power(q, deg);
    return out;
}

} // namespace prg
