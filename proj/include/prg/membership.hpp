#pragma once

#include <cstdlib>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "prg/errors.hpp"
#include "prg/ncpoly.hpp"
#include "prg/scalar.hpp"

namespace prg {

// One summand of an ideal-membership certificate:
// coeff * left * relation[relation_index] * right.
struct WitnessTerm {
    Word left;
    size_t relation_index = 0;
    Word right;
    Scalar coeff;
};

struct MembershipWitness {
    std::vector<WitnessTerm> combination;
    int bound = 0; // word-length bound the witness was found at
};

enum class MembershipStatus {
    member,             // witness in hand
    not_found_at_bound, // inconclusive: the bounded slice of the ideal misses the target
    falsified,          // a representation evaluation proves non-membership
    budget_exceeded,    // enumeration hit the word budget before the slice was complete
};

inline const char* to_string(MembershipStatus s) {
    switch (s) {
        case MembershipStatus::member: return "member";
        case MembershipStatus::not_found_at_bound: return "not-found-at-bound";
        case MembershipStatus::falsified: return "falsified";
        case MembershipStatus::budget_exceeded: return "budget-exceeded";
    }
    return "?";
}

struct MembershipResult {
    MembershipStatus status = MembershipStatus::not_found_at_bound;
    std::optional<MembershipWitness> witness;
    std::string detail;
    long words_seen = 0;
    int bound = 0;
    bool is_member() const { return status == MembershipStatus::member; }
};

// Optional cheap non-membership prover: given the target, return a
// description of a representation in which it evaluates to a nonzero value,
// or nullopt if no falsification was found.
using Falsifier = std::function<std::optional<std::string>(const NCPoly&)>;

inline long default_word_budget() {
    if (const char* env = std::getenv("PRG_WORD_BUDGET")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v > 0) return v;
    }
    return 400000;
}

struct SearchOptions {
    long word_budget = default_word_budget();
    Falsifier falsifier;
};

// Independent re-expansion of a witness, using nothing but polynomial
// arithmetic: sum coeff * left * relation * right must equal the target.
inline bool verify_witness(const MembershipWitness& w, const Presentation& p,
                           const NCPoly& target) {
    NCPoly acc;
    for (const auto& t : w.combination) {
        if (t.relation_index >= p.relations.size()) return false;
        NCPoly l;
        l.add_term(t.left, Scalar(1));
        NCPoly r;
        r.add_term(t.right, Scalar(1));
        acc = acc + (l * p.relations[t.relation_index] * r).scaled(t.coeff);
    }
    return acc == target;
}

// Bounded two-sided-ideal membership by reachable closure: starting from the
// target's words, enumerate spanning elements u * r * v whose supports stay
// within the word-length bound and which touch an already-reachable word,
// then decide membership of the target in their span by exact sparse
// elimination.  Found witnesses are certificates; "not found" is only
// inconclusive.  Opposite-flagged presentations use the same ideal (the
// subspace is identical), so the search ignores the flag.
inline MembershipResult ideal_membership(const NCPoly& target, const Presentation& pres,
                                         int length_bound, const SearchOptions& opts = {}) {
    pres.validate();
    MembershipResult res;
    res.bound = length_bound;

    if (target.is_zero()) {
        res.status = MembershipStatus::member;
        res.witness = MembershipWitness{{}, length_bound};
        return res;
    }

    size_t target_maxlen = 0;
    for (const auto& [w, c] : target.terms()) {
        (void)c;
        target_maxlen = std::max(target_maxlen, w.size());
    }
    if (static_cast<int>(target_maxlen) > length_bound)
        throw precondition_error("ideal_membership: length bound " + std::to_string(length_bound) +
                                 " is below the target's longest word (" +
                                 std::to_string(target_maxlen) + ")");

    if (opts.falsifier) {
        if (auto why = opts.falsifier(target)) {
            res.status = MembershipStatus::falsified;
            res.detail = *why;
            return res;
        }
    }

    const std::optional<int> target_deg = pres.homogeneous_degree(target);

    struct RelInfo {
        size_t index;
        std::vector<Word> support;
        size_t maxlen = 0;
        int degree = 0;
        bool has_empty = false;
    };
    std::vector<RelInfo> rels;
    for (size_t i = 0; i < pres.relations.size(); ++i) {
        const NCPoly& r = pres.relations[i];
        if (r.is_zero()) continue;
        RelInfo info;
        info.index = i;
        info.degree = *pres.homogeneous_degree(r); // validated homogeneous
        for (const auto& [w, c] : r.terms()) {
            (void)c;
            info.support.push_back(w);
            info.maxlen = std::max(info.maxlen, w.size());
            if (w.empty()) info.has_empty = true;
        }
        rels.push_back(std::move(info));
    }

    std::map<Word, int> word_ids;
    std::deque<Word> frontier;
    bool budget_hit = false;

    auto word_id = [&](const Word& w) -> int {
        auto it = word_ids.find(w);
        return it == word_ids.end() ? -1 : it->second;
    };
    auto add_word = [&](const Word& w) -> bool {
        if (word_ids.count(w)) return true;
        if (static_cast<long>(word_ids.size()) >= opts.word_budget) {
            budget_hit = true;
            return false;
        }
        int id = static_cast<int>(word_ids.size());
        word_ids.emplace(w, id);
        frontier.push_back(w);
        return true;
    };

    for (const auto& [w, c] : target.terms()) {
        (void)c;
        add_word(w);
    }

    struct Column {
        Word left;
        size_t rel;
        Word right;
        std::map<int, Scalar> vec; // word id -> coefficient
    };
    std::vector<Column> columns;
    std::set<std::tuple<Word, size_t, Word>> seen;

    // Admits the spanning element left * relation * right if every word of
    // its expansion fits the bound and (for homogeneous targets) the degree
    // matches; expansion words join the reachable set.
    auto try_column = [&](const Word& left, const RelInfo& ri, const Word& right) {
        if (budget_hit) return;
        if (static_cast<int>(left.size() + ri.maxlen + right.size()) > length_bound) return;
        if (target_deg &&
            pres.degree_of(left) + ri.degree + pres.degree_of(right) != *target_deg)
            return;
        auto key = std::make_tuple(left, ri.index, right);
        if (!seen.insert(key).second) return;
        NCPoly l;
        l.add_term(left, Scalar(1));
        NCPoly r;
        r.add_term(right, Scalar(1));
        NCPoly value = l * pres.relations[ri.index] * r;
        Column col;
        col.left = left;
        col.rel = ri.index;
        col.right = right;
        for (const auto& [w, c] : value.terms()) {
            if (!add_word(w)) return; // budget: drop the whole column
            col.vec[word_id(w)] = c;
        }
        columns.push_back(std::move(col));
    };

    // Seed with the bare relations (left = right = empty), so plain linear
    // combinations are found even when no support word occurs in the target.
    for (const auto& ri : rels) try_column({}, ri, {});

    while (!frontier.empty() && !budget_hit) {
        Word w = frontier.front();
        frontier.pop_front();
        for (const auto& ri : rels) {
            if (ri.has_empty) {
                // The relation has a constant term: inserting it at any split
                // point of w connects w to the inserted-occurrence words.
                for (size_t p = 0; p <= w.size(); ++p) {
                    Word left(w.begin(), w.begin() + static_cast<long>(p));
                    Word right(w.begin() + static_cast<long>(p), w.end());
                    try_column(left, ri, right);
                }
            }
            for (const auto& t : ri.support) {
                if (t.empty() || t.size() > w.size()) continue;
                for (size_t p = 0; p + t.size() <= w.size(); ++p) {
                    if (!std::equal(t.begin(), t.end(), w.begin() + static_cast<long>(p))) continue;
                    Word left(w.begin(), w.begin() + static_cast<long>(p));
                    Word right(w.begin() + static_cast<long>(p + t.size()), w.end());
                    try_column(left, ri, right);
                }
            }
        }
    }

    res.words_seen = static_cast<long>(word_ids.size());

    // Exact sparse elimination over the collected columns, with provenance
    // so that a successful reduction of the target yields the combination.
    // Invariant maintained by reduce(): vec_now = vec_start + sum over
    // provenance entries of coeff * column.
    struct Pivot {
        std::map<int, Scalar> vec;           // leading coefficient 1
        std::map<size_t, Scalar> provenance; // pivot = sum coeff * original column
    };
    std::map<int, Pivot> pivots; // keyed by leading word id

    auto reduce = [&](std::map<int, Scalar>& vec, std::map<size_t, Scalar>& prov) {
        while (!vec.empty()) {
            int lead = vec.begin()->first;
            auto it = pivots.find(lead);
            if (it == pivots.end()) break;
            Scalar c = vec.begin()->second;
            for (const auto& [id, v] : it->second.vec) {
                auto vit = vec.find(id);
                if (vit == vec.end()) {
                    vec.emplace(id, -c * v);
                } else {
                    vit->second -= c * v;
                    if (vit->second.is_zero()) vec.erase(vit);
                }
            }
            for (const auto& [k, v] : it->second.provenance) {
                auto pit = prov.find(k);
                if (pit == prov.end()) {
                    prov.emplace(k, -c * v);
                } else {
                    pit->second -= c * v;
                    if (pit->second.is_zero()) prov.erase(pit);
                }
            }
        }
    };

    for (size_t k = 0; k < columns.size(); ++k) {
        std::map<int, Scalar> vec = columns[k].vec;
        std::map<size_t, Scalar> prov{{k, Scalar(1)}};
        reduce(vec, prov);
        if (vec.empty()) continue;
        Scalar lead = vec.begin()->second;
        Pivot piv;
        for (auto& [id, v] : vec) piv.vec.emplace(id, v / lead);
        for (auto& [kk, v] : prov) piv.provenance.emplace(kk, v / lead);
        pivots.emplace(vec.begin()->first, std::move(piv));
    }

    std::map<int, Scalar> tvec;
    for (const auto& [w, c] : target.terms()) tvec[word_id(w)] = c;
    std::map<size_t, Scalar> tprov;
    reduce(tvec, tprov);

    if (tvec.empty()) {
        // 0 = target + sum tprov * column, so the witness negates tprov.
        MembershipWitness wit;
        wit.bound = length_bound;
        for (const auto& [k, c] : tprov)
            wit.combination.push_back({columns[k].left, columns[k].rel, columns[k].right, -c});
        if (!verify_witness(wit, pres, target))
            throw error("ideal_membership: internal error, witness failed re-expansion");
        res.status = MembershipStatus::member;
        res.witness = std::move(wit);
        return res;
    }

    if (budget_hit) {
        res.status = MembershipStatus::budget_exceeded;
        res.detail = "word budget " + std::to_string(opts.word_budget) +
                     " exhausted before the bounded slice was complete";
        return res;
    }
    res.status = MembershipStatus::not_found_at_bound;
    std::vector<const Word*> words_by_id(word_ids.size());
    for (const auto& [w, id] : word_ids) words_by_id[static_cast<size_t>(id)] = &w;
    res.detail = "irreducible residue remains; leading word " +
                 word_to_string(*words_by_id[static_cast<size_t>(tvec.begin()->first)]);
    return res;
}

// Iterative deepening up to max_bound; returns the first conclusive result
// (member / falsified / budget), or the final inconclusive one.
inline MembershipResult ideal_membership_deepening(const NCPoly& target, const Presentation& pres,
                                                   int max_bound,
                                                   const SearchOptions& opts = {}) {
    size_t start = 0;
    for (const auto& [w, c] : target.terms()) {
        (void)c;
        start = std::max(start, w.size());
    }
    MembershipResult last;
    for (int b = static_cast<int>(start); b <= max_bound; ++b) {
        last = ideal_membership(target, pres, b, opts);
        if (last.status != MembershipStatus::not_found_at_bound) return last;
    }
    return last;
}

enum class RelationCheckStatus { verified, falsified, inconclusive };

inline const char* to_string(RelationCheckStatus s) {
    switch (s) {
        case RelationCheckStatus::verified: return "verified";
        case RelationCheckStatus::falsified: return "falsified";
        case RelationCheckStatus::inconclusive: return "inconclusive";
    }
    return "?";
}

struct RelationCheck {
    size_t relation_index = 0;
    RelationCheckStatus status = RelationCheckStatus::inconclusive;
    MembershipResult membership;
};

struct MorphismReport {
    std::vector<RelationCheck> relations;
    bool all_verified() const {
        for (const auto& r : relations)
            if (r.status != RelationCheckStatus::verified) return false;
        return true;
    }
};

// A generator-level map is an algebra map iff every domain relation's image
// lands in the codomain's relation ideal; decided per relation by bounded
// membership, with representation falsification when a falsifier is given.
inline MorphismReport check_morphism(const GenMorphism& m, int length_bound,
                                     const SearchOptions& opts = {}) {
    m.validate();
    MorphismReport report;
    for (size_t i = 0; i < m.domain->relations.size(); ++i) {
        NCPoly img = m.apply(m.domain->relations[i]);
        RelationCheck rc;
        rc.relation_index = i;
        rc.membership = ideal_membership_deepening(img, *m.codomain, length_bound, opts);
        switch (rc.membership.status) {
            case MembershipStatus::member: rc.status = RelationCheckStatus::verified; break;
            case MembershipStatus::falsified: rc.status = RelationCheckStatus::falsified; break;
            default: rc.status = RelationCheckStatus::inconclusive; break;
        }
        report.relations.push_back(std::move(rc));
    }
    return report;
}

} // namespace prg
