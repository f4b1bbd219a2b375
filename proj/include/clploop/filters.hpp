#pragma once

#include "clploop/linarith.hpp"
#include "clploop/syntax.hpp"

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace clploop {

/// A set of argument indices (1-based) of one predicate.
using Positions = std::set<std::size_t>;

inline std::string to_string(const Positions& m) {
    std::string out = "{";
    bool first = true;
    for (auto i : m) {
        if (!first) out += ",";
        out += std::to_string(i);
        first = false;
    }
    return out + "}";
}

/// [1, arity] \ m
inline Positions complement(const Positions& m, std::size_t arity) {
    Positions out;
    for (std::size_t i = 1; i <= arity; ++i)
        if (!m.count(i)) out.insert(i);
    return out;
}

/// p|m: the predicate of atoms projected onto positions m.
inline Predicate projected(const Predicate& p, const Positions& m) {
    return Predicate{p.name + "|" + to_string(m), m.size()};
}

/// τ: maps each predicate to the positions it distinguishes. Predicates not
/// mentioned map to the empty set.
class PositionSet {
public:
    PositionSet() = default;

    void set(const Predicate& p, Positions m) {
        for (auto i : m)
            if (i < 1 || i > p.arity)
                throw std::out_of_range("position " + std::to_string(i) + " outside " + to_string(p));
        map_[p] = std::move(m);
    }

    Positions of(const Predicate& p) const {
        auto it = map_.find(p);
        return it == map_.end() ? Positions{} : it->second;
    }

    /// τ̄
    PositionSet complement() const {
        PositionSet out;
        for (const auto& [p, m] : map_) out.map_[p] = clploop::complement(m, p.arity);
        return out;
    }

    Positions complement_of(const Predicate& p) const { return clploop::complement(of(p), p.arity); }

    friend bool operator==(const PositionSet&, const PositionSet&) = default;

private:
    std::map<Predicate, Positions> map_;
};

/// t̃|m: the subsequence of `items` at the indices in m, ascending.
template <class T>
std::vector<T> select(const std::vector<T>& items, const Positions& m) {
    std::vector<T> out;
    for (auto i : m) out.push_back(items.at(i - 1));
    return out;
}

/// ⟨p(t̃) | d⟩|m = ⟨p|m(t̃|m) | d⟩
inline Query project_query(const Query& q, const Positions& m) {
    return Query{Atom(projected(q.rel(), m), select(q.atom.args, m)), q.constraint};
}

inline Query project_query(const Query& q, const PositionSet& tau) {
    return project_query(q, tau.of(q.rel()));
}

/// Δ = (τ, δ). A predicate without an explicit condition gets
/// ⟨p|τ(X1,…,Xk) | true⟩, which filters nothing.
class Filter {
public:
    Filter() = default;
    explicit Filter(PositionSet tau) : tau_(std::move(tau)) {}

    const PositionSet& positions() const { return tau_; }

    /// Sets τ(p) = m and δ(p) = ⟨p|m(args) | d⟩. Rejects an unsatisfiable d.
    void set(const Predicate& p, Positions m, std::vector<LinTerm> args, Constraint d) {
        if (args.size() != m.size()) throw std::invalid_argument("filter condition arity mismatch");
        if (!satisfiable(d)) throw std::invalid_argument("filter condition is unsatisfiable");
        Predicate pp = projected(p, m);
        tau_.set(p, std::move(m));
        conditions_[p] = Query{Atom(pp, std::move(args)), std::move(d)};
    }

    Query condition(const Predicate& p) const {
        auto it = conditions_.find(p);
        if (it != conditions_.end()) return it->second;
        Positions m = tau_.of(p);
        std::vector<LinTerm> args;
        for (std::size_t i = 1; i <= m.size(); ++i) args.emplace_back(Var{"X" + std::to_string(i), 0});
        return Query{Atom(projected(p, m), std::move(args)), {}};
    }

private:
    PositionSet tau_;
    std::map<Predicate, Query> conditions_;
};

/// sat(s̃, Q) = ∃Var(Q′) (s̃ = t̃′ ∧ d′) with Q′ the variant of Q in generation
/// `gen`, which the caller keeps disjoint from s̃.
inline Formula sat_formula(const std::vector<LinTerm>& terms, const Query& q, std::uint32_t gen) {
    if (terms.size() != q.atom.args.size()) throw std::invalid_argument("sat_formula: length mismatch");
    Query v = rename_apart(q, gen);
    Constraint body;
    for (std::size_t i = 0; i < terms.size(); ++i) body.emplace_back(terms[i], RelOp::Eq, v.atom.args[i]);
    body.insert(body.end(), v.constraint.begin(), v.constraint.end());
    return Formula::exists(v.vars(), Formula::from(body));
}

inline std::vector<LinTerm> var_terms(const std::vector<Var>& vs) {
    return std::vector<LinTerm>(vs.begin(), vs.end());
}

/// Set(q) ⊆ Set(general), decided as ∀W̃ [sat(W̃, q) → sat(W̃, general)].
inline bool more_general(const Query& general, const Query& q, const Limits& lim = {}) {
    if (!satisfiable(q.constraint)) return true;
    if (general.rel() != q.rel()) return false;
    VarSet used = q.vars();
    VarSet gv = general.vars();
    used.insert(gv.begin(), gv.end());
    Generations gens = Generations::after(used);
    std::uint32_t gw = gens.next();
    std::vector<Var> w;
    for (std::size_t i = 1; i <= q.atom.args.size(); ++i) w.push_back(Var{"W" + std::to_string(i), gw});
    Formula f = Formula::forall(
        w, Formula::implies(sat_formula(var_terms(w), q, gens.next()),
                            sat_formula(var_terms(w), general, gens.next())));
    return decide(f, lim);
}

/// Set(Q|τ) ⊆ Set(δ(rel(Q)))
inline bool satisfies(const Query& q, const Filter& delta, const Limits& lim = {}) {
    return more_general(delta.condition(q.rel()), project_query(q, delta.positions()), lim);
}

/// `general`|τ̄ is more general than `q`|τ̄, and `general` satisfies Δ.
inline bool delta_more_general(const Query& general, const Query& q, const Filter& delta,
                               const Limits& lim = {}) {
    if (general.rel() != q.rel()) return false;
    Positions rest = delta.positions().complement_of(q.rel());
    return more_general(project_query(general, rest), project_query(q, rest), lim) &&
           satisfies(general, delta, lim);
}

} // namespace clploop
