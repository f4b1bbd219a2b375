#pragma once

// Quantifier elimination and decision procedure for the first-order theory of
// ⟨Q; +, rational constants; =, ≤, <⟩.
//
// Existential quantifiers are eliminated per DNF disjunct: equalities first by
// Gaussian substitution, then Fourier–Motzkin on the remaining inequalities.
// Universal quantifiers go through ∀x φ ≡ ¬∃x ¬φ. Everything is exact.

#include "clploop/formula.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace clploop {

struct Limits {
    /// Ceiling on the number of disjuncts any single DNF conversion may hold.
    std::size_t max_dnf = 1'000'000;
};

class ResourceLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

using Conj = std::vector<AtomicProp>;

/// Per linear form L (leading coefficient +1): the tightest lower and upper
/// bounds and any equality seen so far.
struct Bounds {
    std::optional<std::pair<Rational, bool>> lo; // (value, strict)
    std::optional<std::pair<Rational, bool>> hi;
    std::optional<Rational> eq;
};

inline bool tighter_lo(const std::pair<Rational, bool>& a, const std::pair<Rational, bool>& b) {
    return a.first > b.first || (a.first == b.first && a.second && !b.second);
}
inline bool tighter_hi(const std::pair<Rational, bool>& a, const std::pair<Rational, bool>& b) {
    return a.first < b.first || (a.first == b.first && a.second && !b.second);
}

/// Drops tautologies and duplicates, keeps the tightest bound per linear form,
/// and detects contradictions between bounds on the same form. Returns
/// nullopt when the conjunction is trivially unsatisfiable.
inline std::optional<Conj> simplify(const Conj& in) {
    std::vector<LinTerm> order;
    std::map<LinTerm, Bounds> bounds;

    for (const auto& a : in) {
        const LinTerm& t = a.term();
        if (t.is_constant()) {
            if (!a.constant_truth()) return std::nullopt;
            continue;
        }
        // split t = s*L + k with L's leading coefficient +1
        Rational lead = t.coeffs().begin()->second;
        Rational s = lead > 0 ? Rational(1) : Rational(-1);
        LinTerm L = (t - LinTerm(t.constant())) * (Rational(1) / lead);
        Rational scale = abs(lead);
        Rational k = t.constant();
        // t rel 0  <=>  s*scale*L + k rel 0  <=>  s*L + k/scale rel 0
        Rational kk = k / scale;
        auto [it, fresh] = bounds.try_emplace(L);
        if (fresh) order.push_back(L);
        Bounds& b = it->second;
        if (a.rel() == Rel::Eq) {
            Rational v = -k / lead;
            if (b.eq && *b.eq != v) return std::nullopt;
            b.eq = v;
        } else {
            bool strict = a.rel() == Rel::Lt;
            if (s > 0) { // L + kk rel 0  =>  L <= -kk
                std::pair<Rational, bool> h{-kk, strict};
                if (!b.hi || tighter_hi(h, *b.hi)) b.hi = h;
            } else { // -L + kk rel 0  =>  L >= kk
                std::pair<Rational, bool> l{kk, strict};
                if (!b.lo || tighter_lo(l, *b.lo)) b.lo = l;
            }
        }
    }

    Conj out;
    for (const auto& L : order) {
        Bounds& b = bounds.at(L);
        if (b.eq) {
            const Rational& v = *b.eq;
            if (b.lo && (v < b.lo->first || (v == b.lo->first && b.lo->second))) return std::nullopt;
            if (b.hi && (v > b.hi->first || (v == b.hi->first && b.hi->second))) return std::nullopt;
            out.emplace_back(L - LinTerm(v), Rel::Eq);
            continue;
        }
        if (b.lo && b.hi) {
            if (b.lo->first > b.hi->first) return std::nullopt;
            if (b.lo->first == b.hi->first) {
                if (b.lo->second || b.hi->second) return std::nullopt;
                out.emplace_back(L - LinTerm(b.lo->first), Rel::Eq);
                continue;
            }
        }
        if (b.lo) out.emplace_back(LinTerm(b.lo->first) - L, b.lo->second ? Rel::Lt : Rel::Le);
        if (b.hi) out.emplace_back(L - LinTerm(b.hi->first), b.hi->second ? Rel::Lt : Rel::Le);
    }
    return out;
}

inline bool mentions(const Conj& c, const Var& x) {
    return std::any_of(c.begin(), c.end(), [&](const AtomicProp& a) { return a.term().mentions(x); });
}

/// ∃x c for a conjunction c, as a conjunction; nullopt when unsatisfiable.
inline std::optional<Conj> eliminate_var(const Conj& c, const Var& x) {
    // Gaussian step: pick the equality on x with the fewest variables.
    const AtomicProp* pivot = nullptr;
    for (const auto& a : c) {
        if (a.rel() == Rel::Eq && a.term().mentions(x)) {
            if (!pivot || a.term().coeffs().size() < pivot->term().coeffs().size()) pivot = &a;
        }
    }
    if (pivot) {
        // a*x + rest = 0  =>  x = -rest/a
        Rational a = pivot->term().coeff(x);
        LinTerm rest = pivot->term() - LinTerm::var(x, a);
        LinTerm solved = rest * (Rational(-1) / a);
        Conj out;
        out.reserve(c.size());
        for (const auto& b : c) {
            if (&b == pivot) continue;
            out.push_back(b.substitute(x, solved));
        }
        return simplify(out);
    }

    // Fourier–Motzkin: a lower bound and an upper bound on x combine into one
    // inequality, strict iff either input is strict.
    Conj keep, lower, upper;
    for (const auto& a : c) {
        Rational k = a.term().coeff(x);
        if (k == 0) keep.push_back(a);
        else if (k > 0) upper.push_back(a);
        else lower.push_back(a);
    }
    for (const auto& l : lower) {
        Rational al = -l.term().coeff(x);
        for (const auto& u : upper) {
            Rational au = u.term().coeff(x);
            LinTerm t = u.term() * al + l.term() * au;
            bool strict = l.rel() == Rel::Lt || u.rel() == Rel::Lt;
            keep.emplace_back(std::move(t), strict ? Rel::Lt : Rel::Le);
        }
    }
    return simplify(keep);
}

/// Fewest new inequalities first; a variable with an equality is free.
inline Var pick_var(const Conj& c, const VarSet& candidates) {
    std::optional<Var> best;
    long best_cost = 0;
    for (const auto& x : candidates) {
        long lo = 0, hi = 0;
        bool has_eq = false, seen = false;
        for (const auto& a : c) {
            Rational k = a.term().coeff(x);
            if (k == 0) continue;
            seen = true;
            if (a.rel() == Rel::Eq) has_eq = true;
            else if (k > 0) ++hi;
            else ++lo;
        }
        if (!seen) continue;
        long cost = has_eq ? -1 : lo * hi - lo - hi;
        if (!best || cost < best_cost) {
            best = x;
            best_cost = cost;
        }
    }
    if (!best) throw std::logic_error("pick_var: no candidate occurs");
    return *best;
}

/// ∃vars c for a conjunction c; nullopt when unsatisfiable.
inline std::optional<Conj> eliminate_vars(Conj c, const VarSet& vars) {
    auto simplified = simplify(c);
    if (!simplified) return std::nullopt;
    c = std::move(*simplified);
    VarSet todo;
    for (const auto& v : vars)
        if (mentions(c, v)) todo.insert(v);
    while (!todo.empty()) {
        Var x = pick_var(c, todo);
        auto next = eliminate_var(c, x);
        if (!next) return std::nullopt;
        c = std::move(*next);
        todo.erase(x);
        for (auto it = todo.begin(); it != todo.end();) {
            if (!mentions(c, *it)) it = todo.erase(it);
            else ++it;
        }
    }
    return c;
}

inline Formula negate_atom(const AtomicProp& a) {
    const LinTerm& t = a.term();
    switch (a.rel()) {
    case Rel::Eq:
        return Formula::disj({Formula::atom(AtomicProp(t, Rel::Lt)),
                              Formula::atom(AtomicProp(-t, Rel::Lt))});
    case Rel::Le: return Formula::atom(AtomicProp(-t, Rel::Lt));
    case Rel::Lt: return Formula::atom(AtomicProp(-t, Rel::Le));
    }
    return Formula::bottom();
}

/// Negation normal form without ¬ or →: atoms, ∧, ∨, true, false only.
inline Formula nnf(const Formula& f, bool positive = true) {
    using K = Formula::Kind;
    switch (f.kind()) {
    case K::True: return positive ? Formula::top() : Formula::bottom();
    case K::False: return positive ? Formula::bottom() : Formula::top();
    case K::Atom: return positive ? f : negate_atom(f.atom());
    case K::Not: return nnf(f.kids()[0], !positive);
    case K::And:
    case K::Or: {
        std::vector<Formula> kids;
        for (const auto& k : f.kids()) kids.push_back(nnf(k, positive));
        bool as_and = (f.kind() == K::And) == positive;
        return as_and ? Formula::conj(std::move(kids)) : Formula::disj(std::move(kids));
    }
    case K::Implies: {
        // a → b  ≡  ¬a ∨ b
        Formula a = nnf(f.kids()[0], !positive);
        Formula b = nnf(f.kids()[1], positive);
        return positive ? Formula::disj({a, b}) : Formula::conj({a, b});
    }
    case K::Exists:
    case K::Forall: throw std::invalid_argument("nnf: quantified formula");
    }
    return f;
}

/// DNF of an NNF formula; disjuncts that simplify to false are pruned.
inline std::vector<Conj> dnf(const Formula& f, const Limits& lim) {
    using K = Formula::Kind;
    switch (f.kind()) {
    case K::True: return {Conj{}};
    case K::False: return {};
    case K::Atom: {
        auto s = simplify(Conj{f.atom()});
        if (!s) return {};
        return {*s};
    }
    case K::Or: {
        std::vector<Conj> out;
        for (const auto& k : f.kids()) {
            auto part = dnf(k, lim);
            for (auto& c : part) out.push_back(std::move(c));
            if (out.size() > lim.max_dnf) throw ResourceLimit("DNF exceeds " + std::to_string(lim.max_dnf) + " disjuncts");
        }
        return out;
    }
    case K::And: {
        std::vector<Conj> acc{Conj{}};
        for (const auto& k : f.kids()) {
            auto part = dnf(k, lim);
            std::vector<Conj> next;
            for (const auto& a : acc) {
                for (const auto& b : part) {
                    Conj merged = a;
                    merged.insert(merged.end(), b.begin(), b.end());
                    auto s = simplify(merged);
                    if (!s) continue;
                    next.push_back(std::move(*s));
                    if (next.size() > lim.max_dnf)
                        throw ResourceLimit("DNF exceeds " + std::to_string(lim.max_dnf) + " disjuncts");
                }
            }
            acc = std::move(next);
            if (acc.empty()) break;
        }
        return acc;
    }
    default: throw std::invalid_argument("dnf: formula not in NNF");
    }
}

inline Formula from_dnf(const std::vector<Conj>& ds) {
    std::vector<Formula> out;
    for (const auto& c : ds) out.push_back(Formula::from(c));
    return Formula::disj(std::move(out));
}

Formula qe(const Formula& f, const Limits& lim);

} // namespace detail

/// Quantifier-free g with free(g) ⊆ free(f) \ vars and g ≡ ∃vars f over Q.
inline Formula eliminate_exists(const VarSet& vars, const Formula& f, const Limits& lim = {}) {
    Formula body = f.is_quantifier_free() ? f : detail::qe(f, lim);
    auto disjuncts = detail::dnf(detail::nnf(body), lim);
    std::vector<detail::Conj> out;
    for (auto& c : disjuncts) {
        auto r = detail::eliminate_vars(std::move(c), vars);
        if (!r) continue;
        if (r->empty()) return Formula::top();
        if (std::find(out.begin(), out.end(), *r) == out.end()) out.push_back(std::move(*r));
    }
    return detail::from_dnf(out);
}

namespace detail {

/// Quantifier-free equivalent of `f`, eliminating innermost quantifiers first.
inline Formula qe(const Formula& f, const Limits& lim) {
    using K = Formula::Kind;
    switch (f.kind()) {
    case K::True:
    case K::False:
    case K::Atom: return f;
    case K::Not: return Formula::negate(qe(f.kids()[0], lim));
    case K::And:
    case K::Or: {
        std::vector<Formula> kids;
        for (const auto& k : f.kids()) kids.push_back(qe(k, lim));
        return f.kind() == K::And ? Formula::conj(std::move(kids)) : Formula::disj(std::move(kids));
    }
    case K::Implies: return Formula::implies(qe(f.kids()[0], lim), qe(f.kids()[1], lim));
    case K::Exists: {
        VarSet vs(f.bound().begin(), f.bound().end());
        return eliminate_exists(vs, qe(f.kids()[0], lim), lim);
    }
    case K::Forall: {
        VarSet vs(f.bound().begin(), f.bound().end());
        return Formula::negate(eliminate_exists(vs, Formula::negate(qe(f.kids()[0], lim)), lim));
    }
    }
    return f;
}

} // namespace detail

/// Whether D ⊨ f, i.e. the universal closure of f holds over Q.
inline bool decide(const Formula& f, const Limits& lim = {}) {
    VarSet fv = free_vars(f);
    // ∀fv f  ≡  ¬∃fv ¬f
    Formula counter = eliminate_exists(fv, Formula::negate(detail::qe(f, lim)), lim);
    return !eval(counter, Valuation{});
}

/// The computable `solv`: whether some valuation satisfies c.
inline bool satisfiable(const Constraint& c) {
    return detail::eliminate_vars(c, vars_of(c)).has_value();
}

inline bool satisfiable(const Formula& f, const Limits& lim = {}) {
    return eval(eliminate_exists(free_vars(f), f, lim), Valuation{});
}

inline bool equivalent(const Formula& a, const Formula& b, const Limits& lim = {}) {
    return decide(Formula::iff(a, b), lim);
}

namespace detail {

inline AtomicProp negate_ineq(const AtomicProp& a) {
    return a.rel() == Rel::Le ? AtomicProp(-a.term(), Rel::Lt) : AtomicProp(-a.term(), Rel::Le);
}

/// Removes inequalities implied by the rest of the conjunction.
inline Conj drop_redundant(Conj c) {
    for (std::size_t i = 0; i < c.size();) {
        if (c[i].rel() == Rel::Eq) {
            ++i;
            continue;
        }
        Conj probe;
        for (std::size_t j = 0; j < c.size(); ++j)
            if (j != i) probe.push_back(c[j]);
        probe.push_back(negate_ineq(c[i]));
        if (!satisfiable(probe)) c.erase(c.begin() + static_cast<std::ptrdiff_t>(i));
        else ++i;
    }
    return c;
}

inline AtomicProp false_atom() { return AtomicProp(LinTerm(Rational(1)), Rel::Le); }

} // namespace detail

/// ∃̄_W c: the projection of c onto W. A conjunction stays a conjunction under
/// Fourier–Motzkin; an unsatisfiable c projects to `1 <= 0`.
inline Constraint project(const Constraint& c, const VarSet& keep) {
    VarSet drop = vars_of(c);
    for (const auto& v : keep) drop.erase(v);
    auto r = detail::eliminate_vars(c, drop);
    if (!r) return Constraint{detail::false_atom()};
    return detail::drop_redundant(std::move(*r));
}

inline Formula project(const Formula& f, const VarSet& keep, const Limits& lim = {}) {
    VarSet drop = free_vars(f);
    for (const auto& v : keep) drop.erase(v);
    return eliminate_exists(drop, f, lim);
}

namespace detail {

/// Smallest-magnitude integer in the interval, ties toward non-negative;
/// the midpoint when the interval holds no integer.
inline Rational pick_value(const std::optional<std::pair<Rational, bool>>& lo,
                           const std::optional<std::pair<Rational, bool>>& hi) {
    auto feasible = [&](const Rational& x) {
        if (lo && (x < lo->first || (x == lo->first && lo->second))) return false;
        if (hi && (x > hi->first || (x == hi->first && hi->second))) return false;
        return true;
    };
    if (feasible(0)) return 0;
    if (lo && lo->first >= 0) {
        Rational x = lo->second ? floor(lo->first) + 1 : ceil(lo->first);
        if (feasible(x)) return x;
    }
    if (hi && hi->first <= 0) {
        Rational x = hi->second ? ceil(hi->first) - 1 : floor(hi->first);
        if (feasible(x)) return x;
    }
    if (lo && hi) return (lo->first + hi->first) / 2;
    throw std::logic_error("pick_value: empty interval");
}

inline std::optional<Valuation> sample_conj(const Conj& c, const std::vector<Var>& vars) {
    // levels[i] = ∃vars[0..i) c ; the last level holds no variables
    std::vector<Conj> levels;
    auto start = simplify(c);
    if (!start) return std::nullopt;
    levels.push_back(std::move(*start));
    for (const auto& x : vars) {
        auto next = eliminate_var(levels.back(), x);
        if (!next) return std::nullopt;
        levels.push_back(std::move(*next));
    }
    Valuation val;
    for (std::size_t i = vars.size(); i-- > 0;) {
        const Var& x = vars[i];
        std::optional<std::pair<Rational, bool>> lo, hi;
        std::optional<Rational> point;
        for (const auto& a : levels[i]) {
            Rational k = a.term().constant();
            Rational coef = 0;
            for (const auto& [v, cv] : a.term().coeffs()) {
                if (v == x) coef = cv;
                else k += cv * val.at(v);
            }
            if (coef == 0) continue;
            Rational bound = -k / coef;
            if (a.rel() == Rel::Eq) {
                point = bound;
                continue;
            }
            std::pair<Rational, bool> b{bound, a.rel() == Rel::Lt};
            if (coef > 0) {
                if (!hi || tighter_hi(b, *hi)) hi = b;
            } else {
                if (!lo || tighter_lo(b, *lo)) lo = b;
            }
        }
        val[x] = point ? *point : pick_value(lo, hi);
    }
    return val;
}

} // namespace detail

/// A satisfying valuation over free(f) ∪ extra, or nullopt when f is
/// unsatisfiable. Deterministic: first satisfiable DNF disjunct, values chosen
/// by back-substitution through the elimination levels.
inline std::optional<Valuation> sample_solution(const Formula& f, const VarSet& extra = {},
                                                const Limits& lim = {}) {
    VarSet all = free_vars(f);
    all.insert(extra.begin(), extra.end());
    std::vector<Var> order(all.begin(), all.end());
    Formula body = f.is_quantifier_free() ? f : detail::qe(f, lim);
    for (const auto& c : detail::dnf(detail::nnf(body), lim)) {
        if (auto v = detail::sample_conj(c, order)) {
            if (!eval(body, *v)) throw std::logic_error("sample_solution produced a non-model");
            return v;
        }
    }
    return std::nullopt;
}

inline std::optional<Valuation> sample_solution(const Constraint& c, const VarSet& extra = {}) {
    return sample_solution(Formula::from(c), extra);
}

} // namespace clploop
