#pragma once

// Randomized invariant checks shared by the unit suite and the acceptance
// runner. Each returns how many instances were run, how many were
// non-vacuous and the first counterexample, if any.

#include "fuzz.hpp"

#include "clploop/analyzer.hpp"
#include "clploop/dnlog.hpp"
#include "clploop/engine.hpp"
#include "clploop/filters.hpp"

#include <functional>
#include <optional>
#include <sstream>
#include <string>

namespace props {

using namespace clploop;

struct Outcome {
    std::size_t runs = 0;
    std::size_t exercised = 0; // instances where the premise held
    std::size_t failures = 0;
    std::string first_failure;

    bool ok() const { return failures == 0; }

    void fail(const std::string& why) {
        if (failures++ == 0) first_failure = why;
    }
};

inline Predicate pred(fuzz::Gen& g, const std::string& name = "p") {
    return Predicate{name, static_cast<std::size_t>(g.range(1, 2))};
}

/// Ground tuple membership in Set(q), by substituting the tuple for the
/// arguments and checking the store.
inline bool member(const std::vector<Rational>& tuple, const Query& q) {
    Constraint c = q.constraint;
    for (std::size_t i = 0; i < tuple.size(); ++i)
        c.emplace_back(q.atom.args[i], RelOp::Eq, LinTerm(tuple[i]));
    return satisfiable(c);
}

/// A ground tuple of Set(q), when q is satisfiable.
inline std::optional<std::vector<Rational>> sample_member(const Query& q) {
    auto s = sample_solution(q.constraint, q.vars());
    if (!s) return std::nullopt;
    std::vector<Rational> out;
    for (const auto& t : q.atom.args) out.push_back(t.eval(*s));
    return out;
}

/// A step with r from Q exists iff Set(Q) meets Set(⟨p(X̃)|c⟩).
inline Outcome step_iff_intersection(std::size_t n, std::uint64_t seed) {
    fuzz::Gen g(seed);
    Outcome o;
    for (std::size_t i = 0; i < n; ++i, ++o.runs) {
        Predicate p = pred(g);
        Clause r = fuzz::clause(g, p);
        Query q = fuzz::query(g, p);
        bool step = derivation_step(q, r, 1).has_value();

        Query h = r.head_query();
        VarSet used = q.vars();
        VarSet hv = h.vars();
        used.insert(hv.begin(), hv.end());
        Generations gens = Generations::after(used);
        std::uint32_t gw = gens.next();
        std::vector<Var> w;
        for (std::size_t k = 1; k <= p.arity; ++k) w.push_back(Var{"W" + std::to_string(k), gw});
        bool meet = satisfiable(Formula::exists(
            w, Formula::conj({sat_formula(var_terms(w), q, gens.next()), sat_formula(var_terms(w), h, gens.next())})));

        if (step) {
            ++o.exercised;
            // any solution of the new store yields a common element
            auto next = derivation_step(q, r, 1);
            auto s = sample_solution(next->constraint, next->vars());
            std::vector<Rational> tuple;
            for (const auto& t : q.atom.args) tuple.push_back(t.eval(*s));
            if (!member(tuple, q) || !member(tuple, h)) o.fail("sampled store point outside the intersection");
        }
        if (step != meet) o.fail("step=" + std::to_string(step) + " meet=" + std::to_string(meet) + " for " +
                                 to_string(q) + " and " + to_string(r));
    }
    return o;
}

/// DNlog2(Δ, r) holds iff ⟨q(Ỹ)|c⟩ satisfies Δ.
inline Outcome dnlog2_iff_satisfies(std::size_t n, std::uint64_t seed) {
    fuzz::Gen g(seed);
    Outcome o;
    for (std::size_t i = 0; i < n; ++i, ++o.runs) {
        Predicate p = pred(g);
        Clause r = fuzz::clause(g, p);
        Filter f = fuzz::filter(g, p);
        bool d2 = decide(dnlog2_formula(f, r));
        bool sat = satisfies(r.body_query(), f);
        if (d2) ++o.exercised;
        if (d2 != sat) o.fail("DNlog2=" + std::to_string(d2) + " satisfies=" + std::to_string(sat) + " for " +
                              to_string(r) + " with " + to_string(f.condition(p)));
    }
    return o;
}

/// If Q ⟹r Q1 and Q′ is more general than Q, then Q′ ⟹r Q′1 with Q′1 more
/// general than Q1.
inline Outcome lifting(std::size_t n, std::uint64_t seed) {
    fuzz::Gen g(seed);
    Outcome o;
    for (std::size_t i = 0; i < n; ++i, ++o.runs) {
        Predicate p = pred(g);
        Clause r = fuzz::clause(g, p);
        Query q = fuzz::query(g, p);
        int fresh = 0;
        Query gq = g.coin(0.8) ? fuzz::weaken(g, q, fresh) : fuzz::query(g, p);
        auto q1 = derivation_step(q, r, 1);
        if (!q1 || !more_general(gq, q)) continue;
        ++o.exercised;
        auto g1 = derivation_step(gq, r, 1);
        if (!g1) {
            o.fail("no step from the more general query " + to_string(gq) + " with " + to_string(r));
            continue;
        }
        if (!more_general(*g1, *q1)) o.fail(to_string(*g1) + " not more general than " + to_string(*q1));
    }
    return o;
}

/// Δ-more general is transitive.
inline Outcome delta_transitive(std::size_t n, std::uint64_t seed) {
    fuzz::Gen g(seed);
    Outcome o;
    for (std::size_t i = 0; i < n; ++i, ++o.runs) {
        Predicate p = pred(g);
        Filter f;
        if (g.coin()) {
            f = fuzz::filter(g, p);
        } else {
            Positions m;
            for (std::size_t k = 1; k <= p.arity; ++k)
                if (g.coin()) m.insert(k);
            f.set(p, m, var_terms(fuzz::numbered("W", m.size())), {});
        }
        int fresh = 0;
        Query q3 = fuzz::query(g, p);
        Query q2 = g.coin(0.8) ? fuzz::weaken(g, q3, fresh) : fuzz::query(g, p);
        Query q1 = g.coin(0.8) ? fuzz::weaken(g, q2, fresh) : fuzz::query(g, p);
        if (!delta_more_general(q1, q2, f) || !delta_more_general(q2, q3, f)) continue;
        ++o.exercised;
        if (!delta_more_general(q1, q3, f))
            o.fail(to_string(q1) + " / " + to_string(q2) + " / " + to_string(q3) + " under " +
                   to_string(f.condition(p)));
    }
    return o;
}

/// more_general does not depend on variable names, and agrees with a
/// sampled membership check.
inline Outcome variant_invariance(std::size_t n, std::uint64_t seed) {
    fuzz::Gen g(seed);
    Outcome o;
    for (std::size_t i = 0; i < n; ++i, ++o.runs) {
        Predicate p = pred(g);
        int fresh = 0;
        Query q = fuzz::query(g, p);
        Query gq = g.coin(0.6) ? fuzz::weaken(g, q, fresh) : fuzz::query(g, p);
        bool base = more_general(gq, q);
        if (base) ++o.exercised;
        bool a = more_general(fuzz::variant(gq, "A"), fuzz::variant(q, "B"));
        bool b = more_general(fuzz::variant(gq, "B"), q);
        bool c = more_general(gq, fuzz::variant(q, "C"));
        if (a != base || b != base || c != base) {
            o.fail("renaming changed the verdict for " + to_string(gq) + " vs " + to_string(q));
            continue;
        }
        if (base) {
            if (auto t = sample_member(q); t && !member(*t, gq))
                o.fail("sampled element of " + to_string(q) + " outside " + to_string(gq));
        }
    }
    return o;
}

/// The filter distinguishing no position is DNlog for every clause.
inline Outcome empty_positions_dnlog(std::size_t n, std::uint64_t seed) {
    fuzz::Gen g(seed);
    Outcome o;
    for (std::size_t i = 0; i < n; ++i, ++o.runs) {
        Predicate p = pred(g);
        Clause r = fuzz::clause(g, p);
        Filter plain;
        plain.set(p, {}, {}, {});
        if (!is_dnlog(candidate_filter(r, {}), r) || !is_dnlog(plain, r)) o.fail(to_string(r));
        else ++o.exercised;
    }
    return o;
}

/// decide(∃x φ) and eliminate_exists agree with the boundary-point oracle on
/// formulas with one bound variable and up to three free ones, evaluated at a
/// random point for the free variables.
inline Outcome qe_oracle(std::size_t n, std::uint64_t seed) {
    fuzz::Gen g(seed);
    Outcome o;
    const Var x = fuzz::v("X");
    for (std::size_t i = 0; i < n; ++i, ++o.runs) {
        std::size_t nfree = static_cast<std::size_t>(g.range(0, 3));
        std::vector<Var> vars{x};
        for (std::size_t k = 1; k <= nfree; ++k) vars.push_back(fuzz::v("Y" + std::to_string(k)));
        fuzz::Shape s = fuzz::shape(g, vars.size(), 2);

        Formula open = eliminate_exists(VarSet{x}, fuzz::build(s, vars));
        // small integers make bounds coincide often, which is where
        // strictness matters
        for (int probe = 0; probe < 9; ++probe) {
            Valuation point;
            std::vector<Rational> values(vars.size(), Rational(0));
            for (std::size_t k = 1; k < vars.size(); ++k) {
                values[k] = probe == 0 ? g.value() : Rational(g.range(-1, 1));
                point[vars[k]] = values[k];
            }
            bool expected = fuzz::exists_by_boundary_points(s, 0, values);
            if (probe == 0 && expected) ++o.exercised;

            bool closed = decide(Formula::exists(std::vector<Var>{x}, fuzz::build(s, vars, point)));
            bool at_point = eval(open, point);
            if (closed != expected || at_point != expected) {
                std::ostringstream os;
                os << "oracle=" << expected << " decide=" << closed << " eliminate=" << at_point << " for "
                   << to_string(fuzz::build(s, vars));
                for (const auto& [var, val] : point) os << " " << to_string(var) << "=" << to_string(val);
                o.fail(os.str());
                break;
            }
        }
    }
    return o;
}

} // namespace props
