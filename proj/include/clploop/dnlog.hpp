#pragma once

// Logical derivation neutrality of a filter Δ = (τ, δ) for a clause
// r = p(X̃) ← c ◇ q(Ỹ). Both conditions must be valid:
//
//   DNlog1:  c → ∀X̃|τ(p) [ sat(X̃|τ(p), δ(p)) → ∃𝒴 c ]
//   DNlog2:  c → sat(Ỹ|τ(q), δ(q))
//
// with 𝒴 = Ỹ|τ(q) ∪ local_vars(r). A filter passing both is derivation
// neutral for r.

#include "clploop/filters.hpp"
#include "clploop/linarith.hpp"

namespace clploop {

/// 𝒴 = Ỹ|τ(q) ∪ local_vars(r)
inline VarSet neutral_body_vars(const Filter& delta, const Clause& r) {
    VarSet out = r.local_vars();
    for (const auto& v : select(r.body_vars, delta.positions().of(r.body_pred))) out.insert(v);
    return out;
}

inline Formula dnlog1_formula(const Filter& delta, const Clause& r, Generations& gens) {
    std::vector<Var> xs = select(r.head_vars, delta.positions().of(r.head_pred));
    Formula c = Formula::from(r.constraint);
    Formula inner = Formula::implies(sat_formula(var_terms(xs), delta.condition(r.head_pred), gens.next()),
                                     Formula::exists(neutral_body_vars(delta, r), c));
    return Formula::implies(c, Formula::forall(xs, inner));
}

inline Formula dnlog2_formula(const Filter& delta, const Clause& r, Generations& gens) {
    std::vector<Var> ys = select(r.body_vars, delta.positions().of(r.body_pred));
    return Formula::implies(Formula::from(r.constraint),
                            sat_formula(var_terms(ys), delta.condition(r.body_pred), gens.next()));
}

inline Formula dnlog1_formula(const Filter& delta, const Clause& r) {
    auto gens = Generations::after(r.vars());
    return dnlog1_formula(delta, r, gens);
}

inline Formula dnlog2_formula(const Filter& delta, const Clause& r) {
    auto gens = Generations::after(r.vars());
    return dnlog2_formula(delta, r, gens);
}

/// The single merged condition
///   c → ∀X̃|τ(p) [ sat(X̃|τ(p), δ(p)) → ∃𝒴 (c ∧ sat(Ỹ|τ(q), δ(q))) ]
/// Weaker than DNlog1 ∧ DNlog2 and not sufficient for derivation neutrality.
inline Formula dnlog12_formula(const Filter& delta, const Clause& r) {
    auto gens = Generations::after(r.vars());
    std::vector<Var> xs = select(r.head_vars, delta.positions().of(r.head_pred));
    std::vector<Var> ys = select(r.body_vars, delta.positions().of(r.body_pred));
    Formula c = Formula::from(r.constraint);
    Formula body_ok = sat_formula(var_terms(ys), delta.condition(r.body_pred), gens.next());
    Formula inner = Formula::implies(sat_formula(var_terms(xs), delta.condition(r.head_pred), gens.next()),
                                     Formula::exists(neutral_body_vars(delta, r), Formula::conj({c, body_ok})));
    return Formula::implies(c, Formula::forall(xs, inner));
}

/// Which of the two conditions hold.
struct DnlogVerdict {
    bool first = false;
    bool second = false;

    bool holds() const { return first && second; }
};

inline DnlogVerdict check_dnlog(const Filter& delta, const Clause& r, const Limits& lim = {}) {
    auto gens = Generations::after(r.vars());
    DnlogVerdict v;
    v.first = decide(dnlog1_formula(delta, r, gens), lim);
    v.second = decide(dnlog2_formula(delta, r, gens), lim);
    return v;
}

inline bool is_dnlog(const Filter& delta, const Clause& r, const Limits& lim = {}) {
    return check_dnlog(delta, r, lim).holds();
}

} // namespace clploop
