#pragma once

// Operational semantics of binary clauses: single derivation steps and
// bounded derivations. This is the runtime oracle every reported looping
// query has to pass.

#include "clploop/linarith.hpp"
#include "clploop/syntax.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace clploop {

/// ⟨p(ũ) | d⟩ ⟹r ⟨q(t̃) | s̃ = ũ ∧ c′ ∧ d⟩ where p(s̃) ← c′ ◇ q(t̃) is r renamed
/// into generation `gen`; nullopt when the new store is unsatisfiable.
inline std::optional<Query> derivation_step(const Query& q, const Clause& r, std::uint32_t gen) {
    if (q.rel() != r.head_pred)
        throw std::invalid_argument("derivation_step: " + to_string(q.rel()) + " does not match clause head " +
                                    to_string(r.head_pred));
    Clause fresh = rename_apart(r, gen);
    Constraint store;
    store.reserve(fresh.head_vars.size() + fresh.constraint.size() + q.constraint.size());
    for (std::size_t i = 0; i < fresh.head_vars.size(); ++i)
        store.emplace_back(LinTerm(fresh.head_vars[i]), RelOp::Eq, q.atom.args[i]);
    store.insert(store.end(), fresh.constraint.begin(), fresh.constraint.end());
    store.insert(store.end(), q.constraint.begin(), q.constraint.end());
    if (!satisfiable(store)) return std::nullopt;
    return Query{fresh.body_atom(), std::move(store)};
}

struct RunOptions {
    /// Project the store onto the current atom's variables after each step.
    bool project_store = false;
    bool trace = false;
};

struct TraceEntry {
    std::size_t clause_index;
    Query query;
};

struct DerivationState {
    Query current;
    std::uint32_t generation = 1; // next renaming index
    std::size_t steps = 0;
    std::vector<TraceEntry> trace;
};

/// Applies the first applicable clause in program order until no clause
/// applies or `max_steps` steps were taken.
inline DerivationState run(const Query& q, const Program& p, std::size_t max_steps, const RunOptions& opts = {}) {
    if (max_steps < 1) throw std::invalid_argument("run: max_steps must be positive");
    DerivationState st{q, Generations::after(q.vars()).peek(), 0, {}};
    VarSet clause_vars;
    for (const auto& r : p.clauses) {
        VarSet vs = r.vars();
        clause_vars.insert(vs.begin(), vs.end());
    }
    st.generation = std::max(st.generation, max_index(clause_vars) + 1);

    while (st.steps < max_steps) {
        std::optional<Query> next;
        std::size_t used = 0;
        for (std::size_t i = 0; i < p.clauses.size() && !next; ++i) {
            if (p.clauses[i].head_pred != st.current.rel()) continue;
            next = derivation_step(st.current, p.clauses[i], st.generation);
            used = i;
        }
        if (!next) break;
        if (max_index(next->vars()) > st.generation)
            throw std::logic_error("run: renaming generation collision");
        ++st.generation;
        ++st.steps;
        if (opts.project_store) {
            VarSet keep;
            next->atom.add_vars(keep);
            next->constraint = project(next->constraint, keep);
        }
        if (opts.trace) st.trace.push_back(TraceEntry{used, *next});
        st.current = std::move(*next);
    }
    return st;
}

/// `step k: clause i ⊢ <atom | store>`, clause indices 1-based.
inline void print_trace(std::ostream& os, const DerivationState& st) {
    for (std::size_t k = 0; k < st.trace.size(); ++k) {
        os << "step " << (k + 1) << ": clause " << (st.trace[k].clause_index + 1) << " ⊢ "
           << to_string(st.trace[k].query) << "\n";
    }
}

} // namespace clploop
