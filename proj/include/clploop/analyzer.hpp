#pragma once

// Looping-query search for binary clauses. For each recursive clause
// r = p(X̃) ← c ◇ p(Ỹ) and each m ⊆ [1, arity(p)]:
//
//   τ(p) := m,  δ(p) := ⟨p|τ(X̃|m) | ∃̄_{X̃|m} c⟩
//   if Δ is DNlog for r and ⟨p(Ỹ)|c⟩ is Δ-more general than ⟨p(X̃)|c⟩
//   then ⟨p(X̃)|c⟩ loops w.r.t. {r}, and so does every Δ-more general query.
//
// Loops are then propagated through non-recursive clauses: if ⟨B|c⟩ is more
// general than a looping query, ⟨H|c⟩ loops as well.

#include "clploop/dnlog.hpp"
#include "clploop/engine.hpp"
#include "clploop/filters.hpp"
#include "clploop/linarith.hpp"

#include <algorithm>
#include <future>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace clploop {

struct AnalyzerOptions {
    bool first_only = false;
    /// Minimum number of engine steps every witness must survive; 0 disables.
    std::size_t verify_steps = 100;
    bool propagate = true;
    bool parallel = true;
    Limits limits;
};

struct FilterResult {
    Positions positions;
    Query delta; // δ(p)
    Query witness;
    std::size_t verified_steps = 0;
};

/// Outcome of one position subset, kept for diagnostics.
struct SubsetAttempt {
    Positions positions;
    DnlogVerdict dnlog;
    bool delta_more_general = false;
    bool passed = false;
    std::string error;
};

enum class ClauseStatus { Looping, NoneFound, NotRecursive };

inline std::string to_string(ClauseStatus s) {
    switch (s) {
    case ClauseStatus::Looping: return "looping";
    case ClauseStatus::NoneFound: return "none found";
    case ClauseStatus::NotRecursive: return "non-recursive";
    }
    return "?";
}

struct ClauseReport {
    std::size_t clause_index = 0;
    std::vector<FilterResult> passing;
    std::vector<SubsetAttempt> attempts;
    std::set<Positions> classes; // downward closed
    ClauseStatus status = ClauseStatus::NoneFound;
    bool resource_limited = false;
};

struct Propagation {
    std::size_t clause_index;
    Query head_query;
    Query via; // the looping query ⟨B|c⟩ is more general than
};

struct ProgramReport {
    std::vector<ClauseReport> clauses;
    std::vector<Propagation> propagated;
    bool propagation_limited = false;

    bool resource_limited() const {
        return propagation_limited ||
               std::any_of(clauses.begin(), clauses.end(), [](const ClauseReport& c) { return c.resource_limited; });
    }
};

/// Δproj for m: τ(p) = m, δ(p) = ⟨p|m(X̃|m) | ∃̄_{X̃|m} c⟩.
inline Filter candidate_filter(const Clause& r, const Positions& m) {
    std::vector<Var> xs = select(r.head_vars, m);
    Constraint d = project(r.constraint, VarSet(xs.begin(), xs.end()));
    Filter f;
    f.set(r.head_pred, m, var_terms(xs), std::move(d));
    return f;
}

/// Concrete looping query: ground the τ positions with a sample of δ(p) and
/// keep the remaining head variables under ∃̄_{X̃|τ̄} c. Falls back to
/// ⟨p(X̃)|c⟩ when the grounded candidate is not Δ-more general than it.
inline Query make_witness(const Filter& delta, const Clause& r, const Limits& lim = {}) {
    const Query head = r.head_query();
    Positions m = delta.positions().of(r.head_pred);
    Query cond = delta.condition(r.head_pred);
    VarSet cond_vars;
    cond.atom.add_vars(cond_vars);
    auto sample = sample_solution(cond.constraint, cond_vars);
    if (!sample) return head;

    std::vector<LinTerm> args;
    for (std::size_t i = 1; i <= r.head_vars.size(); ++i) {
        if (m.count(i)) {
            std::size_t k = static_cast<std::size_t>(std::distance(m.begin(), m.find(i)));
            args.emplace_back(cond.atom.args[k].eval(*sample));
        } else {
            args.emplace_back(r.head_vars[i - 1]);
        }
    }
    std::vector<Var> rest = select(r.head_vars, complement(m, r.head_vars.size()));
    Query candidate{Atom(r.head_pred, std::move(args)),
                    project(r.constraint, VarSet(rest.begin(), rest.end()))};
    if (delta_more_general(candidate, head, delta, lim)) return candidate;
    return head;
}

/// All subsets of [1, n], by decreasing size and lexicographically within a size.
inline std::vector<Positions> subsets_by_size(std::size_t n) {
    std::vector<Positions> out;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        Positions m;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::size_t{1} << i)) m.insert(i + 1);
        out.push_back(std::move(m));
    }
    std::sort(out.begin(), out.end(), [](const Positions& a, const Positions& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return a < b;
    });
    return out;
}

/// {m′ | m′ ⊆ m for some m in passing}
inline std::set<Positions> class_closure(const std::set<Positions>& passing) {
    std::set<Positions> out;
    for (const auto& m : passing) {
        std::vector<std::size_t> items(m.begin(), m.end());
        for (std::size_t mask = 0; mask < (std::size_t{1} << items.size()); ++mask) {
            Positions sub;
            for (std::size_t i = 0; i < items.size(); ++i)
                if (mask & (std::size_t{1} << i)) sub.insert(items[i]);
            out.insert(std::move(sub));
        }
    }
    return out;
}

inline ClauseReport find_looping_queries(const Clause& r, std::size_t clause_index,
                                         const AnalyzerOptions& opts = {}) {
    ClauseReport rep;
    rep.clause_index = clause_index;
    if (!r.recursive()) {
        rep.status = ClauseStatus::NotRecursive;
        return rep;
    }
    const Query head = r.head_query();
    const Query body = r.body_query();
    const Program self{{r}};

    for (const auto& m : subsets_by_size(r.head_pred.arity)) {
        SubsetAttempt at;
        at.positions = m;
        try {
            Filter delta = candidate_filter(r, m);
            at.dnlog = check_dnlog(delta, r, opts.limits);
            if (at.dnlog.holds()) at.delta_more_general = delta_more_general(body, head, delta, opts.limits);
            if (at.delta_more_general) {
                FilterResult fr{m, delta.condition(r.head_pred), make_witness(delta, r, opts.limits), 0};
                if (opts.verify_steps > 0) {
                    RunOptions ro;
                    ro.project_store = true;
                    fr.verified_steps = run(fr.witness, self, opts.verify_steps, ro).steps;
                }
                if (fr.verified_steps < opts.verify_steps) {
                    at.error = "witness stopped after " + std::to_string(fr.verified_steps) + " steps";
                } else {
                    at.passed = true;
                    rep.passing.push_back(std::move(fr));
                }
            }
        } catch (const ResourceLimit& e) {
            at.error = e.what();
            rep.resource_limited = true;
        }
        bool stop = at.passed && opts.first_only;
        rep.attempts.push_back(std::move(at));
        if (stop) break;
    }

    std::set<Positions> passing;
    for (const auto& fr : rep.passing) passing.insert(fr.positions);
    rep.classes = class_closure(passing);
    rep.status = rep.passing.empty() ? ClauseStatus::NoneFound : ClauseStatus::Looping;
    return rep;
}

/// Fixpoint over the program: a clause H ← c ◇ B whose ⟨B|c⟩ is more general
/// than a known looping query makes ⟨H|c⟩ looping. `base` pairs each looping
/// query with the clause it came from.
inline std::vector<Propagation> propagate(const Program& p, const std::vector<std::pair<Query, std::size_t>>& base,
                                          const Limits& lim = {}) {
    std::vector<Query> known;
    std::set<std::size_t> proven;
    for (const auto& [q, i] : base) {
        known.push_back(q);
        proven.insert(i);
    }
    std::vector<Propagation> out;
    for (std::size_t round = 0; round < p.clauses.size(); ++round) {
        bool changed = false;
        for (std::size_t i = 0; i < p.clauses.size(); ++i) {
            if (proven.count(i)) continue;
            const Clause& r = p.clauses[i];
            Query body = r.body_query();
            for (std::size_t k = 0; k < known.size(); ++k) {
                if (known[k].rel() != r.body_pred) continue;
                if (!more_general(body, known[k], lim)) continue;
                VarSet hv(r.head_vars.begin(), r.head_vars.end());
                Query hq{r.head_atom(), project(r.constraint, hv)};
                out.push_back(Propagation{i, hq, known[k]});
                known.push_back(hq);
                proven.insert(i);
                changed = true;
                break;
            }
        }
        if (!changed) break;
    }
    return out;
}

inline ProgramReport analyze_program(const Program& p, const AnalyzerOptions& opts = {}) {
    ProgramReport rep;
    if (opts.parallel && p.clauses.size() > 1) {
        std::vector<std::future<ClauseReport>> jobs;
        for (std::size_t i = 0; i < p.clauses.size(); ++i)
            jobs.push_back(std::async(std::launch::async, [&, i] { return find_looping_queries(p.clauses[i], i, opts); }));
        for (auto& j : jobs) rep.clauses.push_back(j.get());
    } else {
        for (std::size_t i = 0; i < p.clauses.size(); ++i) rep.clauses.push_back(find_looping_queries(p.clauses[i], i, opts));
    }
    if (opts.propagate) {
        std::vector<std::pair<Query, std::size_t>> base;
        for (const auto& cr : rep.clauses) {
            if (cr.status != ClauseStatus::Looping) continue;
            for (const auto& fr : cr.passing) base.emplace_back(fr.witness, cr.clause_index);
            base.emplace_back(p.clauses[cr.clause_index].head_query(), cr.clause_index);
        }
        try {
            rep.propagated = propagate(p, base, opts.limits);
        } catch (const ResourceLimit&) {
            rep.propagation_limited = true;
        }
    }
    return rep;
}

enum class Verdict { Loops, Unknown };

struct CheckResult {
    Verdict verdict = Verdict::Unknown;
    std::string reason;
};

/// LOOPS when `q` is more general than a proven looping query, or Δ-more
/// general than ⟨p(X̃)|c⟩ for a filter found for a clause r.
inline CheckResult check_query(const Query& q, const Program& p, const ProgramReport& rep, const Limits& lim = {}) {
    auto loops = [](std::string why) { return CheckResult{Verdict::Loops, std::move(why)}; };
    for (const auto& cr : rep.clauses) {
        const Clause& r = p.clauses[cr.clause_index];
        for (const auto& fr : cr.passing) {
            if (more_general(q, fr.witness, lim))
                return loops("more general than looping query " + to_string(fr.witness));
        }
        if (cr.status == ClauseStatus::Looping && more_general(q, r.head_query(), lim))
            return loops("more general than looping query " + to_string(r.head_query()));
    }
    for (const auto& pr : rep.propagated) {
        if (more_general(q, pr.head_query, lim))
            return loops("more general than propagated looping query " + to_string(pr.head_query));
    }
    for (const auto& cr : rep.clauses) {
        const Clause& r = p.clauses[cr.clause_index];
        if (r.head_pred != q.rel()) continue;
        for (const auto& fr : cr.passing) {
            if (delta_more_general(q, r.head_query(), candidate_filter(r, fr.positions), lim))
                return loops("Δ-more general than " + to_string(r.head_query()) + " for τ = " +
                             to_string(fr.positions));
        }
    }
    return CheckResult{};
}

} // namespace clploop
