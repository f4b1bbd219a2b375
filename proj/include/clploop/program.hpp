#pragma once

#include "clploop/linarith.hpp"
#include "clploop/syntax.hpp"

#include <set>
#include <stdexcept>
#include <string>

namespace clploop {

/// A clause whose constraint has no solution; such a clause does not exist.
class UnsatisfiableClause : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string fresh_name(const std::string& base, std::set<std::string>& taken) {
    std::string name = base;
    while (taken.count(name)) name += "_";
    taken.insert(name);
    return name;
}

} // namespace detail

/// Flattens p(s̃) ← c ◇ q(t̃) into p(X̃) ← c' ◇ q(Ỹ) with X̃, Ỹ disjoint
/// sequences of distinct variables. A variable argument occurring exactly once
/// among all head and body arguments is kept; every other argument at head
/// position i (body position i) becomes a fresh Xi (Yi) with `Xi = t` added.
inline Clause normalize_clause(const Atom& head, const Constraint& c, const Atom& body,
                               std::string source = {}) {
    std::map<Var, int> occurrences;
    std::set<std::string> taken;
    auto count = [&](const Atom& a) {
        for (const auto& t : a.args) {
            if (auto v = t.as_var()) ++occurrences[*v];
        }
        VarSet vs;
        a.add_vars(vs);
        for (const auto& v : vs) taken.insert(v.name);
    };
    count(head);
    count(body);
    for (const auto& v : vars_of(c)) taken.insert(v.name);

    Clause r;
    r.head_pred = head.pred;
    r.body_pred = body.pred;
    r.source = std::move(source);
    Constraint extra;
    auto flatten = [&](const Atom& a, const char* prefix, std::vector<Var>& out) {
        for (std::size_t i = 0; i < a.args.size(); ++i) {
            const LinTerm& t = a.args[i];
            auto v = t.as_var();
            if (v && occurrences[*v] == 1) {
                out.push_back(*v);
                continue;
            }
            Var x{detail::fresh_name(prefix + std::to_string(i + 1), taken), 0};
            out.push_back(x);
            extra.emplace_back(LinTerm(x), RelOp::Eq, t);
        }
    };
    flatten(head, "X", r.head_vars);
    flatten(body, "Y", r.body_vars);

    r.constraint = extra;
    r.constraint.insert(r.constraint.end(), c.begin(), c.end());
    if (!satisfiable(r.constraint))
        throw UnsatisfiableClause("unsatisfiable clause constraint: " + to_string(r.constraint));
    return r;
}

} // namespace clploop
