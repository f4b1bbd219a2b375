#pragma once

#include "clploop/syntax.hpp"

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace clploop {

/// Immutable first-order formula over linear rational constraints. Nodes are
/// shared, so copying a Formula is cheap.
class Formula {
public:
    enum class Kind { True, False, Atom, Not, And, Or, Implies, Exists, Forall };

    Formula() : Formula(top()) {}

    static Formula top() { return Formula(make(Kind::True)); }
    static Formula bottom() { return Formula(make(Kind::False)); }

    static Formula atom(AtomicProp a) {
        auto n = make(Kind::Atom);
        n->atom = std::move(a);
        return Formula(std::move(n));
    }

    static Formula negate(Formula f) {
        auto n = make(Kind::Not);
        n->kids.push_back(std::move(f));
        return Formula(std::move(n));
    }

    /// Flattens nested conjunctions; drops `true`; collapses on `false`.
    static Formula conj(std::vector<Formula> fs) {
        std::vector<Formula> kids;
        for (auto& f : fs) {
            if (f.kind() == Kind::True) continue;
            if (f.kind() == Kind::False) return bottom();
            if (f.kind() == Kind::And) {
                for (const auto& k : f.kids()) kids.push_back(k);
            } else {
                kids.push_back(std::move(f));
            }
        }
        if (kids.empty()) return top();
        if (kids.size() == 1) return kids.front();
        auto n = make(Kind::And);
        n->kids = std::move(kids);
        return Formula(std::move(n));
    }

    static Formula disj(std::vector<Formula> fs) {
        std::vector<Formula> kids;
        for (auto& f : fs) {
            if (f.kind() == Kind::False) continue;
            if (f.kind() == Kind::True) return top();
            if (f.kind() == Kind::Or) {
                for (const auto& k : f.kids()) kids.push_back(k);
            } else {
                kids.push_back(std::move(f));
            }
        }
        if (kids.empty()) return bottom();
        if (kids.size() == 1) return kids.front();
        auto n = make(Kind::Or);
        n->kids = std::move(kids);
        return Formula(std::move(n));
    }

    static Formula implies(Formula a, Formula b) {
        auto n = make(Kind::Implies);
        n->kids = {std::move(a), std::move(b)};
        return Formula(std::move(n));
    }

    static Formula iff(const Formula& a, const Formula& b) {
        return conj({implies(a, b), implies(b, a)});
    }

    static Formula exists(std::vector<Var> vars, Formula body) {
        return quantify(Kind::Exists, std::move(vars), std::move(body));
    }
    static Formula exists(const VarSet& vars, Formula body) {
        return exists(std::vector<Var>(vars.begin(), vars.end()), std::move(body));
    }

    static Formula forall(std::vector<Var> vars, Formula body) {
        return quantify(Kind::Forall, std::move(vars), std::move(body));
    }
    static Formula forall(const VarSet& vars, Formula body) {
        return forall(std::vector<Var>(vars.begin(), vars.end()), std::move(body));
    }

    static Formula from(const Constraint& c) {
        std::vector<Formula> fs;
        fs.reserve(c.size());
        for (const auto& a : c) fs.push_back(atom(a));
        return conj(std::move(fs));
    }

    Kind kind() const { return node_->kind; }
    const AtomicProp& atom() const { return node_->atom; }
    const std::vector<Formula>& kids() const { return node_->kids; }
    const std::vector<Var>& bound() const { return node_->vars; }

    bool is_quantifier_free() const {
        if (kind() == Kind::Exists || kind() == Kind::Forall) return false;
        for (const auto& k : kids())
            if (!k.is_quantifier_free()) return false;
        return true;
    }

    /// Conjunction of atoms (or `true`) as a Constraint, if it has that shape.
    std::optional<Constraint> as_constraint() const {
        switch (kind()) {
        case Kind::True: return Constraint{};
        case Kind::Atom: return Constraint{atom()};
        case Kind::And: {
            Constraint out;
            for (const auto& k : kids()) {
                if (k.kind() != Kind::Atom) return std::nullopt;
                out.push_back(k.atom());
            }
            return out;
        }
        default: return std::nullopt;
        }
    }

private:
    struct Node {
        Kind kind;
        AtomicProp atom{LinTerm{}, Rel::Eq};
        std::vector<Formula> kids;
        std::vector<Var> vars;
    };

    explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    static std::shared_ptr<Node> make(Kind k) {
        auto n = std::make_shared<Node>();
        n->kind = k;
        return n;
    }

    static Formula quantify(Kind k, std::vector<Var> vars, Formula body) {
        if (vars.empty()) return body;
        auto n = make(k);
        n->vars = std::move(vars);
        n->kids.push_back(std::move(body));
        return Formula(std::move(n));
    }

    std::shared_ptr<const Node> node_;
};

inline void add_free_vars(const Formula& f, VarSet& out) {
    using K = Formula::Kind;
    switch (f.kind()) {
    case K::True:
    case K::False: return;
    case K::Atom: f.atom().term().add_vars(out); return;
    case K::Exists:
    case K::Forall: {
        VarSet inner;
        add_free_vars(f.kids().front(), inner);
        for (const auto& v : f.bound()) inner.erase(v);
        out.insert(inner.begin(), inner.end());
        return;
    }
    default:
        for (const auto& k : f.kids()) add_free_vars(k, out);
    }
}

inline VarSet free_vars(const Formula& f) {
    VarSet out;
    add_free_vars(f, out);
    return out;
}

/// Truth of a quantifier-free formula under `v`. Throws std::out_of_range on
/// an unbound variable and std::invalid_argument on a quantifier.
inline bool eval(const Formula& f, const Valuation& v) {
    using K = Formula::Kind;
    switch (f.kind()) {
    case K::True: return true;
    case K::False: return false;
    case K::Atom: return f.atom().eval(v);
    case K::Not: return !eval(f.kids()[0], v);
    case K::And:
        for (const auto& k : f.kids())
            if (!eval(k, v)) return false;
        return true;
    case K::Or:
        for (const auto& k : f.kids())
            if (eval(k, v)) return true;
        return false;
    case K::Implies: return !eval(f.kids()[0], v) || eval(f.kids()[1], v);
    case K::Exists:
    case K::Forall: throw std::invalid_argument("eval: quantified formula");
    }
    return false;
}

inline std::string to_string(const Formula& f) {
    using K = Formula::Kind;
    auto join = [&](const char* sep) {
        std::string out = "(";
        for (std::size_t i = 0; i < f.kids().size(); ++i) {
            if (i) out += sep;
            out += to_string(f.kids()[i]);
        }
        return out + ")";
    };
    auto binder = [&](const char* q) {
        std::string out = q;
        for (std::size_t i = 0; i < f.bound().size(); ++i) {
            out += (i ? "," : " ") + to_string(f.bound()[i]);
        }
        return out + ". " + to_string(f.kids()[0]);
    };
    switch (f.kind()) {
    case K::True: return "true";
    case K::False: return "false";
    case K::Atom: return to_string(f.atom());
    case K::Not: return "~" + to_string(f.kids()[0]);
    case K::And: return join(" /\\ ");
    case K::Or: return join(" \\/ ");
    case K::Implies: return "(" + to_string(f.kids()[0]) + " -> " + to_string(f.kids()[1]) + ")";
    case K::Exists: return "(" + binder("exists") + ")";
    case K::Forall: return "(" + binder("forall") + ")";
    }
    return "?";
}

/// Renames variables in a formula, bound ones included.
template <class F>
Formula map_vars(const Formula& f, F&& fn) {
    using K = Formula::Kind;
    auto kids = [&] {
        std::vector<Formula> out;
        for (const auto& k : f.kids()) out.push_back(map_vars(k, fn));
        return out;
    };
    switch (f.kind()) {
    case K::True:
    case K::False: return f;
    case K::Atom: return Formula::atom(f.atom().map_vars(fn));
    case K::Not: return Formula::negate(map_vars(f.kids()[0], fn));
    case K::And: return Formula::conj(kids());
    case K::Or: return Formula::disj(kids());
    case K::Implies: return Formula::implies(map_vars(f.kids()[0], fn), map_vars(f.kids()[1], fn));
    case K::Exists:
    case K::Forall: {
        std::vector<Var> bound;
        for (const auto& v : f.bound()) bound.push_back(fn(v));
        auto body = map_vars(f.kids()[0], fn);
        return f.kind() == K::Exists ? Formula::exists(std::move(bound), std::move(body))
                                     : Formula::forall(std::move(bound), std::move(body));
    }
    }
    return f;
}

} // namespace clploop
