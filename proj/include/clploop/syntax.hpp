#pragma once

#include "clploop/rational.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace clploop {

// ---------------------------------------------------------------------------
// Variables and linear terms
// ---------------------------------------------------------------------------

/// A variable is a name plus a renaming generation. User-written variables
/// live in generation 0; every renaming apart moves to a fresh generation.
struct Var {
    std::string name;
    std::uint32_t index = 0;

    friend auto operator<=>(const Var&, const Var&) = default;
    friend bool operator==(const Var&, const Var&) = default;
};

inline std::string to_string(const Var& v) {
    return v.index == 0 ? v.name : v.name + "#" + std::to_string(v.index);
}

using VarSet = std::set<Var>;
using Valuation = std::map<Var, Rational>;

/// Maps a variable of an object being renamed apart to generation `gen`.
/// Injective even when the object already mixes generations, given that
/// generation-0 names never contain '#' (the parser only admits [A-Za-z0-9_]).
inline Var rename_var(const Var& v, std::uint32_t gen) {
    if (v.index == 0) return Var{v.name, gen};
    return Var{v.name + "#" + std::to_string(v.index), gen};
}

/// Sum of rational multiples of variables plus a constant. Zero coefficients
/// are never stored.
class LinTerm {
public:
    LinTerm() = default;
    LinTerm(Rational constant) : constant_(std::move(constant)) {}
    LinTerm(const Var& v) { coeffs_.emplace(v, Rational(1)); }

    static LinTerm var(const Var& v, Rational coeff = 1) {
        LinTerm t;
        if (coeff != 0) t.coeffs_.emplace(v, std::move(coeff));
        return t;
    }

    const std::map<Var, Rational>& coeffs() const { return coeffs_; }
    const Rational& constant() const { return constant_; }

    bool is_constant() const { return coeffs_.empty(); }

    /// True when the term is exactly one variable with coefficient 1.
    std::optional<Var> as_var() const {
        if (coeffs_.size() == 1 && constant_ == 0 && coeffs_.begin()->second == 1)
            return coeffs_.begin()->first;
        return std::nullopt;
    }

    Rational coeff(const Var& v) const {
        auto it = coeffs_.find(v);
        return it == coeffs_.end() ? Rational(0) : it->second;
    }

    bool mentions(const Var& v) const { return coeffs_.count(v) != 0; }

    void add_vars(VarSet& out) const {
        for (const auto& [v, _] : coeffs_) out.insert(v);
    }

    LinTerm& operator+=(const LinTerm& o) {
        for (const auto& [v, c] : o.coeffs_) add_coeff(v, c);
        constant_ += o.constant_;
        return *this;
    }
    LinTerm& operator-=(const LinTerm& o) {
        for (const auto& [v, c] : o.coeffs_) add_coeff(v, -c);
        constant_ -= o.constant_;
        return *this;
    }
    LinTerm& operator*=(const Rational& k) {
        if (k == 0) {
            coeffs_.clear();
            constant_ = 0;
            return *this;
        }
        for (auto& [_, c] : coeffs_) c *= k;
        constant_ *= k;
        return *this;
    }

    friend LinTerm operator+(LinTerm a, const LinTerm& b) { return a += b; }
    friend LinTerm operator-(LinTerm a, const LinTerm& b) { return a -= b; }
    friend LinTerm operator*(LinTerm a, const Rational& k) { return a *= k; }
    friend LinTerm operator*(const Rational& k, LinTerm a) { return a *= k; }
    friend LinTerm operator-(LinTerm a) { return a *= Rational(-1); }

    /// Replaces `v` by `by` everywhere.
    LinTerm substitute(const Var& v, const LinTerm& by) const {
        auto it = coeffs_.find(v);
        if (it == coeffs_.end()) return *this;
        LinTerm out = *this;
        Rational k = it->second;
        out.coeffs_.erase(v);
        out += by * k;
        return out;
    }

    Rational eval(const Valuation& val) const {
        Rational r = constant_;
        for (const auto& [v, c] : coeffs_) {
            auto it = val.find(v);
            if (it == val.end()) throw std::out_of_range("unbound variable " + to_string(v));
            r += c * it->second;
        }
        return r;
    }

    template <class F>
    LinTerm map_vars(F&& f) const {
        LinTerm out(constant_);
        for (const auto& [v, c] : coeffs_) out.add_coeff(f(v), c);
        return out;
    }

    friend bool operator==(const LinTerm& a, const LinTerm& b) {
        return a.constant_ == b.constant_ && a.coeffs_ == b.coeffs_;
    }
    friend bool operator<(const LinTerm& a, const LinTerm& b) {
        if (a.coeffs_ != b.coeffs_) return a.coeffs_ < b.coeffs_;
        return a.constant_ < b.constant_;
    }

private:
    void add_coeff(const Var& v, const Rational& c) {
        if (c == 0) return;
        auto [it, fresh] = coeffs_.emplace(v, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) coeffs_.erase(it);
        }
    }

    std::map<Var, Rational> coeffs_;
    Rational constant_ = 0;
};

// ---------------------------------------------------------------------------
// Atomic propositions
// ---------------------------------------------------------------------------

/// Relations accepted in source text.
enum class RelOp { Eq, Le, Lt, Ge, Gt };

/// Canonical relations: every atomic proposition is stored as `term rel 0`.
enum class Rel { Eq, Le, Lt };

/// `term rel 0`, with ≥/> flipped and the right-hand side moved left. The
/// term is scaled so that its leading coefficient is 1 (equalities) or ±1
/// (inequalities); two equivalent single-atom constraints compare equal.
class AtomicProp {
public:
    AtomicProp(LinTerm lhs, RelOp op, const LinTerm& rhs) {
        switch (op) {
        case RelOp::Eq: init(lhs - rhs, Rel::Eq); break;
        case RelOp::Le: init(lhs - rhs, Rel::Le); break;
        case RelOp::Lt: init(lhs - rhs, Rel::Lt); break;
        case RelOp::Ge: init(rhs - lhs, Rel::Le); break;
        case RelOp::Gt: init(rhs - lhs, Rel::Lt); break;
        }
    }
    AtomicProp(LinTerm term, Rel rel) { init(std::move(term), rel); }

    const LinTerm& term() const { return term_; }
    Rel rel() const { return rel_; }

    /// Only meaningful for variable-free propositions.
    bool constant_truth() const {
        const Rational& k = term_.constant();
        switch (rel_) {
        case Rel::Eq: return k == 0;
        case Rel::Le: return k <= 0;
        case Rel::Lt: return k < 0;
        }
        return false;
    }

    bool eval(const Valuation& v) const {
        Rational k = term_.eval(v);
        switch (rel_) {
        case Rel::Eq: return k == 0;
        case Rel::Le: return k <= 0;
        case Rel::Lt: return k < 0;
        }
        return false;
    }

    template <class F>
    AtomicProp map_vars(F&& f) const {
        return AtomicProp(term_.map_vars(f), rel_);
    }

    AtomicProp substitute(const Var& v, const LinTerm& by) const {
        return AtomicProp(term_.substitute(v, by), rel_);
    }

    friend bool operator==(const AtomicProp& a, const AtomicProp& b) {
        return a.rel_ == b.rel_ && a.term_ == b.term_;
    }
    friend bool operator<(const AtomicProp& a, const AtomicProp& b) {
        if (a.rel_ != b.rel_) return a.rel_ < b.rel_;
        return a.term_ < b.term_;
    }

private:
    void init(LinTerm t, Rel rel) {
        rel_ = rel;
        if (!t.is_constant()) {
            Rational lead = t.coeffs().begin()->second;
            if (rel == Rel::Eq) {
                t *= Rational(1) / lead;
            } else {
                t *= Rational(1) / abs(lead);
            }
        }
        term_ = std::move(t);
    }

    LinTerm term_;
    Rel rel_ = Rel::Eq;
};

/// Finite conjunction of atomic propositions; empty means `true`.
using Constraint = std::vector<AtomicProp>;

inline void add_vars(const Constraint& c, VarSet& out) {
    for (const auto& a : c) a.term().add_vars(out);
}

inline VarSet vars_of(const Constraint& c) {
    VarSet out;
    add_vars(c, out);
    return out;
}

inline bool eval(const Constraint& c, const Valuation& v) {
    return std::all_of(c.begin(), c.end(), [&](const AtomicProp& a) { return a.eval(v); });
}

// ---------------------------------------------------------------------------
// Atoms, queries, clauses, programs
// ---------------------------------------------------------------------------

struct Predicate {
    std::string name;
    std::size_t arity = 0;

    friend auto operator<=>(const Predicate&, const Predicate&) = default;
    friend bool operator==(const Predicate&, const Predicate&) = default;
};

inline std::string to_string(const Predicate& p) {
    return p.name + "/" + std::to_string(p.arity);
}

struct Atom {
    Predicate pred;
    std::vector<LinTerm> args;

    Atom() = default;
    Atom(Predicate p, std::vector<LinTerm> a) : pred(std::move(p)), args(std::move(a)) {
        if (args.size() != pred.arity)
            throw std::invalid_argument("atom arity mismatch for " + to_string(pred));
    }

    void add_vars(VarSet& out) const {
        for (const auto& t : args) t.add_vars(out);
    }

    friend bool operator==(const Atom&, const Atom&) = default;
};

/// ⟨A | d⟩: denotes the ground atoms A·v for every valuation v satisfying d.
struct Query {
    Atom atom;
    Constraint constraint;

    const Predicate& rel() const { return atom.pred; }

    VarSet vars() const {
        VarSet out;
        atom.add_vars(out);
        add_vars(constraint, out);
        return out;
    }

    friend bool operator==(const Query&, const Query&) = default;
};

/// Normalized binary clause p(X̃) ← c ◇ q(Ỹ). X̃ and Ỹ are disjoint sequences
/// of distinct variables and c is satisfiable; build through
/// normalize_clause() to get those guarantees.
struct Clause {
    Predicate head_pred;
    std::vector<Var> head_vars;
    Constraint constraint;
    Predicate body_pred;
    std::vector<Var> body_vars;
    std::string source; // original text, for reports

    bool recursive() const { return head_pred == body_pred; }

    Atom head_atom() const { return make_atom(head_pred, head_vars); }
    Atom body_atom() const { return make_atom(body_pred, body_vars); }

    /// ⟨p(X̃) | c⟩
    Query head_query() const { return Query{head_atom(), constraint}; }
    /// ⟨q(Ỹ) | c⟩
    Query body_query() const { return Query{body_atom(), constraint}; }

    /// Var(c) \ (X̃ ∪ Ỹ)
    VarSet local_vars() const {
        VarSet out = vars_of(constraint);
        for (const auto& v : head_vars) out.erase(v);
        for (const auto& v : body_vars) out.erase(v);
        return out;
    }

    VarSet vars() const {
        VarSet out = vars_of(constraint);
        out.insert(head_vars.begin(), head_vars.end());
        out.insert(body_vars.begin(), body_vars.end());
        return out;
    }

    friend bool operator==(const Clause& a, const Clause& b) {
        return a.head_pred == b.head_pred && a.head_vars == b.head_vars &&
               a.constraint == b.constraint && a.body_pred == b.body_pred &&
               a.body_vars == b.body_vars;
    }

private:
    static Atom make_atom(const Predicate& p, const std::vector<Var>& vs) {
        return Atom(p, std::vector<LinTerm>(vs.begin(), vs.end()));
    }
};

struct Program {
    std::vector<Clause> clauses;

    std::map<std::string, std::size_t> arities() const {
        std::map<std::string, std::size_t> out;
        for (const auto& c : clauses) {
            out[c.head_pred.name] = c.head_pred.arity;
            out[c.body_pred.name] = c.body_pred.arity;
        }
        return out;
    }
};

// ---------------------------------------------------------------------------
// Renaming
// ---------------------------------------------------------------------------

template <class F>
Atom map_vars(const Atom& a, F&& f) {
    std::vector<LinTerm> args;
    args.reserve(a.args.size());
    for (const auto& t : a.args) args.push_back(t.map_vars(f));
    return Atom(a.pred, std::move(args));
}

template <class F>
Constraint map_vars(const Constraint& c, F&& f) {
    Constraint out;
    out.reserve(c.size());
    for (const auto& a : c) out.push_back(a.map_vars(f));
    return out;
}

template <class F>
Query map_vars(const Query& q, F&& f) {
    return Query{map_vars(q.atom, f), map_vars(q.constraint, f)};
}

template <class F>
Clause map_vars(const Clause& r, F&& f) {
    Clause out = r;
    for (auto& v : out.head_vars) v = f(v);
    for (auto& v : out.body_vars) v = f(v);
    out.constraint = map_vars(r.constraint, f);
    return out;
}

/// Returns a variant of `obj` whose variables all live in generation `gen`.
/// The caller guarantees `gen` is unused by everything the result must be
/// kept apart from.
template <class T>
T rename_apart(const T& obj, std::uint32_t gen) {
    return map_vars(obj, [gen](const Var& v) { return rename_var(v, gen); });
}

inline std::uint32_t max_index(const VarSet& vs) {
    std::uint32_t m = 0;
    for (const auto& v : vs) m = std::max(m, v.index);
    return m;
}

/// Caller-owned source of fresh renaming generations.
class Generations {
public:
    explicit Generations(std::uint32_t next = 1) : next_(next) {}

    /// Starts past every generation used by `vars`.
    static Generations after(const VarSet& vars) { return Generations(max_index(vars) + 1); }

    std::uint32_t next() { return next_++; }
    std::uint32_t peek() const { return next_; }

private:
    std::uint32_t next_;
};

// ---------------------------------------------------------------------------
// Printing (source-compatible notation)
// ---------------------------------------------------------------------------

namespace detail {

inline void append_monomial(std::string& out, const Rational& c, const Var& v, bool first) {
    Rational mag = abs(c);
    if (!first) out += c < 0 ? " - " : " + ";
    else if (c < 0) out += "-";
    if (mag != 1) out += to_string(mag) + "*";
    out += to_string(v);
}

/// Prints Σ cᵢvᵢ + k with every cᵢ > 0.
inline std::string print_positive_sum(const std::vector<std::pair<Var, Rational>>& terms,
                                      const Rational& k) {
    std::string out;
    bool first = true;
    for (const auto& [v, c] : terms) {
        append_monomial(out, c, v, first);
        first = false;
    }
    if (first) return to_string(k);
    if (k != 0) out += (k < 0 ? " - " : " + ") + to_string(abs(k));
    return out;
}

} // namespace detail

inline std::string to_string(const LinTerm& t) {
    std::string out;
    bool first = true;
    for (const auto& [v, c] : t.coeffs()) {
        detail::append_monomial(out, c, v, first);
        first = false;
    }
    const Rational& k = t.constant();
    if (first) return to_string(k);
    if (k != 0) out += (k < 0 ? " - " : " + ") + to_string(abs(k));
    return out;
}

/// Prints `P rel N + k` with positive coefficients on both sides, e.g.
/// `A = C + 1` or `A >= 1`, rather than the canonical `... rel 0`.
inline std::string to_string(const AtomicProp& a) {
    std::vector<std::pair<Var, Rational>> pos, neg;
    for (const auto& [v, c] : a.term().coeffs()) {
        if (c > 0) pos.emplace_back(v, c);
        else neg.emplace_back(v, -c);
    }
    const Rational& k = a.term().constant();
    if (pos.empty() && neg.empty()) {
        // variable-free: keep the canonical shape so it still parses
        const char* rel = a.rel() == Rel::Eq ? " = " : a.rel() == Rel::Le ? " <= " : " < ";
        return to_string(k) + rel + "0";
    }
    if (pos.empty()) {
        // k rel N  ==>  N rel' k, flipped
        const char* rel = a.rel() == Rel::Eq ? " = " : a.rel() == Rel::Le ? " >= " : " > ";
        return detail::print_positive_sum(neg, 0) + rel + to_string(k);
    }
    const char* rel = a.rel() == Rel::Eq ? " = " : a.rel() == Rel::Le ? " <= " : " < ";
    return detail::print_positive_sum(pos, 0) + rel + detail::print_positive_sum(neg, -k);
}

inline std::string to_string(const Constraint& c) {
    if (c.empty()) return "true";
    std::string out;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) out += ", ";
        out += to_string(c[i]);
    }
    return out;
}

inline std::string to_string(const Atom& a) {
    std::string out = a.pred.name;
    if (a.args.empty()) return out;
    out += "(";
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (i) out += ", ";
        out += to_string(a.args[i]);
    }
    return out + ")";
}

/// `<p(A, 0) | A >= 1>`
inline std::string to_string(const Query& q) {
    return "<" + to_string(q.atom) + " | " + to_string(q.constraint) + ">";
}

/// Grammar form: `p(A) <- A >= 0, B = 1 <> p(B).`
inline std::string to_string(const Clause& r) {
    return to_string(r.head_atom()) + " <- " + to_string(r.constraint) + " <> " +
           to_string(r.body_atom()) + ".";
}

inline std::string to_string(const Program& p) {
    std::string out;
    for (const auto& r : p.clauses) out += to_string(r) + "\n";
    return out;
}

} // namespace clploop
