#pragma once

// Concrete syntax:
//
//   program  := clause*
//   clause   := atom "<-" constrs "<>" atom "."
//   constrs  := "true" | constr ("," constr)*
//   constr   := linexpr rel linexpr
//   rel      := "=" | "<=" | "<" | ">=" | ">"
//   linexpr  := term (("+"|"-") term)*
//   term     := factor (("*"|"/") factor)*      -- linear products only
//   factor   := rational | var | "-" factor | "(" linexpr ")"
//   atom     := pred | pred "(" linexpr ("," linexpr)* ")"
//   query    := atom ":" constrs "."
//
// Whitespace is insignificant and `#` starts a line comment.

#include "clploop/program.hpp"
#include "clploop/syntax.hpp"

#include <cctype>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

namespace clploop {

class SourceError : public std::runtime_error {
public:
    enum class Kind { Syntax, Arity, Nonlinear, Unsatisfiable };

    SourceError(Kind kind, std::size_t line, std::size_t column, const std::string& msg)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
          kind_(kind), line_(line), column_(column) {}

    Kind kind() const { return kind_; }
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    Kind kind_;
    std::size_t line_;
    std::size_t column_;
};

namespace detail {

class Parser {
public:
    explicit Parser(std::string_view text, std::map<std::string, std::size_t> arities = {})
        : text_(text), arities_(std::move(arities)) {}

    Program program() {
        Program p;
        skip();
        while (!at_end()) {
            p.clauses.push_back(clause());
            skip();
        }
        return p;
    }

    Query query() {
        skip();
        Atom a = atom();
        expect(":");
        Constraint d = constraints();
        expect(".");
        skip();
        if (!at_end()) fail("trailing input after query");
        return Query{std::move(a), std::move(d)};
    }

private:
    struct Pos {
        std::size_t line, column;
    };

    Clause clause() {
        skip();
        std::size_t begin = pos_;
        Pos where = here();
        Atom head = atom();
        expect("<-");
        Constraint c = constraints();
        expect("<>");
        Atom body = atom();
        expect(".");
        std::string source(text_.substr(begin, pos_ - begin));
        try {
            return normalize_clause(head, c, body, collapse_ws(source));
        } catch (const UnsatisfiableClause& e) {
            throw SourceError(SourceError::Kind::Unsatisfiable, where.line, where.column,
                              std::string(e.what()) + " in clause `" + collapse_ws(source) + "`");
        }
    }

    Constraint constraints() {
        skip();
        if (peek_word() == "true") {
            pos_ += 4;
            return {};
        }
        Constraint out;
        out.push_back(constr());
        while (accept(",")) out.push_back(constr());
        return out;
    }

    AtomicProp constr() {
        LinTerm lhs = linexpr();
        skip();
        RelOp op;
        if (accept("<=")) op = RelOp::Le;
        else if (accept(">=")) op = RelOp::Ge;
        else if (lookahead("<-") || lookahead("<>")) fail("expected relation");
        else if (accept("<")) op = RelOp::Lt;
        else if (accept(">")) op = RelOp::Gt;
        else if (accept("=")) op = RelOp::Eq;
        else fail("expected relation");
        LinTerm rhs = linexpr();
        return AtomicProp(std::move(lhs), op, rhs);
    }

    LinTerm linexpr() {
        LinTerm t = term();
        for (;;) {
            skip();
            if (accept("+")) t += term();
            else if (accept("-")) t -= term();
            else return t;
        }
    }

    LinTerm term() {
        LinTerm t = factor();
        for (;;) {
            skip();
            Pos where = here();
            if (accept("*")) {
                LinTerm f = factor();
                if (t.is_constant()) t = f * t.constant();
                else if (f.is_constant()) t *= f.constant();
                else fail_at(where, SourceError::Kind::Nonlinear, "nonlinear term: product of variables");
            } else if (lookahead("/") ) {
                ++pos_;
                LinTerm f = factor();
                if (!f.is_constant()) fail_at(where, SourceError::Kind::Nonlinear, "nonlinear term: division by a variable");
                if (f.constant() == 0) fail_at(where, SourceError::Kind::Syntax, "division by zero");
                t *= Rational(1) / f.constant();
            } else {
                return t;
            }
        }
    }

    LinTerm factor() {
        skip();
        if (accept("-")) return -factor();
        if (accept("(")) {
            LinTerm t = linexpr();
            expect(")");
            return t;
        }
        if (at_end()) fail("unexpected end of input");
        char ch = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            std::size_t b = pos_;
            while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            return LinTerm(rational_from_digits(text_.substr(b, pos_ - b)));
        }
        if (std::isupper(static_cast<unsigned char>(ch))) return LinTerm(Var{identifier(), 0});
        fail("expected a number, a variable or `(`");
    }

    Atom atom() {
        skip();
        Pos where = here();
        if (at_end() || !std::islower(static_cast<unsigned char>(text_[pos_])))
            fail("expected a predicate name");
        std::string name = identifier();
        std::vector<LinTerm> args;
        skip();
        if (accept("(")) {
            args.push_back(linexpr());
            while (accept(",")) args.push_back(linexpr());
            expect(")");
        }
        auto [it, fresh] = arities_.try_emplace(name, args.size());
        if (!fresh && it->second != args.size()) {
            fail_at(where, SourceError::Kind::Arity,
                    "arity mismatch for `" + name + "`: used with " + std::to_string(it->second) +
                        " and " + std::to_string(args.size()) + " arguments");
        }
        Predicate pred{name, args.size()};
        return Atom(std::move(pred), std::move(args));
    }

    std::string identifier() {
        std::size_t b = pos_;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        return std::string(text_.substr(b, pos_ - b));
    }

    std::string_view peek_word() const {
        std::size_t e = pos_;
        while (e < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[e])) || text_[e] == '_')) ++e;
        return text_.substr(pos_, e - pos_);
    }

    void skip() {
        while (!at_end()) {
            char ch = text_[pos_];
            if (ch == '#') {
                while (!at_end() && text_[pos_] != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(ch))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    bool lookahead(std::string_view tok) {
        skip();
        return text_.substr(pos_, tok.size()) == tok;
    }

    bool accept(std::string_view tok) {
        if (!lookahead(tok)) return false;
        pos_ += tok.size();
        return true;
    }

    void expect(std::string_view tok) {
        if (!accept(tok)) fail("expected `" + std::string(tok) + "`");
    }

    bool at_end() const { return pos_ >= text_.size(); }

    Pos here() const {
        Pos p{1, 1};
        for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++p.line;
                p.column = 1;
            } else {
                ++p.column;
            }
        }
        return p;
    }

    [[noreturn]] void fail(const std::string& msg) { fail_at(here(), SourceError::Kind::Syntax, msg); }

    [[noreturn]] void fail_at(Pos p, SourceError::Kind kind, const std::string& msg) {
        throw SourceError(kind, p.line, p.column, msg);
    }

    static std::string collapse_ws(const std::string& s) {
        std::string out;
        bool space = false;
        bool comment = false;
        for (char ch : s) {
            if (comment) {
                if (ch == '\n') comment = false;
                else continue;
            }
            if (ch == '#') {
                comment = true;
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(ch))) {
                space = !out.empty();
                continue;
            }
            if (space) out += ' ';
            space = false;
            out += ch;
        }
        return out;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::map<std::string, std::size_t> arities_;
};

} // namespace detail

/// Parses and normalizes a whole program. Throws SourceError.
inline Program parse_program(std::string_view text) { return detail::Parser(text).program(); }

/// Parses `atom : constrs .`; predicate arities must agree with `program`.
inline Query parse_query(std::string_view text, const Program& program = {}) {
    return detail::Parser(text, program.arities()).query();
}

} // namespace clploop
