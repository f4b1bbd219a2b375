#pragma once

#include "clploop/formula.hpp"
#include "clploop/parser.hpp"

#include <string>

namespace th {

using namespace clploop;

inline Var v(const std::string& name, std::uint32_t gen = 0) { return Var{name, gen}; }

inline Program prog(const std::string& text) { return parse_program(text); }

inline Clause clause(const std::string& text) { return parse_program(text).clauses.at(0); }

inline Query qry(const std::string& text, const Program& p = {}) { return parse_query(text, p); }

/// Constraint from source text, via a throwaway query.
inline Constraint cons(const std::string& text) { return parse_query("c : " + text + ".").constraint; }

inline Formula f(const std::string& text) { return Formula::from(cons(text)); }

} // namespace th
