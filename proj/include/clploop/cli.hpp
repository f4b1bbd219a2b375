#pragma once

// Command implementations behind the `clploop` executable, kept here so tests
// can drive them without spawning processes.

#include "clploop/analyzer.hpp"
#include "clploop/parser.hpp"
#include "clploop/report.hpp"

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

namespace clploop::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kInvalidInput = 2, kResourceLimit = 3 };

struct Flags {
    bool json = false;
    bool first_only = false;
    std::size_t verify_steps = 100;
    bool trace = false;
    bool explain = false;
    std::size_t max_dnf = 1'000'000;
    bool no_propagate = false;
    std::size_t run_steps = 0; // check --run K

    AnalyzerOptions analyzer_options() const {
        AnalyzerOptions o;
        o.first_only = first_only;
        o.verify_steps = verify_steps;
        o.propagate = !no_propagate;
        o.limits.max_dnf = max_dnf;
        return o;
    }
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace detail {

inline void explain(std::ostream& os, const Program& p, const ProgramReport& rep) {
    for (const auto& cr : rep.clauses) {
        os << "clause " << (cr.clause_index + 1) << ": " << to_string(p.clauses[cr.clause_index]) << "\n";
        for (const auto& at : cr.attempts) {
            os << "  m=" << to_string(at.positions) << "  DNlog1=" << (at.dnlog.first ? "holds" : "fails")
               << "  DNlog2=" << (at.dnlog.second ? "holds" : "fails");
            if (at.dnlog.holds()) os << "  delta-more-general=" << (at.delta_more_general ? "yes" : "no");
            if (!at.error.empty()) os << "  error: " << at.error;
            os << "\n";
        }
    }
}

inline void traces(std::ostream& os, const Program& p, const ProgramReport& rep, std::size_t steps) {
    if (steps == 0) return;
    RunOptions ro;
    ro.project_store = true;
    ro.trace = true;
    for (const auto& cr : rep.clauses) {
        for (const auto& fr : cr.passing) {
            os << "trace of " << to_string(fr.witness) << " (clause " << (cr.clause_index + 1) << "):\n";
            print_trace(os, run(fr.witness, Program{{p.clauses[cr.clause_index]}}, steps, ro));
        }
    }
}

} // namespace detail

inline int analyze_text(const std::string& text, const Flags& flags, std::ostream& out, std::ostream& err) {
    Program p;
    try {
        p = parse_program(text);
    } catch (const SourceError& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidInput;
    }
    ProgramReport rep;
    try {
        rep = analyze_program(p, flags.analyzer_options());
    } catch (const ResourceLimit& e) {
        err << "error: " << e.what() << "\n";
        return kResourceLimit;
    }
    Report report = make_report(p, rep);
    out << (flags.json ? to_json_text(report) : to_text(report));
    if (flags.explain) detail::explain(err, p, rep);
    if (flags.trace) detail::traces(err, p, rep, flags.verify_steps);
    if (rep.resource_limited()) {
        err << "error: resource limit reached (--max-dnf " << flags.max_dnf << ")\n";
        return kResourceLimit;
    }
    return kOk;
}

inline int cmd_analyze(const std::string& path, const Flags& flags, std::ostream& out, std::ostream& err) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidInput;
    }
    return analyze_text(text, flags, out, err);
}

inline int check_text(const std::string& text, const std::string& query_text, const Flags& flags, std::ostream& out,
                      std::ostream& err) {
    Program p;
    Query q;
    try {
        p = parse_program(text);
        q = parse_query(query_text, p);
    } catch (const SourceError& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidInput;
    }
    if (!p.arities().count(q.rel().name)) {
        err << "error: unknown predicate `" << q.rel().name << "`\n";
        return kInvalidInput;
    }
    ProgramReport rep;
    CheckResult res;
    try {
        rep = analyze_program(p, flags.analyzer_options());
        res = check_query(q, p, rep, flags.analyzer_options().limits);
    } catch (const ResourceLimit& e) {
        err << "error: " << e.what() << "\n";
        return kResourceLimit;
    }
    out << (res.verdict == Verdict::Loops ? "LOOPS (proved)" : "UNKNOWN");
    if (!res.reason.empty()) out << ": " << res.reason;
    out << "\n";
    if (flags.run_steps > 0) {
        RunOptions ro;
        ro.project_store = true;
        ro.trace = flags.trace;
        DerivationState st = run(q, p, flags.run_steps, ro);
        out << "engine: " << st.steps << " of " << flags.run_steps << " steps\n";
        if (flags.trace) print_trace(out, st);
    }
    return rep.resource_limited() ? kResourceLimit : kOk;
}

inline int cmd_check(const std::string& path, const std::string& query_text, const Flags& flags, std::ostream& out,
                     std::ostream& err) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidInput;
    }
    return check_text(text, query_text, flags, out, err);
}

} // namespace clploop::cli
