#pragma once

#include "clploop/analyzer.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

namespace clploop {

inline constexpr int kReportVersion = 1;

struct ResultRecord {
    std::vector<std::size_t> tau;
    std::string delta;
    std::string witness;
    std::size_t verified_steps = 0;

    friend bool operator==(const ResultRecord&, const ResultRecord&) = default;
};

/// One row group of the report: binary clause, τ, δ, looping query.
struct ReportRecord {
    std::string source;
    std::vector<ResultRecord> results;
    std::vector<std::vector<std::size_t>> classes;
    std::string status;

    friend bool operator==(const ReportRecord&, const ReportRecord&) = default;
};

struct PropagatedRecord {
    std::size_t clause = 0; // 1-based
    std::string head_query;
    std::string via;

    friend bool operator==(const PropagatedRecord&, const PropagatedRecord&) = default;
};

struct Report {
    int version = kReportVersion;
    std::vector<ReportRecord> clauses;
    std::vector<PropagatedRecord> propagated;

    friend bool operator==(const Report&, const Report&) = default;
};

// Key order follows the documented schema, hence ordered_json.
using Json = nlohmann::ordered_json;

inline void to_json(Json& j, const ResultRecord& r) {
    j = Json{{"tau", r.tau}, {"delta", r.delta}, {"witness", r.witness}, {"verified_steps", r.verified_steps}};
}
inline void from_json(const Json& j, ResultRecord& r) {
    j.at("tau").get_to(r.tau);
    j.at("delta").get_to(r.delta);
    j.at("witness").get_to(r.witness);
    j.at("verified_steps").get_to(r.verified_steps);
}

inline void to_json(Json& j, const ReportRecord& r) {
    j = Json{{"source", r.source}, {"results", r.results}, {"classes", r.classes}, {"status", r.status}};
}
inline void from_json(const Json& j, ReportRecord& r) {
    j.at("source").get_to(r.source);
    j.at("results").get_to(r.results);
    j.at("classes").get_to(r.classes);
    j.at("status").get_to(r.status);
}

inline void to_json(Json& j, const PropagatedRecord& r) {
    j = Json{{"clause", r.clause}, {"head_query", r.head_query}, {"via", r.via}};
}
inline void from_json(const Json& j, PropagatedRecord& r) {
    j.at("clause").get_to(r.clause);
    j.at("head_query").get_to(r.head_query);
    j.at("via").get_to(r.via);
}

inline void to_json(Json& j, const Report& r) {
    j = Json{{"version", r.version}, {"clauses", r.clauses}, {"propagated", r.propagated}};
}
inline void from_json(const Json& j, Report& r) {
    j.at("version").get_to(r.version);
    j.at("clauses").get_to(r.clauses);
    j.at("propagated").get_to(r.propagated);
}

inline Report make_report(const Program& p, const ProgramReport& rep) {
    Report out;
    for (const auto& cr : rep.clauses) {
        const Clause& r = p.clauses[cr.clause_index];
        ReportRecord rec;
        rec.source = r.source.empty() ? to_string(r) : r.source;
        rec.status = to_string(cr.status);
        for (const auto& fr : cr.passing) {
            rec.results.push_back(ResultRecord{std::vector<std::size_t>(fr.positions.begin(), fr.positions.end()),
                                               to_string(fr.delta), to_string(fr.witness), fr.verified_steps});
        }
        // largest classes first, like the search order
        std::vector<Positions> cls(cr.classes.begin(), cr.classes.end());
        std::sort(cls.begin(), cls.end(), [](const Positions& a, const Positions& b) {
            return a.size() != b.size() ? a.size() > b.size() : a < b;
        });
        for (const auto& m : cls) rec.classes.emplace_back(m.begin(), m.end());
        out.clauses.push_back(std::move(rec));
    }
    for (const auto& pr : rep.propagated)
        out.propagated.push_back(PropagatedRecord{pr.clause_index + 1, to_string(pr.head_query), to_string(pr.via)});
    return out;
}

inline std::string to_json_text(const Report& r) { return Json(r).dump(2) + "\n"; }

inline Report report_from_json(const std::string& text) { return Json::parse(text).get<Report>(); }

namespace detail {

inline std::string positions_text(const std::vector<std::size_t>& m) {
    return to_string(Positions(m.begin(), m.end()));
}

inline std::string pad(const std::string& s, std::size_t width) {
    // columns are measured in code points so UTF-8 text lines up
    std::size_t cps = 0;
    for (unsigned char ch : s)
        if ((ch & 0xC0) != 0x80) ++cps;
    return cps >= width ? s + "  " : s + std::string(width - cps + 2, ' ');
}

} // namespace detail

/// Table with columns: #, binary clause, τ, δ, looping query, verified steps.
/// Additional passing filters of a clause go on continuation rows, followed
/// by its non-terminating classes.
inline std::string to_text(const Report& r) {
    std::size_t wsrc = 13, wtau = 3, wdelta = 5;
    for (const auto& c : r.clauses) {
        wsrc = std::max(wsrc, c.source.size());
        for (const auto& res : c.results) {
            wtau = std::max(wtau, detail::positions_text(res.tau).size());
            wdelta = std::max(wdelta, res.delta.size());
        }
    }
    std::ostringstream os;
    std::string idx_head = "#";
    os << detail::pad(idx_head, 3) << detail::pad("binary clause", wsrc) << detail::pad("tau", wtau)
       << detail::pad("delta", wdelta) << "looping query  [verified steps]\n";
    for (std::size_t i = 0; i < r.clauses.size(); ++i) {
        const auto& c = r.clauses[i];
        std::string idx = std::to_string(i + 1);
        if (c.results.empty()) {
            os << detail::pad(idx, 3) << detail::pad(c.source, wsrc) << detail::pad("", wtau) << detail::pad("", wdelta)
               << c.status << "\n";
            continue;
        }
        for (std::size_t k = 0; k < c.results.size(); ++k) {
            const auto& res = c.results[k];
            os << detail::pad(k == 0 ? idx : "", 3) << detail::pad(k == 0 ? c.source : "", wsrc)
               << detail::pad(detail::positions_text(res.tau), wtau) << detail::pad(res.delta, wdelta) << res.witness
               << "  [" << res.verified_steps << "]\n";
        }
        os << detail::pad("", 3) << "non-terminating classes:";
        for (const auto& m : c.classes) os << " " << detail::positions_text(m);
        os << "\n";
    }
    if (!r.propagated.empty()) {
        os << "\npropagated:\n";
        for (const auto& p : r.propagated)
            os << "  clause " << p.clause << ": " << p.head_query << " loops, via " << p.via << "\n";
    }
    return os.str();
}

} // namespace clploop
