#pragma once

#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "session.hpp"

namespace iaco {

/// Splits newline-delimited JSON into parsed records, skipping blank lines.
inline std::vector<nlohmann::json> parse_log(std::string_view text) {
    std::vector<nlohmann::json> records;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        const auto line = text.substr(start, end - start);
        if (!line.empty()) {
            try {
                records.push_back(nlohmann::json::parse(line));
            } catch (const nlohmann::json::exception& e) {
                throw ValidationError(std::string("malformed log line: ") + e.what());
            }
        }
        start = end + 1;
    }
    return records;
}

inline Interaction interaction_from_record(const nlohmann::json& r) {
    Interaction in;
    if (!r.at("rating").is_null()) in.rating = r.at("rating").get<int>();
    for (const auto& f : r.at("freeze")) {
        in.freeze.push_back({f.at("class").get<std::uint32_t>(), f.at("members").get<std::vector<ElementId>>()});
    }
    in.unfreeze = r.at("unfreeze").get<std::vector<std::uint32_t>>();
    in.archive = r.at("archive").get<bool>();
    in.halt = r.at("halt").get<bool>();
    return in;
}

/// Rebuilds a session by re-running the search and re-applying every logged
/// interaction. Throws ValidationError if the log does not describe a consistent
/// episode (an interaction at an iteration the search never reaches).
inline Session replay_episode(std::string_view log_text) {
    const auto records = parse_log(log_text);
    if (records.empty() || records.front().value("type", "") != "session") {
        throw ValidationError("episode log must start with a session record");
    }
    const auto& h = records.front();
    if (h.at("schemaVersion").get<int>() != kLogSchemaVersion) throw ValidationError("unsupported log schema version");
    SessionConfig cfg;
    cfg.params = detail::params_from_json(h.at("params"));
    cfg.seed = h.at("seed").get<std::uint64_t>();
    if (!h.at("maxIterations").is_null()) cfg.max_iterations = h.at("maxIterations").get<std::uint64_t>();
    cfg.run_id = h.at("runId").get<std::string>();
    auto problem = std::make_shared<const DesignProblem>(problem_from_json(h.at("problem")));
    Session session(std::move(problem), cfg);

    for (std::size_t k = 1; k < records.size(); ++k) {
        const auto& r = records[k];
        if (r.at("type") != "interaction") continue;
        if (!session.advance()) throw ValidationError("log has an interaction after the session halted");
        if (session.iteration() != r.at("iteration").get<std::uint64_t>()) {
            throw ValidationError("logged interaction iteration does not match replayed search");
        }
        session.submit(interaction_from_record(r));
    }
    // A log that ends mid-search (cap reached, or waiting on the designer) is resumed
    // to the same point.
    if (records.back().at("type") == "halt" && session.status() != SessionStatus::halted) session.advance();
    if (records.back().at("type") == "iteration") session.advance();
    return session;
}

namespace detail {

inline std::string csv_number(const nlohmann::json& v) { return v.is_null() ? std::string() : v.dump(); }

inline std::string csv_field(std::string s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace detail

inline constexpr std::string_view kFitnessCurveHeader = "iteration,bestCBO,bestNAC,bestATMR,bestQuality,wCbo,wNac,wAtmr";

/// Per-iteration curve of the colony's iteration-best design and the weights in force.
inline std::string fitness_curve_csv(std::string_view log_text) {
    std::ostringstream out;
    out << kFitnessCurveHeader << '\n';
    for (const auto& r : parse_log(log_text)) {
        if (r.at("type") != "iteration") continue;
        const auto& w = r.at("weights");
        out << r.at("iteration").dump() << ',' << r.at("cbo").dump() << ',' << r.at("nac").dump() << ','
            << r.at("atmr").dump() << ',' << r.at("quality").dump() << ',' << w.at("cbo").dump() << ','
            << w.at("nac").dump() << ',' << w.at("atmr").dump() << '\n';
    }
    return out.str();
}

inline constexpr std::string_view kEpisodeCsvHeader =
    "type,runId,iteration,cbo,nac,atmr,quality,wCbo,wNac,wAtmr,rating,freeze,unfreeze,archive,halt,reason";

/// Flat CSV of every iteration, interaction and halt record. Iteration rows carry the
/// iteration-best metrics; interaction rows carry the displayed candidate's metrics and
/// the weights after the update. Freeze cells read "class:id id ...;class:..." and
/// unfreeze cells "class class ...".
inline std::string episode_csv(std::string_view log_text) {
    std::ostringstream out;
    out << kEpisodeCsvHeader << '\n';
    for (const auto& r : parse_log(log_text)) {
        const auto type = r.at("type").get<std::string>();
        if (type == "session") continue;
        std::vector<std::string> cells(16);
        cells[0] = type;
        cells[1] = detail::csv_field(r.at("runId").get<std::string>());
        cells[2] = r.at("iteration").dump();
        if (type == "iteration" || type == "interaction") {
            const auto& m = type == "iteration" ? r : r.at("displayed");
            cells[3] = m.at("cbo").dump();
            cells[4] = m.at("nac").dump();
            cells[5] = m.at("atmr").dump();
            const auto& w = r.at("weights");
            cells[7] = w.at("cbo").dump();
            cells[8] = w.at("nac").dump();
            cells[9] = w.at("atmr").dump();
        }
        if (type == "iteration") cells[6] = r.at("quality").dump();
        if (type == "interaction") {
            cells[10] = detail::csv_number(r.at("rating"));
            std::string fr;
            for (const auto& f : r.at("freeze")) {
                if (!fr.empty()) fr += ';';
                fr += f.at("class").dump() + ':';
                bool first = true;
                for (const auto& e : f.at("members")) {
                    if (!first) fr += ' ';
                    fr += e.dump();
                    first = false;
                }
            }
            cells[11] = fr;
            std::string uf;
            for (const auto& c : r.at("unfreeze")) uf += (uf.empty() ? "" : " ") + c.dump();
            cells[12] = uf;
            cells[13] = r.at("archive").get<bool>() ? "1" : "0";
            cells[14] = r.at("halt").get<bool>() ? "1" : "0";
        }
        if (type == "halt") cells[15] = r.at("reason").get<std::string>();
        for (std::size_t k = 0; k < cells.size(); ++k) out << (k ? "," : "") << cells[k];
        out << '\n';
    }
    return out.str();
}

}  // namespace iaco
