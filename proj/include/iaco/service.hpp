#pragma once

#include <atomic>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <random>
#include <shared_mutex>

#include "episode_log.hpp"
#include "generator.hpp"

namespace iaco {

inline constexpr int kApiSchemaVersion = 1;

class ServiceError : public std::runtime_error {
public:
    enum class Kind { bad_request, not_found, conflict };

    ServiceError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

struct SessionHandle {
    std::string id;
    std::string problem_name;
    SessionStatus status = SessionStatus::running;
    std::string created;  // UTC, ISO 8601
};

inline nlohmann::ordered_json to_json(const SessionHandle& h) {
    return {{"schemaVersion", kApiSchemaVersion},
            {"sessionId", h.id},
            {"problem", h.problem_name},
            {"status", to_string(h.status)},
            {"created", h.created}};
}

/// Snapshot payload for the designer UI: the displayed candidate with per-class
/// cohesion tiers and directed coupling strengths, plus the search's current state.
inline nlohmann::ordered_json snapshot_payload(const std::string& id, const Session& s) {
    const auto& p = s.problem();
    nlohmann::ordered_json j;
    j["schemaVersion"] = kApiSchemaVersion;
    j["sessionId"] = id;
    j["problem"] = p.name;
    j["status"] = to_string(s.status());
    j["iteration"] = s.iteration();
    j["awaiting"] = s.awaiting();
    j["weights"] = detail::weights_json(s.weights());
    j["bestQuality"] = s.best_quality();
    j["nextInteractionAt"] = s.next_interaction_at();
    j["archiveSize"] = s.archive().size();
    auto frozen = nlohmann::ordered_json::array();
    for (const auto& [c, members] : s.frozen().classes()) frozen.push_back({{"class", c}, {"members", members}});
    j["frozen"] = std::move(frozen);

    if (!s.presentation()) {
        j["candidate"] = nullptr;
        return j;
    }
    const auto& shown = s.presentation()->candidate;
    const auto& sol = shown.solution;
    nlohmann::ordered_json cand;
    cand["metrics"] = detail::metrics_json(shown.metrics);
    cand["quality"] = shown.quality;
    auto classes = nlohmann::ordered_json::array();
    for (std::uint32_t c = 0; c < sol.classes.size(); ++c) {
        auto members = nlohmann::ordered_json::array();
        for (ElementId e : sol.classes[c]) {
            members.push_back({{"id", e}, {"label", p.label(e)}, {"kind", p.is_attribute(e) ? "attribute" : "method"}});
        }
        const double coh = class_cohesion(p, sol, c);
        classes.push_back({{"index", c},
                           {"members", std::move(members)},
                           {"cohesion", coh},
                           {"tier", to_string(cohesion_tier(coh))},
                           {"frozen", s.frozen().contains(c)}});
    }
    cand["classes"] = std::move(classes);
    auto couples = nlohmann::ordered_json::array();
    const auto k = coupling_matrix(p, sol);
    for (std::uint32_t from = 0; from < k.size(); ++from) {
        for (std::uint32_t to = 0; to < k.size(); ++to) {
            if (from != to && k[from][to] > 0) couples.push_back({{"from", from}, {"to", to}, {"strength", k[from][to]}});
        }
    }
    cand["couples"] = std::move(couples);
    const auto god = detect_god_class(p, sol);
    cand["godClass"] = god ? nlohmann::ordered_json(*god) : nullptr;
    j["candidate"] = std::move(cand);
    return j;
}

inline nlohmann::ordered_json archive_payload(const std::string& id, const Session& s) {
    auto entries = nlohmann::ordered_json::array();
    for (const auto& e : s.archive()) {
        entries.push_back({{"iteration", e.iteration},
                           {"metrics", detail::metrics_json(e.metrics)},
                           {"classes", detail::solution_json(e.solution)}});
    }
    return {{"schemaVersion", kApiSchemaVersion}, {"sessionId", id}, {"archive", std::move(entries)}};
}

/// Applies partial parameter overrides ("ants", "alpha", ...) on top of `base`.
inline AcoParams params_with_overrides(const nlohmann::json& j, AcoParams base = {}) {
    if (j.is_null()) return base;
    if (!j.is_object()) throw ValidationError("params must be an object");
    if (j.contains("ants")) base.colony_size = j["ants"].get<std::uint32_t>();
    if (j.contains("alpha")) base.alpha = j["alpha"].get<double>();
    if (j.contains("mu")) base.mu = j["mu"].get<double>();
    if (j.contains("sigma")) base.sigma = j["sigma"].get<double>();
    if (j.contains("tmin")) base.t_min = j["tmin"].get<double>();
    if (j.contains("tmax")) base.t_max = j["tmax"].get<double>();
    validate(base);
    return base;
}

/// Server-held interactive sessions. Requests on one session are serialized by a
/// per-session lock; distinct sessions proceed independently. Designer commands are
/// only accepted while the session awaits an interaction: freeze, unfreeze and archive
/// are staged, and a rating or halt commits the staged interaction. After a commit the
/// search runs synchronously to the next interaction point.
class SessionService {
public:
    explicit SessionService(std::optional<std::filesystem::path> data_dir = std::nullopt)
        : data_dir_(std::move(data_dir)) {}

    SessionHandle create_session(const nlohmann::json& request) {
        try {
            return create_impl(request);
        } catch (const nlohmann::json::exception& e) {
            throw ServiceError(ServiceError::Kind::bad_request, e.what());
        } catch (const ValidationError& e) {
            throw ServiceError(ServiceError::Kind::bad_request, e.what());
        }
    }

    std::vector<SessionHandle> list_sessions() const {
        std::shared_lock lock(map_mutex_);
        std::vector<SessionHandle> out;
        for (const auto& [id, entry] : sessions_) {
            std::lock_guard g(entry->mutex);
            auto h = entry->handle;
            h.status = entry->session.status();
            out.push_back(h);
        }
        return out;
    }

    nlohmann::ordered_json get_snapshot(const std::string& id) const {
        auto entry = find(id);
        std::lock_guard g(entry->mutex);
        auto j = snapshot_payload(id, entry->session);
        j["pending"] = pending_json(entry->pending);
        return j;
    }

    /// Runs the search to the first interaction point.
    nlohmann::ordered_json start(const std::string& id) {
        auto entry = find(id);
        std::lock_guard g(entry->mutex);
        if (entry->session.status() == SessionStatus::halted) throw ServiceError(ServiceError::Kind::conflict, "session has halted");
        entry->session.advance();
        persist(*entry);
        return snapshot_payload(id, entry->session);
    }

    nlohmann::ordered_json submit_interaction(const std::string& id, const nlohmann::json& command) {
        auto entry = find(id);
        std::lock_guard g(entry->mutex);
        auto& s = entry->session;
        if (!s.awaiting()) throw ServiceError(ServiceError::Kind::conflict, "no interaction is awaited");

        Interaction next = entry->pending;
        std::string type;
        try {
            type = command.at("type").get<std::string>();
            if (type == "rating") {
                next.rating = command.at("rating").get<int>();
            } else if (type == "freeze") {
                FreezeCommand f{command.at("class").get<std::uint32_t>(), std::nullopt};
                if (command.contains("members") && !command["members"].is_null()) {
                    f.members = command["members"].get<std::vector<ElementId>>();
                }
                next.freeze.push_back(std::move(f));
            } else if (type == "unfreeze") {
                next.unfreeze.push_back(command.at("class").get<std::uint32_t>());
            } else if (type == "archive") {
                next.archive = true;
            } else if (type == "halt") {
                next.halt = true;
            } else {
                throw ServiceError(ServiceError::Kind::bad_request, "unknown interaction type \"" + type + "\"");
            }
            s.check(next);
        } catch (const nlohmann::json::exception& e) {
            throw ServiceError(ServiceError::Kind::bad_request, e.what());
        } catch (const ValidationError& e) {
            throw ServiceError(ServiceError::Kind::bad_request, e.what());
        }

        nlohmann::ordered_json ack{{"schemaVersion", kApiSchemaVersion}, {"accepted", true}, {"type", type}};
        if (type == "rating" || type == "halt") {
            s.submit(next);
            entry->pending = {};
            if (s.status() != SessionStatus::halted) s.advance();
            persist(*entry);
            ack["committed"] = true;
        } else {
            entry->pending = std::move(next);
            ack["committed"] = false;
        }
        ack["iteration"] = s.iteration();
        ack["status"] = to_string(s.status());
        return ack;
    }

    nlohmann::ordered_json list_archive(const std::string& id) const {
        auto entry = find(id);
        std::lock_guard g(entry->mutex);
        return archive_payload(id, entry->session);
    }

    std::string export_log(const std::string& id) const {
        auto entry = find(id);
        std::lock_guard g(entry->mutex);
        return entry->session.log_text();
    }

    std::string export_log_csv(const std::string& id) const { return episode_csv(export_log(id)); }

    /// Read-only access under the session lock; for tests and tooling.
    template <typename F>
    auto with_session(const std::string& id, F&& f) const {
        auto entry = find(id);
        std::lock_guard g(entry->mutex);
        return f(static_cast<const Session&>(entry->session));
    }

private:
    struct Entry {
        Entry(SessionHandle h, Session s) : handle(std::move(h)), session(std::move(s)) {}
        SessionHandle handle;
        Session session;
        Interaction pending;
        std::size_t persisted_lines = 0;
        mutable std::mutex mutex;
    };

    static nlohmann::ordered_json pending_json(const Interaction& in) {
        auto fr = nlohmann::ordered_json::array();
        for (const auto& f : in.freeze) {
            fr.push_back({{"class", f.class_index}, {"members", f.members ? nlohmann::ordered_json(*f.members) : nullptr}});
        }
        return {{"freeze", std::move(fr)}, {"unfreeze", in.unfreeze}, {"archive", in.archive}};
    }

    static std::string utc_now() {
        const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm tm{};
        gmtime_r(&t, &tm);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
        return buf;
    }

    SessionHandle create_impl(const nlohmann::json& req) {
        if (!req.is_object()) throw ValidationError("request must be an object");
        if (req.contains("schemaVersion") && req["schemaVersion"].get<int>() != kApiSchemaVersion) {
            throw ValidationError("unsupported schemaVersion");
        }
        const bool has_problem = req.contains("problem");
        const bool has_generate = req.contains("generate");
        if (has_problem == has_generate) throw ValidationError("exactly one of \"problem\" or \"generate\" is required");

        SessionConfig cfg;
        cfg.params = params_with_overrides(req.value("params", nlohmann::json()));
        cfg.seed = req.contains("seed") ? req["seed"].get<std::uint64_t>() : std::random_device{}();
        if (req.contains("maxIterations") && !req["maxIterations"].is_null()) {
            cfg.max_iterations = req["maxIterations"].get<std::uint64_t>();
        }

        DesignProblem problem;
        if (has_problem) {
            problem = problem_from_json(req["problem"]);
        } else {
            const auto& g = req["generate"];
            problem = generate_problem(
                ProblemScale{g.at("attributes").get<std::uint32_t>(), g.at("methods").get<std::uint32_t>(),
                             g.at("uses").get<std::uint32_t>(), g.at("classes").get<std::uint32_t>()},
                g.value("seed", cfg.seed));
        }

        const std::string id = "s" + std::to_string(++counter_);
        cfg.run_id = id;
        auto shared = std::make_shared<const DesignProblem>(std::move(problem));
        auto entry = std::make_shared<Entry>(SessionHandle{id, shared->name, SessionStatus::running, utc_now()},
                                             Session(shared, cfg));
        if (req.value("autostart", false)) entry->session.advance();
        if (data_dir_) {
            std::filesystem::create_directories(*data_dir_ / id);
            std::ofstream(*data_dir_ / id / "problem.json", std::ios::binary) << serialize_problem(*shared);
        }
        persist(*entry);
        {
            std::unique_lock lock(map_mutex_);
            sessions_.emplace(id, entry);
        }
        return entry->handle;
    }

    std::shared_ptr<Entry> find(const std::string& id) const {
        std::shared_lock lock(map_mutex_);
        const auto it = sessions_.find(id);
        if (it == sessions_.end()) throw ServiceError(ServiceError::Kind::not_found, "unknown session \"" + id + "\"");
        return it->second;
    }

    /// Appends log lines not yet on disk.
    void persist(Entry& e) const {
        if (!data_dir_) return;
        const auto& log = e.session.log();
        std::ofstream out(*data_dir_ / e.handle.id / "episode.ndjson", std::ios::binary | std::ios::app);
        for (; e.persisted_lines < log.size(); ++e.persisted_lines) out << log[e.persisted_lines] << '\n';
    }

    std::optional<std::filesystem::path> data_dir_;
    mutable std::shared_mutex map_mutex_;
    std::map<std::string, std::shared_ptr<Entry>> sessions_;
    std::atomic<std::uint64_t> counter_{0};
};

}  // namespace iaco
