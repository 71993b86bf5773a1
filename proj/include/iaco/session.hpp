#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "colony.hpp"
#include "problem_io.hpp"
#include "surrogate.hpp"

namespace iaco {

inline constexpr int kMinInterval = 3;
inline constexpr int kMaxInterval = 15;
inline constexpr std::uint64_t kDefaultHeadlessIterationCap = 1000;
inline constexpr int kLogSchemaVersion = 1;

/// Iterations until the next designer interaction: long while the best design is
/// poor, shrinking as it improves.
inline int next_interval(double best_quality) {
    if (!(best_quality >= 0.0 && best_quality <= 1.0)) throw ValidationError("quality must lie in [0, 1]");
    const int raw = kMinInterval + static_cast<int>(std::lround(12.0 * (1.0 - best_quality)));
    return std::clamp(raw, kMinInterval, kMaxInterval);
}

struct FreezeCommand {
    std::uint32_t class_index = 0;
    std::optional<std::vector<ElementId>> members;  // nullopt: the whole displayed class

    bool operator==(const FreezeCommand&) const = default;
};

/// Everything a designer may do at one interaction point.
struct Interaction {
    std::optional<int> rating;
    std::vector<FreezeCommand> freeze;
    std::vector<std::uint32_t> unfreeze;
    bool archive = false;
    bool halt = false;

    bool operator==(const Interaction&) const = default;
};

struct ArchiveEntry {
    DesignSolution solution;
    MetricVector metrics;
    std::uint64_t iteration = 0;

    bool operator==(const ArchiveEntry&) const = default;
};

/// The candidate put in front of the designer at an interaction point.
struct Presentation {
    std::uint64_t iteration = 0;
    EvaluatedPath candidate;
    WeightVector weights;
    double best_quality = 0.0;
};

enum class SessionStatus { running, paused, halted };

inline std::string_view to_string(SessionStatus s) {
    switch (s) {
        case SessionStatus::running: return "running";
        case SessionStatus::paused: return "paused";
        case SessionStatus::halted: return "halted";
    }
    return "running";
}

struct SessionConfig {
    AcoParams params;
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> max_iterations;  // nullopt: designer decides when to stop
    std::string run_id = "run";
    unsigned threads = 1;
};

using Evaluator = std::function<Interaction(const Presentation&)>;

namespace detail {

inline nlohmann::ordered_json metrics_json(const MetricVector& m) {
    return {{"cbo", m.cbo}, {"nac", m.nac}, {"atmr", m.atmr}};
}

inline nlohmann::ordered_json weights_json(const WeightVector& w) {
    return {{"cbo", w.cbo}, {"nac", w.nac}, {"atmr", w.atmr}};
}

inline nlohmann::ordered_json params_json(const AcoParams& p) {
    return {{"ants", p.colony_size}, {"alpha", p.alpha}, {"mu", p.mu},
            {"sigma", p.sigma},      {"tmin", p.t_min},  {"tmax", p.t_max}};
}

inline AcoParams params_from_json(const nlohmann::json& j) {
    AcoParams p;
    p.colony_size = j.at("ants").get<std::uint32_t>();
    p.alpha = j.at("alpha").get<double>();
    p.mu = j.at("mu").get<double>();
    p.sigma = j.at("sigma").get<double>();
    p.t_min = j.at("tmin").get<double>();
    p.t_max = j.at("tmax").get<double>();
    return p;
}

inline nlohmann::ordered_json solution_json(const DesignSolution& s) {
    auto classes = nlohmann::ordered_json::array();
    for (const auto& c : s.classes) classes.push_back(c);
    return classes;
}

}  // namespace detail

/// One interactive design episode: a colony steered by a surrogate model of designer
/// ratings, with freeze/archive bookkeeping and an append-only event log.
///
/// The session alternates between searching (advance) and waiting for a designer
/// (submit). All randomness derives from the configured seed.
class Session {
public:
    Session(std::shared_ptr<const DesignProblem> problem, SessionConfig config)
        : problem_(std::move(problem)),
          config_(std::move(config)),
          colony_(problem_, config_.params, config_.seed, config_.threads),
          display_rng_(derive_seed(config_.seed, static_cast<std::uint64_t>(Stream::display))),
          next_interaction_at_(static_cast<std::uint64_t>(next_interval(0.0))) {
        validate(*problem_);
        validate(config_.params);
        nlohmann::ordered_json header;
        header["type"] = "session";
        header["schemaVersion"] = kLogSchemaVersion;
        header["runId"] = config_.run_id;
        header["seed"] = config_.seed;
        header["maxIterations"] = config_.max_iterations ? nlohmann::ordered_json(*config_.max_iterations) : nullptr;
        header["params"] = detail::params_json(config_.params);
        header["problem"] = problem_to_json(*problem_);
        log_.push_back(header.dump());
    }

    const DesignProblem& problem() const { return *problem_; }
    std::shared_ptr<const DesignProblem> problem_ptr() const { return problem_; }
    const SessionConfig& config() const { return config_; }
    const Colony& colony() const { return colony_; }
    std::uint64_t iteration() const { return colony_.iteration(); }
    SessionStatus status() const { return status_; }
    bool awaiting() const { return presentation_.has_value(); }
    const std::optional<Presentation>& presentation() const { return presentation_; }
    const WeightVector& weights() const { return weights_; }
    const SurrogateModel& surrogate() const { return surrogate_; }
    const FreezeSet& frozen() const { return frozen_; }
    const std::vector<ArchiveEntry>& archive() const { return archive_; }
    std::uint64_t next_interaction_at() const { return next_interaction_at_; }
    const std::vector<std::string>& log() const { return log_; }

    double best_quality() const {
        const auto& best = colony_.best_so_far();
        return best ? best->quality : 0.0;
    }

    /// Runs iterations up to the next interaction point and selects the candidate to
    /// show. Returns whether an interaction is now awaited (false once halted).
    bool advance() {
        if (status_ == SessionStatus::halted) return false;
        if (presentation_) return true;
        while (colony_.iteration() < next_interaction_at_) {
            if (config_.max_iterations && colony_.iteration() >= *config_.max_iterations) {
                halt("iteration-cap");
                return false;
            }
            const auto& snap = colony_.run_iteration(weights_, frozen_);
            log_iteration(snap);
        }
        const auto& shown = select_display_candidate(colony_.snapshot(), display_rng_);
        presentation_ = Presentation{colony_.iteration(), shown, weights_, best_quality()};
        return true;
    }

    /// Throws ValidationError/SessionError if `in` cannot be applied now. No side effects.
    void check(const Interaction& in) const { (void)resolve(in); }

    /// Applies a designer interaction at the current interaction point.
    void submit(const Interaction& in) {
        const auto freezes = resolve(in);
        const auto& shown = *presentation_;

        for (auto c : in.unfreeze) frozen_.unfreeze(c);
        for (const auto& [c, members] : freezes) frozen_.freeze(*problem_, c, members);
        if (in.archive) archive_.push_back({shown.candidate.solution, shown.candidate.metrics, shown.iteration});
        if (in.rating) {
            surrogate_.record_evaluation(shown.candidate.metrics, *in.rating);
            weights_ = surrogate_.weights(weights_);
            colony_.rescore(weights_);
        }
        next_interaction_at_ = colony_.iteration() + static_cast<std::uint64_t>(next_interval(best_quality()));
        log_interaction(in, freezes, shown);
        presentation_.reset();
        if (in.halt) halt("designer");
    }

    /// One full cycle: search to the next interaction point, ask the evaluator, apply.
    /// An evaluator failure pauses the session and leaves its state untouched; the next
    /// call re-presents the same candidate.
    template <typename F>
    void step(F&& evaluator) {
        if (status_ == SessionStatus::halted) throw SessionError("session has halted");
        status_ = SessionStatus::running;
        if (!advance()) return;
        Interaction in;
        try {
            in = evaluator(*presentation_);
            check(in);
        } catch (const std::exception& e) {
            status_ = SessionStatus::paused;
            throw SessionError(std::string("designer evaluation failed, session paused: ") + e.what());
        }
        submit(in);
    }

    /// Complete state as JSON, for equality checks after replay.
    nlohmann::ordered_json state_json() const {
        nlohmann::ordered_json j;
        j["iteration"] = iteration();
        j["status"] = to_string(status_);
        j["awaiting"] = awaiting();
        j["nextInteractionAt"] = next_interaction_at_;
        j["weights"] = detail::weights_json(weights_);
        const auto& a = surrogate_.coefficients();
        j["coefficients"] = {a.a0, a.a1, a.a2, a.a3};
        auto obs = nlohmann::ordered_json::array();
        for (const auto& o : surrogate_.observations()) obs.push_back({o.cbo, o.nac, o.atmr, o.rating});
        j["observations"] = std::move(obs);
        auto fr = nlohmann::ordered_json::array();
        for (const auto& [c, members] : frozen_.classes()) fr.push_back({{"class", c}, {"members", members}});
        j["frozen"] = std::move(fr);
        auto ar = nlohmann::ordered_json::array();
        for (const auto& e : archive_) {
            ar.push_back({{"iteration", e.iteration},
                          {"metrics", detail::metrics_json(e.metrics)},
                          {"classes", detail::solution_json(e.solution)}});
        }
        j["archive"] = std::move(ar);
        if (const auto& best = colony_.best_so_far()) {
            j["best"] = {{"iteration", best->iteration},
                         {"quality", best->quality},
                         {"metrics", detail::metrics_json(best->metrics)},
                         {"classes", detail::solution_json(best->solution)}};
        }
        if (presentation_) j["displayed"] = detail::solution_json(presentation_->candidate.solution);
        j["trails"] = colony_.pheromone().raw();
        return j;
    }

    /// The log as newline-delimited JSON.
    std::string log_text() const {
        std::string out;
        for (const auto& line : log_) out += line + "\n";
        return out;
    }

private:
    /// Validates an interaction against the current state and resolves freeze members.
    std::vector<std::pair<std::uint32_t, std::vector<ElementId>>> resolve(const Interaction& in) const {
        if (status_ == SessionStatus::halted) throw SessionError("session has halted");
        if (!presentation_) throw SessionError("no interaction is awaited");
        if (in.rating && (*in.rating < kMinRating || *in.rating > kMaxRating)) {
            throw ValidationError("rating must be an integer in [1, 100]");
        }
        FreezeSet trial = frozen_;
        for (auto c : in.unfreeze) trial.unfreeze(c);
        const auto& shown = presentation_->candidate.solution;
        std::vector<std::pair<std::uint32_t, std::vector<ElementId>>> out;
        for (const auto& f : in.freeze) {
            if (f.class_index >= problem_->class_count) throw ValidationError("freeze: class index out of range");
            const auto& cls = shown.classes[f.class_index];
            std::vector<ElementId> members = f.members.value_or(cls);
            for (ElementId e : members) {
                if (std::find(cls.begin(), cls.end(), e) == cls.end()) {
                    throw ValidationError("freeze: member not in that class of the displayed candidate");
                }
            }
            trial.freeze(*problem_, f.class_index, members);
            out.emplace_back(f.class_index, std::move(members));
        }
        return out;
    }

    void halt(const char* reason) {
        status_ = SessionStatus::halted;
        presentation_.reset();
        nlohmann::ordered_json j;
        j["type"] = "halt";
        j["runId"] = config_.run_id;
        j["iteration"] = colony_.iteration();
        j["reason"] = reason;
        log_.push_back(j.dump());
    }

    void log_iteration(const ColonySnapshot& snap) {
        const auto& ib = snap.best_path();
        nlohmann::ordered_json j;
        j["type"] = "iteration";
        j["runId"] = config_.run_id;
        j["iteration"] = snap.iteration;
        j["cbo"] = ib.metrics.cbo;
        j["nac"] = ib.metrics.nac;
        j["atmr"] = ib.metrics.atmr;
        j["quality"] = ib.quality;
        j["bestSoFar"] = snap.best_so_far->quality;
        j["weights"] = detail::weights_json(weights_);
        log_.push_back(j.dump());
    }

    void log_interaction(const Interaction& in,
                         const std::vector<std::pair<std::uint32_t, std::vector<ElementId>>>& freezes,
                         const Presentation& shown) {
        nlohmann::ordered_json j;
        j["type"] = "interaction";
        j["runId"] = config_.run_id;
        j["iteration"] = shown.iteration;
        j["rating"] = in.rating ? nlohmann::ordered_json(*in.rating) : nullptr;
        j["displayed"] = detail::metrics_json(shown.candidate.metrics);
        j["weights"] = detail::weights_json(weights_);
        const auto& a = surrogate_.coefficients();
        j["coefficients"] = {a.a0, a.a1, a.a2, a.a3};
        auto fr = nlohmann::ordered_json::array();
        for (const auto& [c, members] : freezes) fr.push_back({{"class", c}, {"members", members}});
        j["freeze"] = std::move(fr);
        j["unfreeze"] = in.unfreeze;
        j["archive"] = in.archive;
        j["halt"] = in.halt;
        j["nextInteractionAt"] = next_interaction_at_;
        log_.push_back(j.dump());
    }

    std::shared_ptr<const DesignProblem> problem_;
    SessionConfig config_;
    Colony colony_;
    Rng display_rng_;
    WeightVector weights_;
    SurrogateModel surrogate_;
    FreezeSet frozen_;
    std::vector<ArchiveEntry> archive_;
    std::uint64_t next_interaction_at_;
    std::optional<Presentation> presentation_;
    SessionStatus status_ = SessionStatus::running;
    std::vector<std::string> log_;
};

// ---------------------------------------------------------------------------
// Simulated designer

/// Preference weights plus Gaussian rating noise (standard deviation in rating points).
struct Persona {
    WeightVector weights;
    double noise = 0.0;
};

inline int simulated_rating(const MetricVector& m, const Persona& persona, Rng& rng) {
    double r = 100.0 * combined_score(m, persona.weights);
    if (persona.noise > 0.0) r += persona.noise * rng.normal();
    return std::clamp(static_cast<int>(std::lround(r)), kMinRating, kMaxRating);
}

/// Headless evaluator that rates every candidate and never freezes, archives or halts.
class SimulatedDesigner {
public:
    SimulatedDesigner(Persona persona, std::uint64_t seed)
        : persona_(persona), rng_(derive_seed(seed, static_cast<std::uint64_t>(Stream::designer))) {
        validate(persona_.weights);
        if (persona_.noise < 0.0) throw ValidationError("persona noise must be non-negative");
    }

    Interaction operator()(const Presentation& p) {
        Interaction in;
        in.rating = simulated_rating(p.candidate.metrics, persona_, rng_);
        return in;
    }

private:
    Persona persona_;
    Rng rng_;
};

}  // namespace iaco
