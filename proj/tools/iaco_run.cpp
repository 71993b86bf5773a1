// Headless episode runner: a simulated designer steers the search until the
// iteration cap, then the episode log, fitness curve and best design are written.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "iaco/iaco.hpp"

namespace {

std::vector<double> split_numbers(const std::string& text, const char* flag) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw iaco::ValidationError(std::string(flag) + ": \"" + item + "\" is not a number");
        }
    }
    return out;
}

std::uint32_t as_count(double v, const char* flag) {
    if (v < 1 || v != static_cast<double>(static_cast<std::uint32_t>(v))) {
        throw iaco::ValidationError(std::string(flag) + ": counts must be positive integers");
    }
    return static_cast<std::uint32_t>(v);
}

nlohmann::ordered_json best_solution_document(const iaco::Session& s) {
    const auto& p = s.problem();
    nlohmann::ordered_json doc;
    doc["problem"] = p.name;
    const auto& best = s.colony().best_so_far();
    if (!best) {
        doc["best"] = nullptr;
        return doc;
    }
    doc["iteration"] = best->iteration;
    doc["quality"] = best->quality;
    doc["metrics"] = iaco::detail::metrics_json(best->metrics);
    doc["weights"] = iaco::detail::weights_json(s.weights());
    auto classes = nlohmann::ordered_json::array();
    for (std::uint32_t c = 0; c < best->solution.classes.size(); ++c) {
        auto attrs = nlohmann::ordered_json::array();
        auto meths = nlohmann::ordered_json::array();
        for (auto e : best->solution.classes[c]) (p.is_attribute(e) ? attrs : meths).push_back(p.label(e));
        classes.push_back({{"index", c}, {"attributes", attrs}, {"methods", meths}});
    }
    doc["classes"] = std::move(classes);
    const auto god = iaco::detect_god_class(p, best->solution);
    doc["godClass"] = god ? nlohmann::ordered_json(*god) : nullptr;
    return doc;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interactive ACO software design: headless episode runner"};

    std::string problem_file;
    std::string generate;
    std::uint64_t seed = 0;
    std::uint64_t iterations = iaco::kDefaultHeadlessIterationCap;
    std::string persona_spec = "0.34,0.33,0.33";
    std::string out_dir = "iaco-out";
    unsigned threads = 1;
    iaco::AcoParams params;

    auto* src = app.add_option("--problem", problem_file, "Instance document (JSON)");
    auto* gen = app.add_option("--generate", generate, "Generate an instance: attributes,methods,uses,classes");
    src->excludes(gen);
    gen->excludes(src);
    app.add_option("--seed", seed, "Master seed")->required();
    app.add_option("--iterations", iterations, "Iteration cap")->capture_default_str();
    app.add_option("--persona", persona_spec, "Simulated designer: wCbo,wNac,wAtmr[,noise]")->capture_default_str();
    app.add_option("--ants", params.colony_size, "Colony size")->capture_default_str();
    app.add_option("--alpha", params.alpha, "Trail exponent")->capture_default_str();
    app.add_option("--mu", params.mu, "Deposit scale")->capture_default_str();
    app.add_option("--sigma", params.sigma, "Evaporation rate")->capture_default_str();
    app.add_option("--tmin", params.t_min, "Lower trail limit")->capture_default_str();
    app.add_option("--tmax", params.t_max, "Upper trail limit")->capture_default_str();
    app.add_option("--threads", threads, "Worker threads for path construction")->capture_default_str();
    app.add_option("--out", out_dir, "Output directory")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (problem_file.empty() == generate.empty()) {
            throw iaco::ValidationError("exactly one of --problem or --generate is required");
        }
        iaco::validate(params);

        iaco::DesignProblem problem;
        if (!problem_file.empty()) {
            problem = iaco::load_problem(problem_file);
        } else {
            const auto v = split_numbers(generate, "--generate");
            if (v.size() != 4) throw iaco::ValidationError("--generate expects attributes,methods,uses,classes");
            problem = iaco::generate_problem(as_count(v[0], "--generate"), as_count(v[1], "--generate"),
                                             as_count(v[2], "--generate"), as_count(v[3], "--generate"), seed);
        }

        const auto pv = split_numbers(persona_spec, "--persona");
        if (pv.size() != 3 && pv.size() != 4) throw iaco::ValidationError("--persona expects cbo,nac,atmr[,noise]");
        iaco::Persona persona{{pv[0], pv[1], pv[2]}, pv.size() == 4 ? pv[3] : 0.0};

        iaco::SessionConfig cfg{params, seed, iterations, "run-" + std::to_string(seed), threads};
        iaco::Session session(std::make_shared<const iaco::DesignProblem>(problem), cfg);
        iaco::SimulatedDesigner designer(persona, seed);
        while (session.status() != iaco::SessionStatus::halted) session.step(designer);

        const std::filesystem::path out(out_dir);
        std::filesystem::create_directories(out);
        const auto log = session.log_text();
        write_file(out / "problem.json", iaco::serialize_problem(problem));
        write_file(out / "episode.ndjson", log);
        write_file(out / "episode.csv", iaco::episode_csv(log));
        write_file(out / "fitness_curve.csv", iaco::fitness_curve_csv(log));
        write_file(out / "best_solution.json", best_solution_document(session).dump(2) + "\n");

        const auto& best = session.colony().best_so_far();
        std::cout << "iterations " << session.iteration() << ", interactions "
                  << session.surrogate().observations().size() << '\n';
        if (best) {
            std::cout << "best quality " << best->quality << " (cbo " << best->metrics.cbo << ", nac "
                      << best->metrics.nac << ", atmr " << best->metrics.atmr << ")\n";
        }
        std::cout << "weights " << session.weights().cbo << ' ' << session.weights().nac << ' '
                  << session.weights().atmr << '\n';
        std::cout << "artifacts written to " << out.string() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
