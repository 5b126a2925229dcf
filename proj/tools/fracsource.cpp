#include "fracsource/errors.hpp"
#include "fracsource/experiment.hpp"
#include "fracsource/parallel.hpp"

#include <CLI11.hpp>

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kParseError = 2;
constexpr int kValidationError = 3;
constexpr int kSolverError = 4;

// Config key most closely tied to each solver failure, for the diagnostic line.
std::string key_for(const fracsource::SolverError& e) {
    using namespace fracsource;
    if (dynamic_cast<const PointDegenerate*>(&e)) return "observation.x0";
    if (dynamic_cast<const Divergence*>(&e)) return "solver.K";
    if (dynamic_cast<const NonPositiveParams*>(&e)) return "solver.K";
    if (dynamic_cast<const AllModesCut*>(&e)) return "solver.delta";
    if (dynamic_cast<const DegenerateRho*>(&e)) return "source.rho";
    if (dynamic_cast<const NonZeroInitialTrace*>(&e)) return "observation.x0";
    if (dynamic_cast<const SeriesNotConverged*>(&e)) return "ml.z";
    return "mode";
}

int run(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) {
        std::fprintf(stderr, "fracsource: parse error: cannot read '%s'\n", path.c_str());
        return kParseError;
    }
    std::stringstream text;
    text << in.rdbuf();
    nlohmann::json doc = nlohmann::json::parse(text.str(), nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        std::fprintf(stderr, "fracsource: parse error: '%s' is not a JSON object\n", path.c_str());
        return kParseError;
    }

    fracsource::ExperimentConfig config;
    try {
        for (const auto& o : overrides) fracsource::apply_override(doc, o);
        config = fracsource::parse_config(doc);
    } catch (const fracsource::ConfigParseError& e) {
        std::fprintf(stderr, "fracsource: parse error: %s\n", e.what());
        return kParseError;
    } catch (const fracsource::ConfigValidationError& e) {
        std::fprintf(stderr, "fracsource: validation error: %s\n", e.what());
        return kValidationError;
    }

    try {
        const auto results = fracsource::run_experiment(config);
        for (const auto& p : fracsource::write_results(results, config.output)) std::printf("wrote %s\n", p.c_str());
    } catch (const fracsource::SolverError& e) {
        std::fprintf(stderr, "fracsource: solver error (%s): %s\n", key_for(e).c_str(), e.what());
        return kSolverError;
    } catch (const fracsource::InvalidArgument& e) {
        std::fprintf(stderr, "fracsource: validation error (mode=%s): %s\n", config.mode.c_str(), e.what());
        return kValidationError;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Caputo time-fractional diffusion: forward solves and source reconstruction"};
    std::string config_path;
    std::vector<std::string> overrides;
    app.add_option("config", config_path, "JSON experiment config")->required();
    app.add_option("--override", overrides, "key=value, dotted keys, repeatable")->allow_extra_args(false);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kParseError;
    }

    if (const char* env = std::getenv("FRACSOURCE_THREADS"); env && *env) {
        char* end = nullptr;
        errno = 0;
        const long n = std::strtol(env, &end, 10);
        if (errno || *end || n < 1) {
            std::fprintf(stderr, "fracsource: validation error: FRACSOURCE_THREADS must be a positive integer\n");
            return kValidationError;
        }
        fracsource::set_thread_limit(static_cast<std::size_t>(n));
    }
    return run(config_path, overrides);
}
