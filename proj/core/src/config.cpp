#include "skewprod/config.hpp"

#include <cmath>
#include <thread>

namespace skewprod {

Grid RunSpec::grid() const {
    const double steps = std::round(horizon / dt);
    return Grid(dt, static_cast<std::size_t>(std::max(steps, 1.0)));
}

std::string suite_for_scenario(const std::string& scenario) {
    switch (scenario_from_name(scenario)) {
        case Scenario::planar_bm: return "example1";
        case Scenario::rotated_bm: return "example2";
        case Scenario::matrix_diffusion: return "example3";
    }
    throw UnknownScenario(scenario);
}

std::string scenario_for_suite(const std::string& suite) {
    if (suite == "example1") return "planar_bm";
    if (suite == "example2") return "rotated_bm";
    if (suite == "example3") return "matrix_diffusion";
    throw InvalidNumeric("suite", "no single scenario for '" + suite + "'");
}

void validate(RunSpec& spec) {
    if (!(spec.dt > 0.0) || !std::isfinite(spec.dt)) {
        throw InvalidNumeric("dt", "must be a positive finite number");
    }
    if (!(spec.horizon >= spec.dt) || !std::isfinite(spec.horizon)) {
        throw InvalidNumeric("horizon", "must be finite and at least dt");
    }
    if (spec.n_paths < 1) {
        throw InvalidNumeric("paths", "must be at least 1");
    }
    if (!(spec.alpha > 0.0) || !(spec.alpha < 0.5)) {
        throw InvalidNumeric("alpha", "must lie in (0, 0.5)");
    }
    if (spec.suite != "example1" && spec.suite != "example2" &&
        spec.suite != "example3" && spec.suite != "all") {
        throw InvalidNumeric("suite",
                             "expected example1, example2, example3 or all");
    }
    if (!spec.scenario.empty()) {
        const std::string implied = suite_for_scenario(spec.scenario);
        if (spec.suite == "all") {
            spec.suite = implied;
        } else if (spec.suite != implied) {
            throw InvalidNumeric("scenario", "'" + spec.scenario +
                                                 "' does not belong to suite '" +
                                                 spec.suite + "'");
        }
    }
    if (!spec.format_json && !spec.format_csv) {
        throw InvalidNumeric("format", "need at least one of json, csv");
    }
}

std::vector<std::string> suites_to_run(const RunSpec& spec) {
    if (spec.suite == "all") return {"example1", "example2", "example3"};
    return {spec.suite};
}

unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

}  // namespace skewprod
