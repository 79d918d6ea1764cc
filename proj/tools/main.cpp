#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "skewprod/report.hpp"
#include "skewprod/suites.hpp"

namespace {

// Exit codes: 0 every verdict matched its expected polarity, 1 a verdict
// deviated, 2 bad configuration, 3 runtime or simulation failure.
constexpr int kExitOk = 0;
constexpr int kExitDeviation = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

int run_batch(skewprod::RunSpec& spec) {
    const std::vector<skewprod::SuiteResult> results =
        skewprod::run_suites(spec);
    const std::vector<std::string> written =
        skewprod::write_reports(spec, results);
    if (spec.dump_paths) {
        for (const auto& r : results) {
            skewprod::dump_suite_paths(spec, r.suite);
        }
    }

    std::fputs(skewprod::summary_text(results).c_str(), stdout);
    for (const auto& path : written) {
        std::printf("wrote %s\n", path.c_str());
    }

    bool all_ok = true;
    bool crossed = false;
    for (const auto& r : results) {
        all_ok = all_ok && r.all_as_expected();
        crossed = crossed || !r.det_crossings.empty();
    }
    if (crossed) {
        std::fputs(
            "error: at least one path lost a positive determinant; rerun "
            "with a smaller dt\n",
            stderr);
        return kExitRuntime;
    }
    return all_ok ? kExitOk : kExitDeviation;
}

int run_calibrate(const skewprod::RunSpec& spec, std::uint64_t base_seed,
                  std::size_t n_seeds, double band) {
    const skewprod::CalibrationResult result =
        skewprod::run_calibration(spec, base_seed, n_seeds);
    std::printf("calibration over %zu seeds at alpha=%g (band +/- %g)\n",
                result.n_seeds, result.alpha, band);
    for (const auto& e : result.entries) {
        const double rate = static_cast<double>(e.rejections) /
                            static_cast<double>(result.n_seeds);
        const bool ok = std::abs(rate - result.alpha) <= band + 1e-12;
        std::printf("  %-48s %3zu/%zu  rate=%.4f  %s\n", e.name.c_str(),
                    e.rejections, result.n_seeds, rate,
                    ok ? "ok" : "OUT OF BAND");
    }
    const bool ok = result.within_band(band);
    std::printf("calibration: %s\n", ok ? "within band" : "OUT OF BAND");
    return ok ? kExitOk : kExitDeviation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Simulates planar and matrix diffusions, splits them into radial and "
        "angular parts, and statistically verifies which angular drivers are "
        "time-changed Brownian motions"};
    app.option_defaults()->always_capture_default();

    skewprod::RunSpec spec;
    std::vector<std::string> formats{"json"};
    app.add_option("--suite", spec.suite,
                   "Test suite: example1, example2, example3 or all");
    app.add_option("--scenario", spec.scenario,
                   "Scenario: planar_bm, rotated_bm or matrix_diffusion "
                   "(implies its suite)");
    app.add_option("--dt", spec.dt, "Time step");
    app.add_option("--horizon", spec.horizon, "End time");
    app.add_option("--paths", spec.n_paths, "Number of Monte Carlo paths");
    app.add_option("--seed", spec.seed, "Root RNG seed");
    app.add_option("--out", spec.out_dir, "Output directory");
    app.add_option("--format", formats,
                   "Report formats, comma separated subset of json,csv")
        ->delimiter(',');
    app.add_flag("--dump-paths", spec.dump_paths,
                 "Also write one CSV trace per simulated path");
    app.add_option("--alpha", spec.alpha, "Significance level");
    app.add_option("--threads", spec.threads,
                   "Worker threads (0 = hardware concurrency)");
    app.set_config("--config", "", "Flat key=value configuration file");

    std::size_t n_seeds = 200;
    std::uint64_t base_seed = 1002;
    double band = 0.015;
    CLI::App* cal = app.add_subcommand(
        "calibrate",
        "Measure the empirical rejection rate of every null-true test over "
        "fresh derived seeds");
    cal->add_option("--seeds", n_seeds, "Number of derived seeds")
        ->capture_default_str();
    cal->add_option("--base-seed", base_seed, "Seed the per-run seeds derive from")
        ->capture_default_str();
    cal->add_option("--band", band, "Allowed deviation of rate from alpha")
        ->capture_default_str();
    cal->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        spec.format_json = false;
        spec.format_csv = false;
        for (const auto& f : formats) {
            if (f == "json") {
                spec.format_json = true;
            } else if (f == "csv") {
                spec.format_csv = true;
            } else {
                throw skewprod::InvalidNumeric("format",
                                               "unknown format '" + f + "'");
            }
        }
        skewprod::validate(spec);
        if (cal->parsed()) {
            return run_calibrate(spec, base_seed, n_seeds, band);
        }
        return run_batch(spec);
    } catch (const skewprod::ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return kExitConfig;
    } catch (const skewprod::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
}
