#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "skewprod/report.hpp"
#include "skewprod/rng.hpp"
#include "skewprod/suites.hpp"

using namespace skewprod;

namespace {

const TestReport& find_test(const SuiteResult& r, const std::string& name) {
    for (const auto& t : r.tests) {
        if (t.name == name) return t;
    }
    REQUIRE_MESSAGE(false, "missing test ", name);
    static TestReport dummy;
    return dummy;
}

RunSpec smoke_spec(std::size_t n_paths) {
    RunSpec spec;
    spec.n_paths = n_paths;
    return spec;
}

}  // namespace

TEST_CASE("scenario names round trip") {
    for (auto s : {Scenario::planar_bm, Scenario::rotated_bm,
                   Scenario::matrix_diffusion}) {
        CHECK(scenario_from_name(scenario_name(s)) == s);
    }
    CHECK_THROWS_AS(scenario_from_name("brownian"), UnknownScenario&);
}

TEST_CASE("planar scenarios start where told and reject the origin") {
    const Grid g(0.01, 50);
    const SamplePath<Vec2> p = planar_bm_path({2.0, -1.0}, g, 77);
    CHECK(p.values[0].x == 2.0);
    CHECK(p.values[0].y == -1.0);
    for (const Vec2& v : p.values) CHECK(all_finite(v));
    CHECK_THROWS_AS(planar_bm_path({0.0, 0.0}, g, 77), OriginStart&);

    // the rotated path is the plain one pushed through rotation by t
    const SamplePath<Vec2> plain = planar_bm_path({1.0, 0.0}, g, 88);
    const SamplePath<Vec2> rot = rotated_bm_path({1.0, 0.0}, g, 88);
    for (std::size_t k = 0; k <= g.n_steps; ++k) {
        const double t = g.time(k);
        const double ct = std::cos(t), st = std::sin(t);
        CHECK(rot.values[k].x ==
              doctest::Approx(ct * plain.values[k].x - st * plain.values[k].y)
                  .epsilon(1e-12));
        CHECK(rot.values[k].y ==
              doctest::Approx(st * plain.values[k].x + ct * plain.values[k].y)
                  .epsilon(1e-12));
    }
}

TEST_CASE("matrix diffusion single euler step") {
    const double h = 0.01;
    WienerBundle noise;
    noise.grid = Grid(h, 1);
    noise.dim = 4;
    noise.increments = {h, 0.0, 0.0, h};
    const SamplePath<Mat2> path = euler_maruyama(
        [](const Mat2&) { return Mat2(); },
        [](const Mat2& x, const double* dw) {
            const double f = f_coeff(x);
            return Mat2(f * dw[0], f * dw[1], f * dw[2], f * dw[3]);
        },
        Mat2::identity(), noise.grid, noise);
    CHECK(path.values[1].a == doctest::Approx(1.0 + h / 3.0).epsilon(1e-14));
    CHECK(path.values[1].d == doctest::Approx(1.0 + h / 3.0).epsilon(1e-14));
    CHECK(path.values[1].b == 0.0);
    CHECK(path.values[1].c == 0.0);

    CHECK_THROWS_AS(
        matrix_diffusion_path(Mat2(1.0, 0.0, 0.0, -1.0), Grid(h, 1), 3),
        NonPositiveDeterminantStart&);
}

TEST_CASE("matrix ensemble accounts for every path") {
    ScenarioConfig config;
    config.name = Scenario::matrix_diffusion;
    config.grid = Grid(0.01, 100);
    config.n_paths = 40;
    config.seed = 4242;
    const MatrixEnsemble e = matrix_diffusion(config);
    CHECK(e.paths.size() + e.crossed_paths.size() == config.n_paths);
    for (std::size_t idx : e.crossed_paths) CHECK(idx < config.n_paths);
    for (const auto& p : e.paths) {
        for (const Mat2& m : p.values) CHECK(all_finite(m));
    }
}

TEST_CASE("ensemble keys are per-suite and stable") {
    const std::uint64_t k1 = primary_ensemble_key("example1", 55);
    CHECK(k1 == primary_ensemble_key("example1", 55));
    CHECK(k1 != primary_ensemble_key("example2", 55));
    CHECK(k1 != primary_ensemble_key("example3", 55));
    CHECK(k1 != primary_ensemble_key("example1", 56));
    CHECK_THROWS_AS(primary_ensemble_key("all", 55), ConfigError&);
}

TEST_CASE("suite one matches its expected polarity at reduced scale") {
    const SuiteResult r = run_example1(smoke_spec(128));
    CHECK(r.suite == "example1");
    CHECK(r.scenario == "planar_bm");
    CHECK(r.paths_used == 128);
    CHECK(r.det_crossings.empty());
    CHECK(r.tests.size() == 9);
    CHECK(find_test(r, "dds_conformance_all").verdict);
    CHECK(find_test(r, "independence_theta_logr").verdict);
    CHECK(r.all_as_expected());
}

TEST_CASE("suite two shows real angular drift at reduced scale") {
    const SuiteResult r = run_example2(smoke_spec(128));
    const TestReport& vs0 = find_test(r, "angle_drift_vs0");
    CHECK_FALSE(vs0.verdict);
    CHECK(vs0.expected == "fail");
    CHECK(std::abs(vs0.z_score) > 5.0);
    CHECK(find_test(r, "angle_drift_vs1").verdict);
    CHECK_FALSE(find_test(r, "dds_conformance_drift").verdict);
    CHECK(find_test(r, "dds_conformance_qv").verdict);
    CHECK(r.all_as_expected());
}

TEST_CASE("suite three shares noise between angle and triangular part") {
    const SuiteResult r = run_example3(smoke_spec(128));
    CHECK(r.det_crossings.empty());
    const TestReport& zero = find_test(r, "independence_theta_t12_zero");
    CHECK_FALSE(zero.verdict);
    CHECK(zero.expected == "fail");
    CHECK(zero.z_score > 20.0);
    CHECK(find_test(r, "independence_theta_t12_predicted").verdict);
    CHECK(find_test(r, "ito_qv_det").verdict);
    CHECK(find_test(r, "theta_qv_vs_clock").verdict);
    CHECK(find_test(r, "dds_conformance_all").verdict);
    CHECK(r.all_as_expected());
}

TEST_CASE("reports are byte-identical across thread counts") {
    RunSpec spec = smoke_spec(48);
    spec.dt = 5e-3;
    spec.threads = 1;
    const std::string serial = report_json_string(spec, run_suites(spec));
    spec.threads = 4;
    RunSpec reference = smoke_spec(48);
    reference.dt = 5e-3;
    reference.threads = 1;
    // params deliberately exclude the thread count
    CHECK(report_json_string(reference, run_suites(spec)) == serial);
}

TEST_CASE("time-change validators pass on the quarter clock") {
    RunSpec spec = smoke_spec(64);
    const TimechangeValidation v = run_timechange_suite(spec);
    CHECK(v.qv_matches_clock.verdict);
    CHECK(std::abs(v.qv_matches_clock.statistic) <= 0.05);
    CHECK(v.gamma.combined.verdict);
    CHECK(v.cross_independent.verdict);
    CHECK(v.all().size() == 6);
}

TEST_CASE("suite result polarity accounting") {
    SuiteResult r;
    r.tests.push_back(make_z_report("fine", 0.1, 1.0, 0.01));
    TestReport bad = make_z_report("broken", 9.0, 1.0, 0.01);
    bad.expected = "fail";
    r.tests.push_back(bad);
    CHECK(r.all_as_expected());
    r.tests[1].expected = "pass";
    CHECK_FALSE(r.all_as_expected());
}

TEST_CASE("calibration bookkeeping") {
    CalibrationResult c;
    c.n_seeds = 200;
    c.alpha = 0.01;
    c.entries = {{"a", 2}, {"b", 5}};
    CHECK(c.within_band(0.015));
    c.entries[1].rejections = 6;
    CHECK_FALSE(c.within_band(0.015));

    RunSpec spec = smoke_spec(48);
    spec.dt = 2e-3;
    const CalibrationResult smoke = run_calibration(spec, 1002, 4);
    CHECK(smoke.n_seeds == 4);
    CHECK(smoke.alpha == 0.01);
    CHECK_FALSE(smoke.entries.empty());
    bool found = false;
    for (const auto& e : smoke.entries) {
        CHECK(e.rejections <= 4);
        found = found || e.name == "example1/independence_theta_logr";
    }
    CHECK(found);
    CHECK_THROWS_AS(run_calibration(spec, 1002, 0), ConfigError&);
}
