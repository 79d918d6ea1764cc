#include "skewprod/suites.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <utility>

#include "skewprod/decompose.hpp"
#include "skewprod/rng.hpp"

namespace skewprod {

namespace {

constexpr std::uint64_t kTagExample1 = 1;
constexpr std::uint64_t kTagExample2 = 2;
constexpr std::uint64_t kTagExample3 = 3;
constexpr std::uint64_t kTagTimechange = 4;
// Within a suite: the analyzed ensemble vs the rotated-start ensemble used by
// the distribution-equality checks.
constexpr std::uint64_t kTagPrimary = 1;
constexpr std::uint64_t kTagShifted = 2;

// Riemann-sum error floor for pathwise identities; the relative gap between
// realized and predicted variation shrinks like sqrt(dt).
constexpr double kItoTolFactor = 5.0;

const Vec2 kPlanarStart{1.0, 0.0};

std::uint64_t suite_tag(const std::string& suite) {
    if (suite == "example1") return kTagExample1;
    if (suite == "example2") return kTagExample2;
    if (suite == "example3") return kTagExample3;
    throw InvalidNumeric("suite", "unknown suite '" + suite + "'");
}

TestReport expect_fail(TestReport t) {
    t.expected = "fail";
    return t;
}

SamplePath<double> make_scalar_path(const Grid& grid, std::uint64_t seed,
                                    std::vector<double> values) {
    SamplePath<double> p;
    p.grid = grid;
    p.seed = seed;
    p.values = std::move(values);
    return p;
}

Vec2 apply(const Mat2& m, const Vec2& v) {
    return Vec2{m.a * v.x + m.b * v.y, m.c * v.x + m.d * v.y};
}

void track_extreme(double& worst, double v) {
    if (std::abs(v) > std::abs(worst)) worst = v;
}

struct Probe {
    std::size_t index;
    std::string label;
};

// Distributions are compared at mid-horizon and at the horizon.
std::vector<Probe> probe_indices(const Grid& grid) {
    std::vector<Probe> out;
    for (std::size_t idx : {grid.n_steps / 2, grid.n_steps}) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%g", grid.time(idx));
        out.push_back({idx, std::string("_t") + buf});
    }
    return out;
}

// Rotation-equivariance check for the planar scenarios: a fresh ensemble is
// started from k * x0, mapped back through k^{-1}, and its marginals of x1
// and |x| are compared against the primary ensemble by two-sample KS.
std::vector<TestReport> planar_equivariance(
    Scenario scenario, const Grid& grid, std::size_t n_paths, unsigned threads,
    std::uint64_t ensemble_key, const std::vector<SamplePath<Vec2>>& base,
    double alpha) {
    const Rotation k(std::numbers::pi / 3.0);
    const Vec2 shifted_start = apply(k.matrix(), kPlanarStart);
    const Mat2 k_inv = k.inverse().matrix();
    const std::vector<Probe> probes = probe_indices(grid);

    std::vector<std::vector<double>> base_x1(probes.size()), base_r(probes.size());
    for (const auto& path : base) {
        for (std::size_t i = 0; i < probes.size(); ++i) {
            const Vec2& v = path.values[probes[i].index];
            base_x1[i].push_back(v.x);
            base_r[i].push_back(std::hypot(v.x, v.y));
        }
    }

    std::vector<std::vector<double>> shift_x1(probes.size()), shift_r(probes.size());
    for (auto& v : shift_x1) v.resize(n_paths);
    for (auto& v : shift_r) v.resize(n_paths);
    parallel_for_paths(n_paths, threads, [&](std::size_t p) {
        const std::uint64_t key = derive_key(ensemble_key, p);
        const SamplePath<Vec2> path =
            scenario == Scenario::planar_bm
                ? planar_bm_path(shifted_start, grid, key, p)
                : rotated_bm_path(shifted_start, grid, key, p);
        for (std::size_t i = 0; i < probes.size(); ++i) {
            const Vec2 v = apply(k_inv, path.values[probes[i].index]);
            shift_x1[i][p] = v.x;
            shift_r[i][p] = std::hypot(v.x, v.y);
        }
    });

    std::vector<TestReport> out;
    for (std::size_t i = 0; i < probes.size(); ++i) {
        out.push_back(ks_two_sample(base_x1[i], shift_x1[i], alpha,
                                    "equivariance_x1" + probes[i].label));
        out.push_back(ks_two_sample(base_r[i], shift_r[i], alpha,
                                    "equivariance_r" + probes[i].label));
    }
    return out;
}

// Same check for the matrix scenario, comparing x11 and det of k^{-1} * path
// against the primary ensemble. Shifted paths that lose det > 0 are dropped,
// mirroring the primary ensemble's policy.
std::vector<TestReport> matrix_equivariance(
    const Grid& grid, std::size_t n_paths, unsigned threads,
    std::uint64_t ensemble_key, const std::vector<SamplePath<Mat2>>& base,
    double alpha) {
    const Rotation k(std::numbers::pi / 3.0);
    const Mat2 shifted_start = k.matrix();
    const Mat2 k_inv = k.inverse().matrix();
    const std::vector<Probe> probes = probe_indices(grid);

    std::vector<std::vector<double>> base_x11(probes.size()),
        base_det(probes.size());
    for (const auto& path : base) {
        for (std::size_t i = 0; i < probes.size(); ++i) {
            const Mat2& m = path.values[probes[i].index];
            base_x11[i].push_back(m.a);
            base_det[i].push_back(m.det());
        }
    }

    std::vector<char> ok(n_paths, 0);
    std::vector<std::vector<double>> shift_x11(probes.size()),
        shift_det(probes.size());
    for (auto& v : shift_x11) v.resize(n_paths);
    for (auto& v : shift_det) v.resize(n_paths);
    parallel_for_paths(n_paths, threads, [&](std::size_t p) {
        SamplePath<Mat2> path;
        try {
            path = matrix_diffusion_path(shifted_start, grid,
                                         derive_key(ensemble_key, p), p);
        } catch (const DeterminantCrossedZero&) {
            return;
        }
        for (std::size_t i = 0; i < probes.size(); ++i) {
            const Mat2 m = k_inv * path.values[probes[i].index];
            shift_x11[i][p] = m.a;
            shift_det[i][p] = m.det();
        }
        ok[p] = 1;
    });

    std::vector<TestReport> out;
    for (std::size_t i = 0; i < probes.size(); ++i) {
        std::vector<double> sx, sd;
        sx.reserve(n_paths);
        sd.reserve(n_paths);
        for (std::size_t p = 0; p < n_paths; ++p) {
            if (!ok[p]) continue;
            sx.push_back(shift_x11[i][p]);
            sd.push_back(shift_det[i][p]);
        }
        out.push_back(ks_two_sample(base_x11[i], sx, alpha,
                                    "equivariance_x11" + probes[i].label));
        out.push_back(ks_two_sample(base_det[i], sd, alpha,
                                    "equivariance_det" + probes[i].label));
    }
    return out;
}

struct PlanarPipelines {
    std::vector<SamplePath<Vec2>> paths;
    std::vector<SamplePath<double>> angles;
    std::vector<SamplePath<double>> log_radii;
    std::vector<SamplePath<double>> drivers;
};

// Simulate, decompose, time-change and extract the angular driver for every
// path of a planar scenario.
PlanarPipelines planar_pipelines(Scenario scenario, const Grid& grid,
                                 std::size_t n_paths, unsigned threads,
                                 std::uint64_t ensemble_key) {
    PlanarPipelines out;
    out.paths.resize(n_paths);
    out.angles.resize(n_paths);
    out.log_radii.resize(n_paths);
    out.drivers.resize(n_paths);
    parallel_for_paths(n_paths, threads, [&](std::size_t p) {
        const std::uint64_t key = derive_key(ensemble_key, p);
        out.paths[p] = scenario == Scenario::planar_bm
                           ? planar_bm_path(kPlanarStart, grid, key, p)
                           : rotated_bm_path(kPlanarStart, grid, key, p);
        PlanarDecomposition dec = polar_decompose(out.paths[p], p);
        const TimeChange tau = time_change_planar(dec.radius, p);
        out.drivers[p] = dds_extract(dec.angle, tau, p);
        std::vector<double> lr(dec.radius.size());
        for (std::size_t i = 0; i < lr.size(); ++i) {
            lr[i] = std::log(dec.radius.values[i]);
        }
        out.log_radii[p] = make_scalar_path(grid, dec.radius.seed, std::move(lr));
        out.angles[p] = std::move(dec.angle);
    });
    return out;
}

}  // namespace

bool SuiteResult::all_as_expected() const {
    for (const auto& t : tests) {
        if (!t.as_expected()) return false;
    }
    return true;
}

std::uint64_t primary_ensemble_key(const std::string& suite,
                                   std::uint64_t seed) {
    return derive_key(derive_key(seed, suite_tag(suite)), kTagPrimary);
}

SuiteResult run_example1(const RunSpec& spec) {
    SuiteResult result;
    result.suite = "example1";
    result.scenario = scenario_name(Scenario::planar_bm);
    const Grid grid = spec.grid();
    const unsigned threads = resolve_threads(spec.threads);
    const std::uint64_t base_key = derive_key(spec.seed, kTagExample1);

    PlanarPipelines pipe =
        planar_pipelines(Scenario::planar_bm, grid, spec.n_paths, threads,
                         derive_key(base_key, kTagPrimary));
    result.paths_used = spec.n_paths;

    const ConformanceReport conf =
        bm_conformance_test(pipe.drivers, spec.alpha, "dds_conformance");
    for (auto& t : conf.all()) result.tests.push_back(t);

    result.tests.push_back(independence_cross_test(
        pipe.angles, pipe.log_radii, {}, spec.alpha, "independence_theta_logr"));

    for (auto& t :
         planar_equivariance(Scenario::planar_bm, grid, spec.n_paths, threads,
                             derive_key(base_key, kTagShifted), pipe.paths,
                             spec.alpha)) {
        result.tests.push_back(std::move(t));
    }
    return result;
}

SuiteResult run_example2(const RunSpec& spec) {
    SuiteResult result;
    result.suite = "example2";
    result.scenario = scenario_name(Scenario::rotated_bm);
    const Grid grid = spec.grid();
    const unsigned threads = resolve_threads(spec.threads);
    const std::uint64_t base_key = derive_key(spec.seed, kTagExample2);

    PlanarPipelines pipe =
        planar_pipelines(Scenario::rotated_bm, grid, spec.n_paths, threads,
                         derive_key(base_key, kTagPrimary));
    result.paths_used = spec.n_paths;

    // The unit-rate rotation shows up as angular drift, which survives the
    // time change, so the extracted process is not a driftless Brownian
    // motion: that certifies the counterexample.
    const ConformanceReport conf =
        bm_conformance_test(pipe.drivers, spec.alpha, "dds_conformance");
    result.tests.push_back(conf.qv);
    result.tests.push_back(expect_fail(conf.normality));
    result.tests.push_back(expect_fail(conf.drift));
    result.tests.push_back(expect_fail(conf.combined));

    result.tests.push_back(expect_fail(
        drift_slope(pipe.angles, 0.0, spec.alpha, "angle_drift_vs0")));
    result.tests.push_back(
        drift_slope(pipe.angles, 1.0, spec.alpha, "angle_drift_vs1"));

    for (auto& t :
         planar_equivariance(Scenario::rotated_bm, grid, spec.n_paths, threads,
                             derive_key(base_key, kTagShifted), pipe.paths,
                             spec.alpha)) {
        result.tests.push_back(std::move(t));
    }
    return result;
}

SuiteResult run_example3(const RunSpec& spec) {
    SuiteResult result;
    result.suite = "example3";
    result.scenario = scenario_name(Scenario::matrix_diffusion);
    const Grid grid = spec.grid();
    const unsigned threads = resolve_threads(spec.threads);
    const std::uint64_t base_key = derive_key(spec.seed, kTagExample3);
    const std::uint64_t primary = derive_key(base_key, kTagPrimary);
    const std::size_t n = spec.n_paths;
    const double ito_tol = kItoTolFactor * std::sqrt(grid.dt);

    struct Slot {
        bool ok = false;
        SamplePath<Mat2> path;
        SamplePath<double> angle;
        SamplePath<double> t12;
        SamplePath<double> driver;
        double pred_t12_cross = 0.0;
        double rel_det = 0.0, rel_tr = 0.0, rel_cross = 0.0;
        double rel_theta = 0.0, rel_logt11 = 0.0;
    };
    std::vector<Slot> slots(n);

    parallel_for_paths(n, threads, [&](std::size_t p) {
        Slot& s = slots[p];
        try {
            s.path = matrix_diffusion_path(Mat2::identity(), grid,
                                           derive_key(primary, p), p);
        } catch (const DeterminantCrossedZero&) {
            return;
        }
        MatrixDecomposition dec = qr_path(s.path, p);
        const TimeChange clock = time_change_matrix(dec.radial, p);

        const std::size_t m = s.path.size();
        std::vector<double> t12_v(m);
        double pred_det = 0.0, pred_tr = 0.0, pred_cross = 0.0, pred_t12 = 0.0;
        double qv_det = 0.0, qv_tr = 0.0, qv_cross = 0.0;
        double qv_theta = 0.0, qv_logt11 = 0.0;
        for (std::size_t k = 0; k < m; ++k) t12_v[k] = dec.radial.values[k].t12;
        for (std::size_t k = 0; k + 1 < m; ++k) {
            const Mat2& x = s.path.values[k];
            const UpperTri2& T = dec.radial.values[k];
            const double f2 = f_coeff(x) * f_coeff(x);
            const double det = x.det();
            const double tr = x.gram_trace();
            pred_det += tr * f2 * grid.dt;
            pred_tr += 4.0 * tr * f2 * grid.dt;
            pred_cross += 4.0 * det * f2 * grid.dt;
            pred_t12 += T.t22 * f2 / (T.t11 * T.t11) * grid.dt;

            const Mat2& y = s.path.values[k + 1];
            const double d_det = y.det() - det;
            const double d_tr = y.gram_trace() - tr;
            qv_det += d_det * d_det;
            qv_tr += d_tr * d_tr;
            qv_cross += d_det * d_tr;
            const double d_theta = dec.angle.values[k + 1] - dec.angle.values[k];
            qv_theta += d_theta * d_theta;
            const double d_log =
                std::log(dec.radial.values[k + 1].t11) - std::log(T.t11);
            qv_logt11 += d_log * d_log;
        }
        const double clock_total = clock.total();
        s.rel_det = qv_det / pred_det - 1.0;
        s.rel_tr = qv_tr / pred_tr - 1.0;
        s.rel_cross = qv_cross / pred_cross - 1.0;
        s.rel_theta = qv_theta / clock_total - 1.0;
        s.rel_logt11 = qv_logt11 / clock_total - 1.0;
        s.pred_t12_cross = pred_t12;

        s.driver = dds_extract(dec.angle, clock, p);
        s.t12 = make_scalar_path(grid, dec.radial.seed, std::move(t12_v));
        s.angle = std::move(dec.angle);
        s.ok = true;
    });

    std::vector<SamplePath<Mat2>> survivors;
    std::vector<SamplePath<double>> angles, t12s, drivers;
    std::vector<double> preds;
    double worst_det = 0.0, worst_tr = 0.0, worst_cross = 0.0;
    double worst_theta = 0.0, worst_logt11 = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
        Slot& s = slots[p];
        if (!s.ok) {
            result.det_crossings.push_back(p);
            continue;
        }
        track_extreme(worst_det, s.rel_det);
        track_extreme(worst_tr, s.rel_tr);
        track_extreme(worst_cross, s.rel_cross);
        track_extreme(worst_theta, s.rel_theta);
        track_extreme(worst_logt11, s.rel_logt11);
        survivors.push_back(std::move(s.path));
        angles.push_back(std::move(s.angle));
        t12s.push_back(std::move(s.t12));
        drivers.push_back(std::move(s.driver));
        preds.push_back(s.pred_t12_cross);
    }
    result.paths_used = survivors.size();

    result.tests.push_back(make_tolerance_report(
        "det_positive",
        static_cast<double>(result.det_crossings.size()), 0.0));

    // Pathwise realized-vs-predicted variation of det, tr(x'x) and their
    // cross term; worst relative gap over the ensemble.
    result.tests.push_back(
        make_tolerance_report("ito_qv_det", worst_det, ito_tol));
    result.tests.push_back(make_tolerance_report("ito_qv_tr", worst_tr, ito_tol));
    result.tests.push_back(
        make_tolerance_report("ito_cross_det_tr", worst_cross, ito_tol));

    // The angle's QV and log T11's QV both equal the radial clock.
    result.tests.push_back(
        make_tolerance_report("theta_qv_vs_clock", worst_theta, ito_tol));
    result.tests.push_back(
        make_tolerance_report("logt11_qv_vs_clock", worst_logt11, ito_tol));

    const ConformanceReport conf =
        bm_conformance_test(drivers, spec.alpha, "dds_conformance");
    for (auto& t : conf.all()) result.tests.push_back(t);

    // The extracted driver is Brownian, yet it is not independent of the
    // radial part: [theta, T12] is nonzero and matches the predicted
    // integral, which is what blocks a true skew-product here.
    result.tests.push_back(expect_fail(independence_cross_test(
        angles, t12s, {}, spec.alpha, "independence_theta_t12_zero")));
    result.tests.push_back(independence_cross_test_relative(
        angles, t12s, preds, spec.alpha, ito_tol,
        "independence_theta_t12_predicted"));

    for (auto& t : matrix_equivariance(grid, n, threads,
                                       derive_key(base_key, kTagShifted),
                                       survivors, spec.alpha)) {
        result.tests.push_back(std::move(t));
    }
    return result;
}

SuiteResult run_suite(const std::string& name, const RunSpec& spec) {
    if (name == "example1") return run_example1(spec);
    if (name == "example2") return run_example2(spec);
    if (name == "example3") return run_example3(spec);
    throw InvalidNumeric("suite", "unknown suite '" + name + "'");
}

std::vector<SuiteResult> run_suites(const RunSpec& spec) {
    std::vector<SuiteResult> out;
    for (const auto& name : suites_to_run(spec)) {
        out.push_back(run_suite(name, spec));
    }
    return out;
}

TimechangeValidation run_timechange_suite(const RunSpec& spec) {
    const Grid outer = spec.grid();
    // The martingale being time-changed lives on a grid four times finer, so
    // every clock value rho(t_k) = t_k / 4 lands exactly on its knots.
    const Grid fine(outer.dt / 4.0, outer.n_steps);
    const unsigned threads = resolve_threads(spec.threads);
    const std::uint64_t base_key = derive_key(spec.seed, kTagTimechange);
    const std::uint64_t beta_key = derive_key(base_key, kTagPrimary);
    const std::uint64_t indep_key = derive_key(base_key, kTagShifted);
    const std::size_t n = spec.n_paths;

    std::vector<double> rho_values(outer.n_steps + 1);
    for (std::size_t k = 0; k <= outer.n_steps; ++k) {
        rho_values[k] = 0.25 * outer.time(k);
    }
    const TimeChange rho(outer, std::move(rho_values));

    std::vector<SamplePath<double>> beta(n), independent(n);
    parallel_for_paths(n, threads, [&](std::size_t p) {
        beta[p] = scalar_bm_path(fine, derive_key(beta_key, p));
        independent[p] = scalar_bm_path(outer, derive_key(indep_key, p));
    });
    return timechange_validators(beta, rho, independent, spec.alpha);
}

bool CalibrationResult::within_band(double band) const {
    if (n_seeds == 0 || entries.empty()) return false;
    for (const auto& e : entries) {
        const double rate =
            static_cast<double>(e.rejections) / static_cast<double>(n_seeds);
        if (std::abs(rate - alpha) > band + 1e-12) return false;
    }
    return true;
}

CalibrationResult run_calibration(const RunSpec& spec, std::uint64_t base_seed,
                                  std::size_t n_seeds) {
    if (n_seeds < 1) throw InvalidNumeric("seeds", "must be at least 1");
    CalibrationResult result;
    result.n_seeds = n_seeds;
    result.alpha = spec.alpha;

    // Only significance tests whose null hypothesis holds contribute to the
    // size estimate; tolerance checks carry no alpha-level rejection rate and
    // the deliberate counterexample tests reject by design.
    const auto null_true = [](const TestReport& t) {
        return !std::isnan(t.p_value) && t.name != "independence_theta_t12_zero";
    };

    auto tally = [&](const std::string& prefix,
                     const std::vector<TestReport>& tests) {
        for (const auto& t : tests) {
            if (!null_true(t)) continue;
            const std::string key = prefix + "/" + t.name;
            CalibrationEntry* entry = nullptr;
            for (auto& e : result.entries) {
                if (e.name == key) {
                    entry = &e;
                    break;
                }
            }
            if (!entry) {
                result.entries.push_back({key, 0});
                entry = &result.entries.back();
            }
            if (!t.verdict) ++entry->rejections;
        }
    };

    for (std::size_t s = 0; s < n_seeds; ++s) {
        RunSpec seeded = spec;
        seeded.seed = derive_key(base_seed, s);
        tally("example1", run_example1(seeded).tests);
        tally("example3", run_example3(seeded).tests);
        tally("timechange", run_timechange_suite(seeded).all());
    }
    return result;
}

}  // namespace skewprod
