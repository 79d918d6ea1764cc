#include "skewprod/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace skewprod {

namespace {

constexpr std::size_t kMinPaths = 30;
constexpr std::size_t kMinSamples = 30;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double z_critical(double alpha) {
    // Inverse of the two-sided tail by bisection; alpha is tiny and fixed, so
    // speed is irrelevant.
    double lo = 0.0, hi = 40.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (2.0 * (1.0 - normal_cdf(mid)) > alpha) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double stephens_lambda(double d, double n_eff) {
    const double rn = std::sqrt(n_eff);
    return (rn + 0.12 + 0.11 / rn) * d;
}

void check_same_grids(const std::vector<SamplePath<double>>& a,
                      const std::vector<SamplePath<double>>& b) {
    if (a.size() != b.size()) throw GridMismatch();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!(a[i].grid == b[i].grid)) throw GridMismatch();
    }
}

}  // namespace

QVEstimate realized_qv(const SamplePath<double>& path) {
    if (path.size() < 2) throw TooFewSamples(path.size(), 2);
    QVEstimate qv;
    qv.grid = path.grid;
    qv.values.resize(path.size());
    qv.values[0] = 0.0;
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        const double d = path.values[k + 1] - path.values[k];
        qv.values[k + 1] = qv.values[k] + d * d;
    }
    return qv;
}

QVEstimate realized_cross_qv(const SamplePath<double>& p1,
                             const SamplePath<double>& p2) {
    if (!(p1.grid == p2.grid)) throw GridMismatch();
    if (p1.size() < 2) throw TooFewSamples(p1.size(), 2);
    QVEstimate qv;
    qv.grid = p1.grid;
    qv.values.resize(p1.size());
    qv.values[0] = 0.0;
    for (std::size_t k = 0; k + 1 < p1.size(); ++k) {
        const double d1 = p1.values[k + 1] - p1.values[k];
        const double d2 = p2.values[k + 1] - p2.values[k];
        qv.values[k + 1] = qv.values[k] + d1 * d2;
    }
    return qv;
}

TestReport make_z_report(std::string name, double statistic, double null_scale,
                         double alpha) {
    TestReport r;
    r.name = std::move(name);
    r.statistic = statistic;
    r.null_scale = null_scale;
    r.tolerance = kNaN;
    if (null_scale > 0.0) {
        r.z_score = statistic / null_scale;
        r.p_value = 2.0 * (1.0 - normal_cdf(std::abs(r.z_score)));
    } else {
        r.z_score = statistic == 0.0
                        ? 0.0
                        : std::numeric_limits<double>::infinity() *
                              (statistic > 0.0 ? 1.0 : -1.0);
        r.p_value = statistic == 0.0 ? 1.0 : 0.0;
    }
    r.verdict = r.p_value > alpha;
    return r;
}

TestReport make_tolerance_report(std::string name, double statistic,
                                 double tolerance) {
    TestReport r;
    r.name = std::move(name);
    r.statistic = statistic;
    r.null_scale = tolerance;
    r.tolerance = tolerance;
    r.z_score = tolerance > 0.0 ? statistic / tolerance
                                : (statistic == 0.0 ? 0.0 : kNaN);
    r.p_value = kNaN;
    r.verdict = std::abs(statistic) <= tolerance;
    return r;
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double kolmogorov_q(double lambda) {
    if (lambda <= 0.0) return 1.0;
    if (lambda < 1.18) {
        // Theta-function form, fast-converging for small lambda.
        const double f = std::numbers::pi * std::numbers::pi /
                         (8.0 * lambda * lambda);
        double sum = 0.0;
        for (int k = 1; k <= 9; k += 2) sum += std::exp(-f * k * k);
        return 1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * sum;
    }
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += sign * term;
        sign = -sign;
        if (term < 1e-18) break;
    }
    return std::max(0.0, 2.0 * sum);
}

TestReport ks_one_sample_normal(std::vector<double> sample, double alpha,
                                std::string name) {
    if (sample.size() < kMinSamples) throw TooFewSamples(sample.size(), kMinSamples);
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double cdf = normal_cdf(sample[i]);
        d = std::max(d, (static_cast<double>(i) + 1.0) / n - cdf);
        d = std::max(d, cdf - static_cast<double>(i) / n);
    }
    TestReport r;
    r.name = std::move(name);
    r.statistic = d;
    r.null_scale = 1.0 / std::sqrt(n);
    r.z_score = d * std::sqrt(n);
    r.p_value = kolmogorov_q(stephens_lambda(d, n));
    r.tolerance = kNaN;
    r.verdict = r.p_value > alpha;
    return r;
}

TestReport ks_two_sample(std::vector<double> a, std::vector<double> b,
                         double alpha, std::string name) {
    if (a.size() < kMinSamples) throw TooFewSamples(a.size(), kMinSamples);
    if (b.size() < kMinSamples) throw TooFewSamples(b.size(), kMinSamples);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= v) ++i;
        while (j < b.size() && b[j] <= v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na -
                                 static_cast<double>(j) / nb));
    }
    const double n_eff = na * nb / (na + nb);
    TestReport r;
    r.name = std::move(name);
    r.statistic = d;
    r.null_scale = 1.0 / std::sqrt(n_eff);
    r.z_score = d * std::sqrt(n_eff);
    r.p_value = kolmogorov_q(stephens_lambda(d, n_eff));
    r.tolerance = kNaN;
    r.verdict = r.p_value > alpha;
    return r;
}

double path_slope(const SamplePath<double>& path) {
    if (path.size() < 2) throw TooFewSamples(path.size(), 2);
    const std::size_t n = path.size();
    const double t_mean = 0.5 * path.grid.horizon();
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = path.grid.time(k) - t_mean;
        sxx += t * t;
        sxy += t * (path.values[k] - path.values[0]);
    }
    return sxy / sxx;
}

TestReport drift_slope(const std::vector<SamplePath<double>>& ensemble,
                       double target, double alpha, std::string name) {
    if (ensemble.size() < kMinPaths) throw TooFewPaths(ensemble.size(), kMinPaths);
    const double n = static_cast<double>(ensemble.size());
    double mean = 0.0;
    std::vector<double> slopes;
    slopes.reserve(ensemble.size());
    for (const auto& path : ensemble) {
        slopes.push_back(path_slope(path));
        mean += slopes.back();
    }
    mean /= n;
    double var = 0.0;
    for (double s : slopes) var += (s - mean) * (s - mean);
    var /= (n - 1.0);
    return make_z_report(std::move(name), mean - target, std::sqrt(var / n),
                         alpha);
}

ConformanceReport bm_conformance_test(
    const std::vector<SamplePath<double>>& ensemble, double alpha,
    const std::string& name_prefix) {
    if (ensemble.size() < kMinPaths) throw TooFewPaths(ensemble.size(), kMinPaths);

    double worst_qv_z = 0.0;
    std::vector<double> pooled;
    for (const auto& path : ensemble) {
        const double m = path.grid.dt;
        const double s = path.grid.horizon();
        const double qv = realized_qv(path).total();
        const double z = (qv / s - 1.0) / std::sqrt(2.0 * m / s);
        worst_qv_z = std::max(worst_qv_z, std::abs(z));
        const double inv_sqrt_m = 1.0 / std::sqrt(m);
        for (std::size_t k = 0; k + 1 < path.size(); ++k) {
            pooled.push_back((path.values[k + 1] - path.values[k]) * inv_sqrt_m);
        }
    }

    ConformanceReport rep;
    // Per-path realized QV stays within 6 null scales of its horizon; the
    // scale sqrt(2 m / S) is the relative sd of realized variance.
    rep.qv = make_tolerance_report(name_prefix + "_qv", worst_qv_z, 6.0);
    rep.normality =
        ks_one_sample_normal(std::move(pooled), alpha, name_prefix + "_normality");
    rep.drift = drift_slope(ensemble, 0.0, alpha, name_prefix + "_drift");

    const int failed = (rep.qv.verdict ? 0 : 1) + (rep.normality.verdict ? 0 : 1) +
                       (rep.drift.verdict ? 0 : 1);
    rep.combined = make_tolerance_report(name_prefix + "_all",
                                         static_cast<double>(failed), 0.0);
    rep.combined.verdict = failed == 0;
    return rep;
}

namespace {

struct CrossAggregate {
    double mean_excess = 0.0;
    double pooled_scale = 0.0;
    double mean_predicted = 0.0;
};

CrossAggregate aggregate_cross(const std::vector<SamplePath<double>>& angles,
                               const std::vector<SamplePath<double>>& radials,
                               const std::vector<double>& predicted_terminal) {
    check_same_grids(angles, radials);
    if (angles.size() < kMinPaths) throw TooFewPaths(angles.size(), kMinPaths);
    if (!predicted_terminal.empty() && predicted_terminal.size() != angles.size()) {
        throw GridMismatch();
    }
    const double n = static_cast<double>(angles.size());
    CrossAggregate agg;
    double scale_sq = 0.0;
    for (std::size_t i = 0; i < angles.size(); ++i) {
        const auto& a = angles[i];
        const auto& r = radials[i];
        double cross = 0.0, quarticity = 0.0;
        for (std::size_t k = 0; k + 1 < a.size(); ++k) {
            const double d1 = a.values[k + 1] - a.values[k];
            const double d2 = r.values[k + 1] - r.values[k];
            cross += d1 * d2;
            quarticity += d1 * d1 * d2 * d2;
        }
        const double pred = predicted_terminal.empty() ? 0.0 : predicted_terminal[i];
        agg.mean_excess += cross - pred;
        agg.mean_predicted += pred;
        scale_sq += 2.0 * quarticity;
    }
    agg.mean_excess /= n;
    agg.mean_predicted /= n;
    agg.pooled_scale = std::sqrt(scale_sq) / n;
    return agg;
}

}  // namespace

TestReport independence_cross_test(
    const std::vector<SamplePath<double>>& angles,
    const std::vector<SamplePath<double>>& radials,
    const std::vector<double>& predicted_terminal, double alpha,
    std::string name) {
    const CrossAggregate agg =
        aggregate_cross(angles, radials, predicted_terminal);
    return make_z_report(std::move(name), agg.mean_excess, agg.pooled_scale,
                         alpha);
}

TestReport independence_cross_test_relative(
    const std::vector<SamplePath<double>>& angles,
    const std::vector<SamplePath<double>>& radials,
    const std::vector<double>& predicted_terminal, double alpha,
    double rel_tolerance, std::string name) {
    const CrossAggregate agg =
        aggregate_cross(angles, radials, predicted_terminal);
    if (agg.mean_predicted == 0.0) {
        throw InvalidNumeric("predicted", "relative comparison needs a nonzero prediction");
    }
    TestReport r = make_z_report(std::move(name),
                                 agg.mean_excess / agg.mean_predicted,
                                 agg.pooled_scale / agg.mean_predicted, alpha);
    r.tolerance = rel_tolerance;
    r.verdict = r.verdict && std::abs(r.statistic) <= rel_tolerance;
    return r;
}

std::vector<TestReport> TimechangeValidation::all() const {
    std::vector<TestReport> out{qv_matches_clock};
    for (auto& t : gamma.all()) out.push_back(t);
    out.push_back(cross_independent);
    return out;
}

TimechangeValidation timechange_validators(
    const std::vector<SamplePath<double>>& beta, const TimeChange& rho,
    const std::vector<SamplePath<double>>& independent, double alpha) {
    if (beta.size() < kMinPaths) throw TooFewPaths(beta.size(), kMinPaths);
    if (independent.size() != beta.size()) throw GridMismatch();

    const Grid& outer = rho.grid();
    const double fine_dt = beta.front().grid.dt;

    std::vector<std::size_t> lookup(outer.n_steps + 1);
    for (std::size_t k = 0; k <= outer.n_steps; ++k) {
        const double pos = rho.value(k) / fine_dt;
        const double idx = std::round(pos);
        if (std::abs(pos - idx) > 1e-9 || idx < 0.0 ||
            idx > static_cast<double>(beta.front().grid.n_steps)) {
            throw GridMismatch(
                "clock values do not land on the martingale's grid");
        }
        lookup[k] = static_cast<std::size_t>(idx);
    }

    const double rho_total = rho.total();
    double mean_qv = 0.0, var_qv = 0.0;
    std::vector<SamplePath<double>> gamma(beta.size());
    std::vector<double> qvs(beta.size());
    for (std::size_t i = 0; i < beta.size(); ++i) {
        if (!(beta[i].grid == beta.front().grid)) throw GridMismatch();

        SamplePath<double> eta;
        eta.grid = outer;
        eta.seed = beta[i].seed;
        eta.values.resize(outer.n_steps + 1);
        for (std::size_t k = 0; k <= outer.n_steps; ++k) {
            eta.values[k] = beta[i].values[lookup[k]];
        }
        qvs[i] = realized_qv(eta).total();
        mean_qv += qvs[i];

        SamplePath<double>& g = gamma[i];
        g.grid = outer;
        g.seed = beta[i].seed;
        g.values.resize(outer.n_steps + 1);
        g.values[0] = 0.0;
        for (std::size_t k = 0; k < outer.n_steps; ++k) {
            const double j_slope = (rho.value(k + 1) - rho.value(k)) / outer.dt;
            if (!(j_slope > 0.0)) {
                throw FlatClock("clock slope vanishes; rescaling undefined", i, k);
            }
            g.values[k + 1] = g.values[k] + (eta.values[k + 1] - eta.values[k]) /
                                                std::sqrt(j_slope);
        }
    }
    const double n = static_cast<double>(beta.size());
    mean_qv /= n;
    for (double q : qvs) var_qv += (q - mean_qv) * (q - mean_qv);
    var_qv /= (n - 1.0);

    TimechangeValidation out;
    out.qv_matches_clock = make_tolerance_report(
        "timechange_qv_vs_clock", mean_qv / rho_total - 1.0, 0.05);
    // Keep the sampling-noise scale visible next to the tolerance verdict.
    out.qv_matches_clock.null_scale = std::sqrt(var_qv / n) / rho_total;
    out.qv_matches_clock.z_score =
        out.qv_matches_clock.null_scale > 0.0
            ? out.qv_matches_clock.statistic / out.qv_matches_clock.null_scale
            : 0.0;

    out.gamma = bm_conformance_test(gamma, alpha, "timechange_gamma");

    std::vector<double> no_prediction;
    out.cross_independent = independence_cross_test(
        gamma, independent, no_prediction, alpha, "timechange_cross_independent");
    return out;
}

}  // namespace skewprod
