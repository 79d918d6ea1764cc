#include "skewprod/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "skewprod/rng.hpp"

namespace skewprod {

namespace {
constexpr double kFlatClockEps = 1e-12;
constexpr std::size_t kFlatClockSpan = 11;  // strictly more than 10 steps
}  // namespace

TimeChange::TimeChange(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.n_steps + 1) throw GridMismatch();
    if (values_.front() != 0.0) throw Error("clock must start at 0");
    for (std::size_t k = 0; k + 1 < values_.size(); ++k) {
        if (!std::isfinite(values_[k + 1]) || values_[k + 1] < values_[k]) {
            throw Error("clock must be finite and nondecreasing");
        }
    }
}

double TimeChange::inverse(double s) const {
    if (s <= 0.0) return 0.0;
    if (s >= total()) return grid_.horizon();
    // First knot with value >= s; the cell left of it brackets s.
    const auto it = std::lower_bound(values_.begin(), values_.end(), s);
    const std::size_t hi = static_cast<std::size_t>(it - values_.begin());
    const std::size_t lo = hi - 1;
    const double span = values_[hi] - values_[lo];
    if (span <= 0.0) return grid_.time(hi);
    return grid_.time(lo) + grid_.dt * (s - values_[lo]) / span;
}

std::vector<double> unwrap_angles(const std::vector<double>& raw,
                                  std::size_t path_index) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    std::vector<double> out(raw.size());
    if (raw.empty()) return out;
    out[0] = raw[0];
    for (std::size_t k = 1; k < raw.size(); ++k) {
        double d = raw[k] - raw[k - 1];
        d -= two_pi * std::round(d / two_pi);
        if (std::abs(d) >= std::numbers::pi) {
            throw UnwrapJump("angle step reached pi; grid too coarse", path_index, k);
        }
        out[k] = out[k - 1] + d;
    }
    return out;
}

PlanarDecomposition polar_decompose(const SamplePath<Vec2>& path,
                                    std::size_t path_index) {
    PlanarDecomposition dec;
    dec.radius.grid = dec.angle.grid = path.grid;
    dec.radius.seed = dec.angle.seed = path.seed;
    dec.radius.values.reserve(path.size());
    std::vector<double> raw;
    raw.reserve(path.size());
    for (std::size_t k = 0; k < path.size(); ++k) {
        const Vec2& v = path.values[k];
        const double r = v.norm();
        if (r == 0.0) throw OriginHit("path hit the origin", path_index, k);
        dec.radius.values.push_back(r);
        raw.push_back(std::atan2(v.y, v.x));
    }
    dec.angle.values = unwrap_angles(raw, path_index);
    return dec;
}

MatrixDecomposition qr_path(const SamplePath<Mat2>& path,
                            std::size_t path_index) {
    MatrixDecomposition dec;
    dec.radial.grid = dec.angle.grid = path.grid;
    dec.radial.seed = dec.angle.seed = path.seed;
    dec.radial.values.reserve(path.size());
    std::vector<double> raw;
    raw.reserve(path.size());
    for (std::size_t k = 0; k < path.size(); ++k) {
        try {
            auto [q, t] = qr_decompose(path.values[k]);
            dec.radial.values.push_back(t);
            raw.push_back(q.angle);
        } catch (const NonPositiveDeterminant&) {
            throw NonPositiveDeterminant("determinant not positive along path",
                                         path_index, k);
        }
    }
    dec.angle.values = unwrap_angles(raw, path_index);
    return dec;
}

TimeChange time_change_planar(const SamplePath<double>& radius,
                              std::size_t path_index) {
    std::vector<double> values(radius.size());
    values[0] = 0.0;
    for (std::size_t k = 0; k + 1 < radius.size(); ++k) {
        const double r = radius.values[k];
        if (r <= 0.0) throw OriginHit("radius not positive", path_index, k);
        values[k + 1] = values[k] + radius.grid.dt / (r * r);
    }
    return TimeChange(radius.grid, std::move(values));
}

TimeChange time_change_matrix(const SamplePath<UpperTri2>& radial,
                              std::size_t path_index) {
    std::vector<double> values(radial.size());
    values[0] = 0.0;
    for (std::size_t k = 0; k + 1 < radial.size(); ++k) {
        const UpperTri2& t = radial.values[k];
        if (t.t11 <= 0.0) {
            throw NonPositiveDiagonal("t11 not positive", path_index, k);
        }
        const double rate = f_coeff(t.matrix()) / t.t11;
        values[k + 1] = values[k] + radial.grid.dt * rate * rate;
    }
    return TimeChange(radial.grid, std::move(values));
}

SamplePath<double> dds_extract(const SamplePath<double>& angle,
                               const TimeChange& tc, std::size_t path_index) {
    if (!(angle.grid == tc.grid())) throw GridMismatch();
    const std::vector<double>& knots = tc.values();
    const std::vector<double>& theta = angle.values;
    const std::size_t n = angle.grid.n_steps;

    if (n + 1 >= kFlatClockSpan + 1) {
        for (std::size_t k = 0; k + kFlatClockSpan < knots.size(); ++k) {
            if (knots[k + kFlatClockSpan] - knots[k] < kFlatClockEps) {
                throw FlatClock("clock nearly flat; inversion ill-posed",
                                path_index, k);
            }
        }
    }

    std::vector<double> incr(n);
    for (std::size_t k = 0; k < n; ++k) incr[k] = knots[k + 1] - knots[k];
    std::nth_element(incr.begin(), incr.begin() + n / 2, incr.end());
    const double m = incr[n / 2];
    if (!(m > 0.0)) throw FlatClock("median clock step is zero", path_index, 0);

    const double total = tc.total();
    const std::size_t n_clock = static_cast<std::size_t>(total / m);
    if (n_clock < 1) throw TooFewSamples(0, 1);

    SamplePath<double> w;
    w.grid = Grid(m, n_clock);
    w.seed = angle.seed;
    w.values.reserve(n_clock + 1);
    w.values.push_back(theta[0]);

    CounterRng bridge(derive_key(angle.seed, kBridgeTag));
    const double snap = 1e-9 * m;
    std::size_t cell = 0;
    double left_s = 0.0, left_v = theta[0];
    for (std::size_t j = 1; j <= n_clock; ++j) {
        const double s = std::min(static_cast<double>(j) * m, total);
        while (cell + 1 < knots.size() && knots[cell + 1] < s) ++cell;
        if (cell + 1 >= knots.size()) {
            // Can only happen through float rounding at the right edge.
            w.values.push_back(theta[n]);
            continue;
        }
        if (left_s < knots[cell]) {
            left_s = knots[cell];
            left_v = theta[cell];
        }
        const double right_s = knots[cell + 1];
        const double right_v = theta[cell + 1];
        double value;
        if (right_s - s <= snap) {
            value = right_v;
        } else if (s - left_s <= snap) {
            value = left_v;
        } else {
            const double span = right_s - left_s;
            const double mean = left_v + (s - left_s) / span * (right_v - left_v);
            const double var = (s - left_s) * (right_s - s) / span;
            value = mean + std::sqrt(std::max(var, 0.0)) * bridge.next_normal();
        }
        w.values.push_back(value);
        left_s = s;
        left_v = value;
    }
    return w;
}

}  // namespace skewprod
