#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "skewprod/errors.hpp"
#include "skewprod/mat2.hpp"
#include "skewprod/rng.hpp"

namespace skewprod {

struct Vec2 {
    double x = 0.0, y = 0.0;
    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double norm() const { return std::hypot(x, y); }
};

// Uniform time grid starting at 0. Times are computed as k*dt on demand so
// there is no accumulated float drift.
struct Grid {
    double dt = 0.0;
    std::size_t n_steps = 0;

    Grid() = default;
    Grid(double dt_, std::size_t n_steps_) : dt(dt_), n_steps(n_steps_) {
        if (!(dt > 0.0) || !std::isfinite(dt)) {
            throw InvalidNumeric("dt", "must be a positive finite number");
        }
        if (n_steps < 1) throw InvalidNumeric("n_steps", "must be at least 1");
    }

    double time(std::size_t k) const { return static_cast<double>(k) * dt; }
    double horizon() const { return time(n_steps); }
    bool operator==(const Grid& o) const {
        return dt == o.dt && n_steps == o.n_steps;
    }
};

// n_steps x dim matrix of independent Normal(0, dt) increments, stored
// row-major. Reproducible: the same (grid, dim, key) always yields the same
// bytes, with column j drawn from substream derive_key(key, j).
struct WienerBundle {
    Grid grid;
    std::size_t dim = 0;
    std::uint64_t seed = 0;
    std::vector<double> increments;

    double at(std::size_t step, std::size_t component) const {
        return increments[step * dim + component];
    }
};

WienerBundle wiener_increments(const Grid& grid, std::size_t dim, std::uint64_t key);

// A simulated path: n_steps + 1 states on a grid, plus the RNG key that
// produced it (downstream transforms derive their own substreams from it).
template <typename State>
struct SamplePath {
    Grid grid;
    std::uint64_t seed = 0;
    std::vector<State> values;

    std::size_t size() const { return values.size(); }
};

// One-dimensional standard Brownian motion started at 0.
SamplePath<double> scalar_bm_path(const Grid& grid, std::uint64_t key);

inline bool all_finite(double v) { return std::isfinite(v); }
inline bool all_finite(const Vec2& v) {
    return std::isfinite(v.x) && std::isfinite(v.y);
}
inline bool all_finite(const Mat2& m) {
    return std::isfinite(m.a) && std::isfinite(m.b) && std::isfinite(m.c) &&
           std::isfinite(m.d);
}

// Fixed-step Euler scheme: x_{k+1} = x_k + drift(x_k)*dt + diffusion(x_k, dW_k).
// The diffusion callback receives the whole increment row so matrix-valued
// drivers can consume several components at once.
template <typename State, typename Drift, typename Diffusion>
SamplePath<State> euler_maruyama(Drift&& drift, Diffusion&& diffusion,
                                 const State& x0, const Grid& grid,
                                 const WienerBundle& noise,
                                 std::size_t path_index = 0) {
    if (!(noise.grid == grid)) throw GridMismatch();
    SamplePath<State> path;
    path.grid = grid;
    path.seed = noise.seed;
    path.values.reserve(grid.n_steps + 1);
    path.values.push_back(x0);
    State x = x0;
    for (std::size_t k = 0; k < grid.n_steps; ++k) {
        const double* dw = noise.increments.data() + k * noise.dim;
        x = x + drift(x) * grid.dt + diffusion(x, dw);
        if (!all_finite(x)) {
            throw NonFinite("integration produced a non-finite state", path_index, k + 1);
        }
        path.values.push_back(x);
    }
    return path;
}

// Runs fn(path_index) for every index in [0, n_paths) across up to n_threads
// workers. Work items are claimed dynamically; the callback must write its
// result to a per-index slot, so scheduling cannot affect the output. The
// first exception wins and is rethrown after all workers join.
void parallel_for_paths(std::size_t n_paths, unsigned n_threads,
                        const std::function<void(std::size_t)>& fn);

}  // namespace skewprod
