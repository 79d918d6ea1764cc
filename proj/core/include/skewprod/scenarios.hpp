#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "skewprod/sde.hpp"

namespace skewprod {

enum class Scenario { planar_bm, rotated_bm, matrix_diffusion };

Scenario scenario_from_name(const std::string& name);
std::string scenario_name(Scenario s);

struct ScenarioConfig {
    Scenario name = Scenario::planar_bm;
    Vec2 x0_vec{1.0, 0.0};
    Mat2 x0_mat = Mat2::identity();
    Grid grid;
    std::size_t n_paths = 1;
    std::uint64_t seed = 0;
};

// Single-path simulators. `key` is the path's own stream key (derive it from
// an ensemble key with derive_key(ensemble, path_index)); `path_index` only
// labels error messages.

// Planar Brownian motion started off the origin: cumulative 2d increments.
SamplePath<Vec2> planar_bm_path(const Vec2& x0, const Grid& grid,
                                std::uint64_t key, std::size_t path_index = 0);

// The same Brownian motion pushed through an exact rotation by angle t_k.
// Simulating the rotated SDE directly would add discretization error for
// nothing; the rotation is applied in closed form.
SamplePath<Vec2> rotated_bm_path(const Vec2& x0, const Grid& grid,
                                 std::uint64_t key, std::size_t path_index = 0);

// dx = f(x) dA with four independent drivers. The continuous process keeps
// det(x) > 0 (det is a stochastic exponential); a discretized step that loses
// that sign is a step-size artifact and aborts the path with
// DeterminantCrossedZero rather than being patched.
SamplePath<Mat2> matrix_diffusion_path(const Mat2& x0, const Grid& grid,
                                       std::uint64_t key,
                                       std::size_t path_index = 0);

// Ensemble wrappers: path p uses key derive_key(config.seed, p).
std::vector<SamplePath<Vec2>> planar_bm(const ScenarioConfig& config);
std::vector<SamplePath<Vec2>> rotated_bm(const ScenarioConfig& config);

struct MatrixEnsemble {
    std::vector<SamplePath<Mat2>> paths;         // survivors, in path order
    std::vector<std::size_t> crossed_paths;      // indices that lost det > 0
};
MatrixEnsemble matrix_diffusion(const ScenarioConfig& config);

}  // namespace skewprod
