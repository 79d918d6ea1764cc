#include "skewprod/scenarios.hpp"

#include <cmath>

namespace skewprod {

Scenario scenario_from_name(const std::string& name) {
    if (name == "planar_bm") return Scenario::planar_bm;
    if (name == "rotated_bm") return Scenario::rotated_bm;
    if (name == "matrix_diffusion") return Scenario::matrix_diffusion;
    throw UnknownScenario(name);
}

std::string scenario_name(Scenario s) {
    switch (s) {
        case Scenario::planar_bm: return "planar_bm";
        case Scenario::rotated_bm: return "rotated_bm";
        case Scenario::matrix_diffusion: return "matrix_diffusion";
    }
    throw UnknownScenario("<invalid>");
}

SamplePath<Vec2> planar_bm_path(const Vec2& x0, const Grid& grid,
                                std::uint64_t key, std::size_t path_index) {
    if (x0.x == 0.0 && x0.y == 0.0) throw OriginStart();
    const WienerBundle noise = wiener_increments(grid, 2, key);
    return euler_maruyama(
        [](const Vec2&) { return Vec2{0.0, 0.0}; },
        [](const Vec2&, const double* dw) { return Vec2{dw[0], dw[1]}; },
        x0, grid, noise, path_index);
}

SamplePath<Vec2> rotated_bm_path(const Vec2& x0, const Grid& grid,
                                 std::uint64_t key, std::size_t path_index) {
    SamplePath<Vec2> path = planar_bm_path(x0, grid, key, path_index);
    for (std::size_t k = 0; k < path.values.size(); ++k) {
        const double t = grid.time(k);
        const double ct = std::cos(t), st = std::sin(t);
        const Vec2 uv = path.values[k];
        path.values[k] = Vec2{ct * uv.x - st * uv.y, st * uv.x + ct * uv.y};
    }
    return path;
}

SamplePath<Mat2> matrix_diffusion_path(const Mat2& x0, const Grid& grid,
                                       std::uint64_t key,
                                       std::size_t path_index) {
    if (x0.det() <= 0.0) throw NonPositiveDeterminantStart();
    const WienerBundle noise = wiener_increments(grid, 4, key);
    SamplePath<Mat2> path = euler_maruyama(
        [](const Mat2&) { return Mat2(); },
        [](const Mat2& x, const double* dw) {
            const double f = f_coeff(x);
            return Mat2(f * dw[0], f * dw[1], f * dw[2], f * dw[3]);
        },
        x0, grid, noise, path_index);
    for (std::size_t k = 1; k < path.values.size(); ++k) {
        if (path.values[k].det() <= 0.0) {
            throw DeterminantCrossedZero("determinant crossed zero", path_index, k);
        }
    }
    return path;
}

std::vector<SamplePath<Vec2>> planar_bm(const ScenarioConfig& config) {
    std::vector<SamplePath<Vec2>> out(config.n_paths);
    for (std::size_t p = 0; p < config.n_paths; ++p) {
        out[p] = planar_bm_path(config.x0_vec, config.grid,
                                derive_key(config.seed, p), p);
    }
    return out;
}

std::vector<SamplePath<Vec2>> rotated_bm(const ScenarioConfig& config) {
    std::vector<SamplePath<Vec2>> out(config.n_paths);
    for (std::size_t p = 0; p < config.n_paths; ++p) {
        out[p] = rotated_bm_path(config.x0_vec, config.grid,
                                 derive_key(config.seed, p), p);
    }
    return out;
}

MatrixEnsemble matrix_diffusion(const ScenarioConfig& config) {
    MatrixEnsemble out;
    out.paths.reserve(config.n_paths);
    for (std::size_t p = 0; p < config.n_paths; ++p) {
        try {
            out.paths.push_back(matrix_diffusion_path(
                config.x0_mat, config.grid, derive_key(config.seed, p), p));
        } catch (const DeterminantCrossedZero&) {
            out.crossed_paths.push_back(p);
        }
    }
    return out;
}

}  // namespace skewprod
