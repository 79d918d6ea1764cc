#pragma once

#include <cstddef>
#include <vector>

#include "skewprod/mat2.hpp"
#include "skewprod/scenarios.hpp"
#include "skewprod/sde.hpp"

namespace skewprod {

// Radius and continuously unwrapped angle of a planar path.
struct PlanarDecomposition {
    SamplePath<double> radius;
    SamplePath<double> angle;
};

// Per-sample QR factors of a matrix path: the triangular part and the
// unwrapped rotation angle.
struct MatrixDecomposition {
    SamplePath<UpperTri2> radial;
    SamplePath<double> angle;
};

// Sampled nondecreasing clock with value(0) = 0 and a piecewise-linear
// inverse.
class TimeChange {
public:
    TimeChange(Grid grid, std::vector<double> values);

    const Grid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    double value(std::size_t k) const { return values_[k]; }
    double total() const { return values_.back(); }

    // Piecewise-linear inverse: the time t with clock(t) = s, taking the
    // earliest matching time across flat stretches. s is clamped to the
    // clock's range.
    double inverse(double s) const;

private:
    Grid grid_;
    std::vector<double> values_;
};

// Unwraps raw angles by nearest-branch continuation. Throws UnwrapJump when a
// wrapped step reaches pi, where the branch choice is ambiguous.
std::vector<double> unwrap_angles(const std::vector<double>& raw,
                                  std::size_t path_index = 0);

PlanarDecomposition polar_decompose(const SamplePath<Vec2>& path,
                                    std::size_t path_index = 0);

MatrixDecomposition qr_path(const SamplePath<Mat2>& path,
                            std::size_t path_index = 0);

// Left-endpoint Riemann sum of 1/radius^2.
TimeChange time_change_planar(const SamplePath<double>& radius,
                              std::size_t path_index = 0);

// Left-endpoint Riemann sum of (f(T)/T11)^2.
TimeChange time_change_matrix(const SamplePath<UpperTri2>& radial,
                              std::size_t path_index = 0);

// Reads the angular path on an even grid of the clock: step = median clock
// increment, sample j sits at clock time j*step. Clock times falling on a
// knot take the observed angle there. Between knots the angle is only known
// at the cell ends, so values are imputed by sequential Brownian-bridge
// sampling conditioned on the previous output point and the right knot;
// plain interpolation would shrink the realized quadratic variation of the
// result and break every downstream Brownian test. Imputation noise comes
// from a reserved substream of the path's seed, so the result is a
// deterministic function of (angle, tc).
SamplePath<double> dds_extract(const SamplePath<double>& angle,
                               const TimeChange& tc,
                               std::size_t path_index = 0);

}  // namespace skewprod
