#pragma once

#include <cmath>
#include <utility>

#include "skewprod/errors.hpp"

namespace skewprod {

// Row-major 2x2 real matrix (a b; c d).
struct Mat2 {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

    Mat2() = default;
    Mat2(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {
        if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) ||
            !std::isfinite(d)) {
            throw NonFinite("matrix entry is not finite");
        }
    }

    static Mat2 identity() { return Mat2(1.0, 0.0, 0.0, 1.0); }
    static Mat2 diagonal(double x, double y) { return Mat2(x, 0.0, 0.0, y); }

    double det() const { return a * d - b * c; }
    // tr(A'A), the squared Frobenius norm.
    double gram_trace() const { return a * a + b * b + c * c + d * d; }

    Mat2 operator*(const Mat2& o) const {
        return Mat2(a * o.a + b * o.c, a * o.b + b * o.d,
                    c * o.a + d * o.c, c * o.b + d * o.d);
    }
    Mat2 operator+(const Mat2& o) const {
        return Mat2(a + o.a, b + o.b, c + o.c, d + o.d);
    }
    Mat2 operator*(double s) const { return Mat2(a * s, b * s, c * s, d * s); }
};

// SO(2) element stored as its angle so angular paths stay real-valued and
// continuous; the matrix form (cos -sin; sin cos) is built on demand.
struct Rotation {
    double angle = 0.0;

    Rotation() = default;
    explicit Rotation(double t) : angle(t) {
        if (!std::isfinite(t)) throw NonFinite("rotation angle is not finite");
    }

    Mat2 matrix() const {
        const double ct = std::cos(angle), st = std::sin(angle);
        return Mat2(ct, -st, st, ct);
    }
    Rotation inverse() const { return Rotation(-angle); }
};

inline Rotation rotation_matrix(double t) { return Rotation(t); }

// Upper triangular with strictly positive diagonal.
struct UpperTri2 {
    double t11 = 1.0, t12 = 0.0, t22 = 1.0;

    UpperTri2() = default;
    UpperTri2(double t11_, double t12_, double t22_) : t11(t11_), t12(t12_), t22(t22_) {
        if (!std::isfinite(t11) || !std::isfinite(t12) || !std::isfinite(t22)) {
            throw NonFinite("triangular entry is not finite");
        }
        if (t11 <= 0.0 || t22 <= 0.0) throw NonPositiveDiagonal();
    }

    Mat2 matrix() const { return Mat2(t11, t12, 0.0, t22); }
    double det() const { return t11 * t22; }
};

// Unique factorization A = Q * T with Q in SO(2) and T upper triangular with
// positive diagonal, via the closed form for the 2x2 case.
std::pair<Rotation, UpperTri2> qr_decompose(const Mat2& A);

// det(A) / (tr(A'A) + 1); the diffusion coefficient. Total and bounded,
// |f| < 1, since 2|det| <= tr(A'A).
double f_coeff(const Mat2& A);

}  // namespace skewprod
