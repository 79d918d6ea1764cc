#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "skewprod/mat2.hpp"
#include "skewprod/rng.hpp"

using namespace skewprod;

namespace {

Mat2 random_posdet(CounterRng& rng) {
    for (;;) {
        const Mat2 m(rng.next_normal(), rng.next_normal(), rng.next_normal(),
                     rng.next_normal());
        if (m.det() > 1e-8) return m;
    }
}

double max_abs_diff(const Mat2& a, const Mat2& b) {
    return std::max(
        std::max(std::abs(a.a - b.a), std::abs(a.b - b.b)),
        std::max(std::abs(a.c - b.c), std::abs(a.d - b.d)));
}

}  // namespace

TEST_CASE("qr of a worked example") {
    const auto [q, t] = qr_decompose(Mat2(3.0, 1.0, 4.0, 2.0));
    const Mat2 qm = q.matrix();
    CHECK(qm.a == doctest::Approx(3.0 / 5.0).epsilon(1e-14));
    CHECK(qm.b == doctest::Approx(-4.0 / 5.0).epsilon(1e-14));
    CHECK(qm.c == doctest::Approx(4.0 / 5.0).epsilon(1e-14));
    CHECK(qm.d == doctest::Approx(3.0 / 5.0).epsilon(1e-14));
    CHECK(t.t11 == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(t.t12 == doctest::Approx(11.0 / 5.0).epsilon(1e-14));
    CHECK(t.t22 == doctest::Approx(2.0 / 5.0).epsilon(1e-14));
}

TEST_CASE("diffusion coefficient on fixed points") {
    CHECK(f_coeff(Mat2::identity()) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(f_coeff(Mat2::diagonal(2.0, 2.0)) ==
          doctest::Approx(4.0 / 9.0).epsilon(1e-15));
}

TEST_CASE("qr reconstructs and Q is a proper rotation") {
    CounterRng rng(derive_key(42, 100));
    for (int i = 0; i < 20000; ++i) {
        const Mat2 m = random_posdet(rng);
        const auto [q, t] = qr_decompose(m);
        const Mat2 qm = q.matrix();
        CHECK(max_abs_diff(qm * t.matrix(), m) <= 1e-10);
        const Mat2 gram(qm.a * qm.a + qm.c * qm.c, qm.a * qm.b + qm.c * qm.d,
                        qm.b * qm.a + qm.d * qm.c, qm.b * qm.b + qm.d * qm.d);
        CHECK(max_abs_diff(gram, Mat2::identity()) <= 1e-12);
        CHECK(qm.det() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(t.t11 > 0.0);
        CHECK(t.t22 > 0.0);
    }
}

TEST_CASE("left rotation shifts the angle and leaves T alone") {
    CounterRng rng(derive_key(42, 101));
    const double shift = std::numbers::pi / 5.0;
    for (int i = 0; i < 2000; ++i) {
        const Mat2 m = random_posdet(rng);
        const auto [q, t] = qr_decompose(m);
        const auto [q2, t2] = qr_decompose(Rotation(shift).matrix() * m);
        CHECK(t2.t11 == doctest::Approx(t.t11).epsilon(1e-10));
        CHECK(t2.t12 == doctest::Approx(t.t12).epsilon(1e-8));
        CHECK(t2.t22 == doctest::Approx(t.t22).epsilon(1e-10));
        const double d = std::remainder(q2.angle - q.angle - shift,
                                        2.0 * std::numbers::pi);
        CHECK(std::abs(d) <= 1e-10);
    }
}

TEST_CASE("diffusion coefficient is bounded below one") {
    CounterRng rng(derive_key(42, 102));
    for (int i = 0; i < 20000; ++i) {
        const Mat2 m(rng.next_normal() * 3.0, rng.next_normal() * 3.0,
                     rng.next_normal() * 3.0, rng.next_normal() * 3.0);
        CHECK(std::abs(f_coeff(m)) < 1.0);
    }
}

TEST_CASE("qr rejects degenerate input") {
    CHECK_THROWS_AS(qr_decompose(Mat2(0.0, 1.0, 0.0, 2.0)), DegenerateColumn&);
    CHECK_THROWS_AS(qr_decompose(Mat2(1.0, 2.0, 2.0, 4.0)),
                    NonPositiveDeterminant&);
    CHECK_THROWS_AS(qr_decompose(Mat2(1.0, 4.0, 2.0, 2.0)),
                    NonPositiveDeterminant&);
}

TEST_CASE("constructors reject bad values") {
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(Mat2(1.0, inf, 0.0, 1.0), NonFinite&);
    CHECK_THROWS_AS(Rotation(std::nan("")), NonFinite&);
    CHECK_THROWS_AS(UpperTri2(0.0, 0.0, 1.0), NonPositiveDiagonal&);
    CHECK_THROWS_AS(UpperTri2(1.0, 0.0, -2.0), NonPositiveDiagonal&);
}

TEST_CASE("rotation helpers agree") {
    const Rotation r = rotation_matrix(0.7);
    const Mat2 m = r.matrix();
    CHECK(m.a == doctest::Approx(std::cos(0.7)));
    CHECK(m.c == doctest::Approx(std::sin(0.7)));
    const Mat2 prod = r.matrix() * r.inverse().matrix();
    CHECK(max_abs_diff(prod, Mat2::identity()) <= 1e-15);
}
