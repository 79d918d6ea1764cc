#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "skewprod/decompose.hpp"

using namespace skewprod;

namespace {

SamplePath<double> scalar_path(const Grid& g, std::vector<double> v) {
    SamplePath<double> p;
    p.grid = g;
    p.seed = 1;
    p.values = std::move(v);
    return p;
}

SamplePath<Vec2> circle_path(const Grid& g, double rate) {
    SamplePath<Vec2> p;
    p.grid = g;
    p.seed = 2;
    p.values.resize(g.n_steps + 1);
    for (std::size_t k = 0; k <= g.n_steps; ++k) {
        const double t = g.time(k) * rate;
        p.values[k] = Vec2{std::cos(t), std::sin(t)};
    }
    return p;
}

}  // namespace

TEST_CASE("time change validates and inverts") {
    const Grid g(0.25, 4);
    CHECK_THROWS_AS(TimeChange(g, {0.0, 1.0}), GridMismatch&);
    CHECK_THROWS_AS(TimeChange(g, {0.5, 1.0, 1.5, 2.0, 2.5}), Error&);
    CHECK_THROWS_AS(TimeChange(g, {0.0, 1.0, 0.5, 2.0, 2.5}), Error&);

    const TimeChange tc(g, {0.0, 0.1, 0.2, 0.6, 1.0});
    CHECK(tc.total() == doctest::Approx(1.0));
    for (std::size_t k = 0; k <= 4; ++k) {
        CHECK(tc.inverse(tc.value(k)) == doctest::Approx(g.time(k)).epsilon(1e-12));
    }
    CHECK(tc.inverse(0.4) == doctest::Approx(0.5 + 0.25 * 0.5).epsilon(1e-12));
    CHECK(tc.inverse(-3.0) == 0.0);
    CHECK(tc.inverse(7.0) == doctest::Approx(1.0));

    // flat stretches resolve to their earliest time
    const TimeChange flat(g, {0.0, 0.5, 0.5, 0.5, 1.0});
    CHECK(flat.inverse(0.5) == doctest::Approx(0.25).epsilon(1e-12));
    double prev = 0.0;
    for (double s = 0.0; s <= 1.0; s += 0.01) {
        const double t = flat.inverse(s);
        CHECK(t >= prev);
        prev = t;
    }
}

TEST_CASE("unwrap recovers linear angles across branch cuts") {
    const Grid g(0.01, 1000);
    for (double rate : {1.0, -1.0}) {
        const PlanarDecomposition dec = polar_decompose(circle_path(g, rate));
        for (std::size_t k = 0; k <= g.n_steps; ++k) {
            CHECK(dec.angle.values[k] ==
                  doctest::Approx(rate * g.time(k)).epsilon(1e-9));
            CHECK(dec.radius.values[k] == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("unwrap rejects an ambiguous half-turn") {
    CHECK_THROWS_AS(unwrap_angles({0.0, std::numbers::pi}, 4), UnwrapJump&);
    // just under the cut is fine
    const auto ok = unwrap_angles({0.0, 3.0});
    CHECK(ok[1] == doctest::Approx(3.0));
}

TEST_CASE("polar decomposition rejects the origin") {
    SamplePath<Vec2> p;
    p.grid = Grid(0.5, 2);
    p.values = {Vec2{1.0, 0.0}, Vec2{0.0, 0.0}, Vec2{1.0, 1.0}};
    try {
        polar_decompose(p, 9);
        FAIL("expected OriginHit");
    } catch (const OriginHit& e) {
        CHECK(e.path_index == 9);
        CHECK(e.step_index == 1);
    }
}

TEST_CASE("qr path reports the offending sample") {
    SamplePath<Mat2> p;
    p.grid = Grid(0.5, 1);
    p.values = {Mat2::identity(), Mat2(1.0, 4.0, 2.0, 2.0)};
    try {
        qr_path(p, 3);
        FAIL("expected NonPositiveDeterminant");
    } catch (const NonPositiveDeterminant& e) {
        CHECK(e.path_index == 3);
        CHECK(e.step_index == 1);
    }
}

TEST_CASE("planar clock on constant and deterministic radii") {
    const Grid g(1e-3, 1000);
    std::vector<double> ones(g.n_steps + 1, 1.0);
    const TimeChange unit = time_change_planar(scalar_path(g, ones));
    CHECK(unit.total() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(unit.value(500) == doctest::Approx(0.5).epsilon(1e-9));

    std::vector<double> twos(g.n_steps + 1, 2.0);
    const TimeChange quarter = time_change_planar(scalar_path(g, twos));
    CHECK(quarter.total() == doctest::Approx(0.25).epsilon(1e-9));

    // r_t = 1 + t integrates to t / (1 + t)
    std::vector<double> grow(g.n_steps + 1);
    for (std::size_t k = 0; k <= g.n_steps; ++k) grow[k] = 1.0 + g.time(k);
    const TimeChange shrink = time_change_planar(scalar_path(g, grow));
    CHECK(std::abs(shrink.total() - 0.5) <= 1e-3);
}

TEST_CASE("matrix clock on constant triangular factors") {
    const Grid g(1e-3, 1000);
    SamplePath<UpperTri2> id;
    id.grid = g;
    id.values.assign(g.n_steps + 1, UpperTri2(1.0, 0.0, 1.0));
    CHECK(time_change_matrix(id).total() == doctest::Approx(1.0 / 9.0).epsilon(1e-9));

    SamplePath<UpperTri2> twos;
    twos.grid = g;
    twos.values.assign(g.n_steps + 1, UpperTri2(2.0, 0.0, 2.0));
    CHECK(time_change_matrix(twos).total() ==
          doctest::Approx(4.0 / 81.0).epsilon(1e-9));
}

TEST_CASE("extraction reads exact knots on an aligned clock") {
    // theta = t/2 against clock t/4 gives W(s) = 2 s with no imputation
    const Grid g(1e-3, 1000);
    std::vector<double> theta(g.n_steps + 1), clock(g.n_steps + 1);
    for (std::size_t k = 0; k <= g.n_steps; ++k) {
        theta[k] = 0.5 * g.time(k);
        clock[k] = 0.25 * g.time(k);
    }
    const SamplePath<double> w =
        dds_extract(scalar_path(g, theta), TimeChange(g, clock));
    CHECK(w.grid.dt == doctest::Approx(0.25e-3).epsilon(1e-9));
    CHECK(w.grid.n_steps >= g.n_steps - 1);
    CHECK(w.values[0] == 0.0);
    for (std::size_t j = 0; j <= w.grid.n_steps; ++j) {
        CHECK(w.values[j] ==
              doctest::Approx(2.0 * w.grid.time(j)).epsilon(1e-9));
    }
}

TEST_CASE("extraction between knots is deterministic and anchored") {
    // a quadratic clock leaves most sample times between knots
    const Grid g(0.01, 200);
    std::vector<double> theta(g.n_steps + 1), clock(g.n_steps + 1);
    for (std::size_t k = 0; k <= g.n_steps; ++k) {
        const double t = g.time(k);
        theta[k] = std::sin(3.0 * t);
        clock[k] = t * t;
    }
    const SamplePath<double> a =
        dds_extract(scalar_path(g, theta), TimeChange(g, clock), 5);
    const SamplePath<double> b =
        dds_extract(scalar_path(g, theta), TimeChange(g, clock), 5);
    CHECK(a.values == b.values);
    CHECK(a.values[0] == theta[0]);
    CHECK(a.grid.horizon() <= clock.back() + a.grid.dt);
    CHECK(a.size() == a.grid.n_steps + 1);
}

TEST_CASE("extraction rejects a flat clock") {
    const Grid g(0.05, 20);
    std::vector<double> theta(g.n_steps + 1, 0.0);
    std::vector<double> clock(g.n_steps + 1, 0.0);
    CHECK_THROWS_AS(
        dds_extract(scalar_path(g, theta), TimeChange(g, clock)), FlatClock&);
}

TEST_CASE("extraction needs matching grids") {
    const Grid g(0.05, 20);
    const Grid h(0.05, 21);
    std::vector<double> theta(g.n_steps + 1, 0.0);
    std::vector<double> clock(h.n_steps + 1);
    for (std::size_t k = 0; k <= h.n_steps; ++k) clock[k] = h.time(k);
    CHECK_THROWS_AS(
        dds_extract(scalar_path(g, theta), TimeChange(h, clock)), GridMismatch&);
}
