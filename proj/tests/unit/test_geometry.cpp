// SPDX-License-Identifier: Apache-2.0
//
// mffm - multi-frequency factorization imaging of pulsed moving sources
// Copyright (C) 2026 The mffm authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------


#include "mffm/error.hpp"
#include "mffm/geometry.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace mffm;

namespace
{

double total_weight(const Shape &s, int pts)
{
    double sum = 0.0;
    for (const auto &q : quadrature_points(s, pts))
        sum += q.weight;
    return sum;
}

} // namespace

// --- oracles ----------------------------------------------------------------------------------

TEST_CASE("oracle: disk quadrature converges to the analytic area")
{
    CHECK(total_weight(Shape::disk(Point(0.0, 0.0), 1.0), 400) == doctest::Approx(std::numbers::pi).epsilon(1e-3));
}

TEST_CASE("oracle: small ball quadrature matches the analytic volume")
{
    const double v = total_weight(Shape::disk(Point(0.0, 0.0, 0.0), 0.1), 40);
    CHECK(std::abs(v - 4.0 / 3.0 * std::numbers::pi * 1e-3) <= 0.05 * 4.0 / 3.0 * std::numbers::pi * 1e-3);
}

TEST_CASE("oracle: kite area equals 1.5 pi scale^2")
{
    // Green's theorem on the outline: the only surviving term is 1.5 cos^2 t.
    for (double scale : {1.0, 0.5})
        CHECK(total_weight(Shape::kite(Point(0.0, 0.0), scale), 400) ==
              doctest::Approx(1.5 * std::numbers::pi * scale * scale).epsilon(2e-3));
}

TEST_CASE("oracle: rounded square area")
{
    const double h = 1.0, r = 0.25;
    const double area = 4.0 * h * h - (4.0 - std::numbers::pi) * r * r;
    CHECK(total_weight(Shape::rounded_square(Point(0.5, -1.0), h, r), 400) == doctest::Approx(area).epsilon(1e-3));
}

TEST_CASE("oracle: disk projection is center projection plus/minus radius")
{
    const Shape d = Shape::disk(Point(2.0, 0.0), 1.0);
    auto p = d.projection(Direction(Point(1.0, 0.0)));
    CHECK(p.lo == doctest::Approx(1.0));
    CHECK(p.hi == doctest::Approx(3.0));
    p = d.projection(Direction(Point(0.0, 1.0)));
    CHECK(p.lo == doctest::Approx(-1.0));
    CHECK(p.hi == doctest::Approx(1.0));
}

TEST_CASE("oracle: rounded square projection along a diagonal")
{
    // Support function of the square shrunk by r plus r.
    const double h = 1.0, r = 0.25;
    const auto p = Shape::rounded_square(Point(0.0, 0.0), h, r).projection(Direction::from_angle(std::numbers::pi / 4));
    CHECK(p.hi == doctest::Approx(std::sqrt(2.0) * (h - r) + r).epsilon(1e-6));
    CHECK(p.lo == doctest::Approx(-(std::sqrt(2.0) * (h - r) + r)).epsilon(1e-6));
}

// --- examples ---------------------------------------------------------------------------------

TEST_CASE("contains")
{
    const Shape d = Shape::disk(Point(0.0, 0.0), 1.0);
    CHECK(d.contains(Point(0.5, 0.0)));
    CHECK_FALSE(d.contains(Point(2.0, 0.0)));
    CHECK(d.contains(Point(1.0, 0.0))); // closed region
    CHECK(Shape::kite(Point(0.0, 0.0), 1.0).contains(Point(0.0, 0.0)));
    CHECK_FALSE(Shape::kite(Point(0.0, 0.0), 1.0).contains(Point(-1.05, 0.0))); // inside the notch
    CHECK_THROWS_AS(d.contains(Point(0.0, 0.0, 0.0)), ConfigError);
}

TEST_CASE("quadrature refinement reduces the area error")
{
    const Shape d = Shape::disk(Point(0.0, 0.0), 1.0);
    const double e8 = std::abs(total_weight(d, 8) - std::numbers::pi);
    const double e16 = std::abs(total_weight(d, 16) - std::numbers::pi);
    const double e64 = std::abs(total_weight(d, 64) - std::numbers::pi);
    CHECK(e16 < e8);
    CHECK(e64 < e16);
    // Without cut-cell refinement 8 and 16 happen to give the same area; finer grids still win.
    const auto plain = [&](int n) {
        double sum = 0.0;
        for (const auto &q : quadrature_points(d, n, 1))
            sum += q.weight;
        return std::abs(sum - std::numbers::pi);
    };
    CHECK(plain(64) < plain(8));
    CHECK_THROWS_AS(quadrature_points(d, 3), ConfigError);
}

TEST_CASE("kite projection is stable under boundary refinement")
{
    // The constructor itself cross-checks 4096 against 8192 samples; the interval must be sane.
    const auto p = Shape::kite(Point(0.0, 0.0), 1.0).projection(Direction(Point(1.0, 0.0)));
    CHECK(p.hi == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(p.lo < -1.0);
    CHECK(p.lo > -1.7);
}

TEST_CASE("in_strip")
{
    const Shape d = Shape::disk(Point(0.0, 0.0), 1.0);
    const Direction x(Point(1.0, 0.0));
    const auto proj = d.projection(x);
    CHECK(in_strip(Point(0.0, 0.0), x, proj, 4.0, 4.0, 1.0));
    CHECK_FALSE(in_strip(Point(0.0, 0.0), x, proj, 7.0, 4.0, 1.0));
    CHECK(in_strip(Point(3.0, 0.0), x, proj, 7.0, 4.0, 1.0));
    CHECK_FALSE(in_strip(Point(1.0, 0.0), x, proj, 4.0, 4.0, 1.0)); // strict boundary
}

TEST_CASE("trajectory catalog")
{
    auto close = [](const Point &a, const Point &b) { return (a - b).norm() < 1e-12; };
    CHECK(close(Trajectory(CardioidPath{}).position(0.0), Point(0.0, 2.5)));
    CHECK(close(Trajectory(StarPath{}).position(20.0), Point(0.0, 7.0)));
    CHECK(close(Trajectory(HelixPath{}).position(0.0), Point(1.0, -5.0, 0.0)));
    CHECK(close(Trajectory(SineLinePath{}).position(8.0), Point(0.0, 0.0)));
    CHECK(Trajectory(HelixPath{}).dim() == 3);
    CHECK(Trajectory(HelixPath{}).t_max() == 120.0);
    CHECK_THROWS_AS(Trajectory(CardioidPath{}).position(-0.1), ConfigError);
    CHECK_THROWS_AS(Trajectory(CardioidPath{}).position(80.5), ConfigError);
}

TEST_CASE("speed warnings")
{
    CHECK(Trajectory(LinearPath{Point(0.0, 0.0), Point(2.0, 0.0)}, 10.0).speed_warnings(1.0).size() == 1);
    CHECK(Trajectory(LinearPath{Point(0.0, 0.0), Point(0.5, 0.0)}, 10.0).speed_warnings(1.0).empty());
    CHECK(Trajectory(CardioidPath{}).speed_warnings(1.0).empty());
}

TEST_CASE("points and directions")
{
    CHECK_THROWS_AS(Point::from({1.0}), ConfigError);
    CHECK_THROWS_AS(Point::from({1.0, 2.0, 3.0, 4.0}), ConfigError);
    CHECK_THROWS_AS(Direction(Point(1.0, 1.0)), ConfigError);
    CHECK_NOTHROW(Direction(Point(0.6, 0.8)));
    const Direction d = Direction::normalized(Point(1.0, 1.0));
    CHECK(d.vec().norm() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK((-d).approx_equal(Direction::normalized(Point(-1.0, -1.0))));
    CHECK_THROWS_AS(Point(1.0, 0.0).dot(Point(1.0, 0.0, 0.0)), ConfigError);
}

TEST_CASE("sampling grid")
{
    const SamplingGrid g(Point(-6.0, -6.0), Point(6.0, 6.0), 121);
    CHECK(g.size() == 121u * 121u);
    CHECK(g.cell_width(0) == doctest::Approx(12.0 / 121.0));
    const Point c0 = g.cell_center(0);
    CHECK(c0[0] == doctest::Approx(-6.0 + 6.0 / 121.0));
    const Point mid = g.cell_center(60 + 60 * 121);
    CHECK(mid.norm() < 1e-12);
    const auto ij = g.unflatten(5 + 7 * 121);
    CHECK(ij[0] == 5);
    CHECK(ij[1] == 7);
    CHECK(g.circumradius() == doctest::Approx(6.0 * std::sqrt(2.0)));
    CHECK_THROWS_AS(SamplingGrid(Point(1.0, 0.0), Point(0.0, 1.0), 10), ConfigError);
    CHECK_THROWS_AS(SamplingGrid(Point(0.0, 0.0), Point(1.0, 1.0), 0), ConfigError);
    CHECK(SamplingGrid(Point(0.0, 0.0, 0.0), Point(1.0, 1.0, 1.0), 4).size() == 64u);
}

// --- invariants -------------------------------------------------------------------------------

TEST_CASE("projection of the antipodal direction mirrors the interval")
{
    const Shape shapes[] = {Shape::disk(Point(0.3, -0.2), 1.0), Shape::kite(Point(1.0, 2.0), 0.7),
                            Shape::rounded_square(Point(-1.0, 0.0), 1.0, 0.3)};
    for (const auto &s : shapes)
        for (double a : {0.0, 0.3, 1.2, 2.5, 4.0})
        {
            const Direction d = Direction::from_angle(a);
            const auto p = s.projection(d), q = s.projection(-d);
            CHECK(q.lo == doctest::Approx(-p.hi).epsilon(1e-12));
            CHECK(q.hi == doctest::Approx(-p.lo).epsilon(1e-12));
        }
}

TEST_CASE("projection of a translated shape shifts by dir . d")
{
    const Shape k = Shape::kite(Point(0.0, 0.0), 1.0);
    const Point at(1.5, -0.5), d(0.7, 2.0);
    for (double a : {0.1, 1.0, 2.0})
    {
        const Direction dir = Direction::from_angle(a);
        const auto p = projection_interval(k, at, dir), q = projection_interval(k, at + d, dir);
        CHECK(q.lo == doctest::Approx(p.lo + dir.dot(d)).epsilon(1e-12));
        CHECK(q.hi == doctest::Approx(p.hi + dir.dot(d)).epsilon(1e-12));
    }
}

TEST_CASE("in_strip at eta = t0 does not depend on t0 or c")
{
    const Direction x = Direction::from_angle(0.4);
    const auto proj = Shape::disk(Point(0.0, 0.0), 1.0).projection(x);
    for (double y1 = -2.0; y1 <= 2.0; y1 += 0.25)
    {
        const Point y(y1, 0.3);
        const bool ref = in_strip(y, x, proj, 0.0, 0.0, 1.0);
        CHECK(in_strip(y, x, proj, 5.0, 5.0, 1.0) == ref);
        CHECK(in_strip(y, x, proj, 2.0, 2.0, 3.0) == ref);
    }
}

TEST_CASE("every quadrature point lies inside its shape")
{
    const Shape shapes[] = {Shape::disk(Point(0.0, 0.0), 1.0), Shape::kite(Point(0.0, 0.0), 1.0),
                            Shape::rounded_square(Point(0.0, 0.0), 1.0, 0.25), Shape::disk(Point(1.0, 0.0, -1.0), 0.5)};
    for (const auto &s : shapes)
        for (const auto &q : quadrature_points(s, 37))
            CHECK(s.contains(q.point));
}
