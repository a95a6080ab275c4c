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
#include "mffm/imaging.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

using namespace mffm;

namespace
{

const FrequencyGrid kGrid(0.0, 3.0 * std::numbers::pi, 48);
const Direction kX(Point(1.0, 0.0));

SharpOperator disk_operator(const Direction &d, double t0 = 4.0, int pts = 80)
{
    SourceScene s;
    s.shape = Shape::disk(Point(0.0, 0.0), 1.0);
    s.pulses = {t0};
    return sharpen(assemble_toeplitz(farfield_band(s, 0, d, kGrid, pts)));
}

SharpPair disk_pair(const Direction &d)
{
    return SharpPair{disk_operator(d), disk_operator(-d)};
}

} // namespace

// --- oracles ----------------------------------------------------------------------------------

TEST_CASE("oracle: identity operator reproduces the squared norm of the test vector")
{
    const SharpOperator id = sharpen(CMatrix::Identity(48, 48), kX, kGrid);
    for (double eta : {0.0, 1.3, 7.7})
    {
        const TestVector tv = test_vector(Point(0.4, -2.0), eta, kX, 1.0, kGrid);
        CHECK(std::abs(picard_indicator(id, tv, 0.0) - 48.0) <= 1e-12 * 48.0);
    }
}

TEST_CASE("oracle: strip membership separates finite from huge indicator values")
{
    // Inside K_D (eta = t0) the two-sided indicator is orders of magnitude above the
    // value far outside the intersection of the shifted strips.
    const SharpPair p = disk_pair(kX);
    const double inside = w_indicator(p.plus, p.minus, Point(0.0, 0.0), 4.0, 1.0, 1e-14);
    const double outside = w_indicator(p.plus, p.minus, Point(0.0, 0.0), 2.0, 1.0, 1e-14);
    CHECK(inside > 1e6 * outside);
}

// --- examples ---------------------------------------------------------------------------------

TEST_CASE("test vectors are unimodular")
{
    const TestVector tv = test_vector(Point(1.0, 2.0), 3.0, Direction::from_angle(0.3), 1.0, kGrid);
    REQUIRE(tv.values.size() == 48);
    for (const cplx &v : tv.values)
        CHECK(std::abs(v) == doctest::Approx(1.0).epsilon(1e-15));
    const double s = Direction::from_angle(0.3).dot(Point(1.0, 2.0)) - 3.0;
    CHECK(std::abs(tv.values[4] - std::polar(1.0, -kGrid.tau(5) * s)) < 1e-15);
}

TEST_CASE("Picard series by test vector and by phase agree")
{
    const SharpOperator op = disk_operator(kX);
    const PicardSeries ps(op, 1e-14);
    for (double eta : {2.0, 3.5, 4.0})
        for (double x : {-0.5, 0.0, 0.7})
        {
            const Point y(x, 0.3);
            const double a = picard_indicator(op, test_vector(y, eta, kX, 1.0, kGrid), 1e-14);
            CHECK(ps.at_phase(x - eta) == doctest::Approx(a).epsilon(1e-12));
        }
}

TEST_CASE("cutoff controls the retained spectrum")
{
    const SharpOperator op = disk_operator(kX);
    CHECK(PicardSeries(op, 0.0).retained() >= PicardSeries(op, 1e-14).retained());
    CHECK(PicardSeries(op, 1e-14).retained() >= PicardSeries(op, 1e-3).retained());
    CHECK(PicardSeries(op, 0.999).retained() >= 1);
    CHECK_THROWS_AS(PicardSeries(op, 1.0), ConfigError);
    CHECK_THROWS_AS(PicardSeries(op, -0.1), ConfigError);
}

TEST_CASE("vanishing operator gives an infinite series and zero W")
{
    const SharpOperator z = sharpen(CMatrix::Zero(48, 48), kX, kGrid);
    const SharpOperator zm = sharpen(CMatrix::Zero(48, 48), -kX, kGrid);
    CHECK(std::isinf(PicardSeries(z, 1e-14).at_phase(0.0)));
    CHECK(w_indicator(z, zm, Point(0.0, 0.0), 0.0, 1.0, 1e-14) == 0.0);
}

TEST_CASE("mismatched inputs")
{
    const SharpOperator a = disk_operator(kX);
    CHECK_THROWS_AS(w_indicator(a, a, Point(0.0, 0.0), 4.0, 1.0, 1e-14), ConfigError);
    const TestVector wrong_dir = test_vector(Point(0.0, 0.0), 4.0, -kX, 1.0, kGrid);
    CHECK_THROWS_AS(picard_indicator(a, wrong_dir, 1e-14), ConfigError);
    const TestVector wrong_grid = test_vector(Point(0.0, 0.0), 4.0, kX, 1.0, FrequencyGrid(0.0, 1.0, 48));
    CHECK_THROWS_AS(picard_indicator(a, wrong_grid, 1e-14), ConfigError);
    const SamplingGrid g(Point(-1.0, -1.0), Point(1.0, 1.0), 5);
    CHECK_THROWS_AS(scan_field({}, g, 4.0, 1.0, 1e-14, Combine::single_direction), ConfigError);
}

TEST_CASE("scan_field equals cell-by-cell evaluation")
{
    const SharpPair pairs[] = {disk_pair(kX), disk_pair(Direction::from_angle(std::numbers::pi / 4))};
    const SamplingGrid g(Point(-2.0, -2.0), Point(2.0, 2.0), 9);
    const IndicatorField f = scan_field(pairs, g, 4.0, 1.0, 1e-14, Combine::multi_direction_i);
    const IndicatorField w = scan_field(pairs, g, 3.5, 1.0, 1e-14, Combine::single_pair_w);
    const IndicatorField s = scan_field(pairs, g, 3.0, 1.0, 1e-14, Combine::single_direction);
    for (std::size_t i = 0; i < g.size(); ++i)
    {
        const Point y = g.cell_center(i);
        double total = 0.0;
        for (const auto &p : pairs)
            total += picard_indicator(p.plus, test_vector(y, 4.0, p.plus.direction, 1.0, kGrid), 1e-14) +
                     picard_indicator(p.minus, test_vector(y, 4.0, p.minus.direction, 1.0, kGrid), 1e-14);
        CHECK(f.values[i] == doctest::Approx(1.0 / total).epsilon(1e-12));
        CHECK(w.values[i] ==
              doctest::Approx(w_indicator(pairs[0].plus, pairs[0].minus, y, 3.5, 1.0, 1e-14)).epsilon(1e-12));
        CHECK(s.values[i] ==
              doctest::Approx(1.0 / picard_indicator(pairs[0].plus, test_vector(y, 3.0, kX, 1.0, kGrid), 1e-14))
                  .epsilon(1e-12));
    }
}

TEST_CASE("scans do not depend on the number of threads")
{
    const SharpPair pairs[] = {disk_pair(Direction::from_angle(0.3))};
    const SamplingGrid g(Point(-3.0, -3.0), Point(3.0, 3.0), 31);
    const auto a = scan_field(pairs, g, 4.0, 1.0, 1e-14, Combine::single_pair_w, 1);
    const auto b = scan_field(pairs, g, 4.0, 1.0, 1e-14, Combine::single_pair_w, 3);
    CHECK(a.values == b.values);
    std::vector<double> etas;
    for (int k = 0; k <= 40; ++k)
        etas.push_back(2.0 + 0.1 * k);
    CHECK(h_profile(pairs[0].plus, pairs[0].minus, g, 3.0, etas, 1.0, 1e-14, 1) ==
          h_profile(pairs[0].plus, pairs[0].minus, g, 3.0, etas, 1.0, 1e-14, 4));
}

TEST_CASE("h profile locates the pulse")
{
    const SharpPair p = disk_pair(kX);
    const SamplingGrid g(Point(-6.0, -6.0), Point(6.0, 6.0), 61);
    std::vector<double> etas;
    for (int k = 0; k <= 160; ++k)
        etas.push_back(0.05 * k);
    const auto h = h_profile(p.plus, p.minus, g, 6.0, etas, 1.0, 1e-14);
    const PulseEstimate e = estimate_pulse(h, etas, 0.01, 1.0);
    CHECK(e.t0 == doctest::Approx(4.0).epsilon(0.1 / 4.0));
    CHECK(e.eta1 == doctest::Approx(3.0).epsilon(0.2 / 3.0));
    CHECK(e.eta2 == doctest::Approx(5.0).epsilon(0.2 / 5.0));
    CHECK(e.width == doctest::Approx(e.eta2 - e.eta1));

    const std::vector<double> descending{2.0, 1.0};
    CHECK_THROWS_AS(h_profile(p.plus, p.minus, g, 6.0, descending, 1.0, 1e-14), ConfigError);
}

TEST_CASE("estimate_pulse")
{
    const std::vector<double> etas{0, 1, 2, 3, 4, 5};
    const std::vector<double> h{0, 1e-9, 0.5, 1.0, 0.2, 0};
    PulseEstimate e = estimate_pulse(h, etas, 0.01, 2.0);
    CHECK(e.eta1 == 2.0);
    CHECK(e.eta2 == 4.0);
    CHECK(e.t0 == 3.0);
    CHECK(e.width == 4.0);
    e = estimate_pulse(h, etas, 0.6, 1.0);
    CHECK(e.eta1 == 3.0);
    CHECK(e.eta2 == 3.0);
    const std::vector<double> zero(6, 0.0);
    CHECK_THROWS_AS(estimate_pulse(zero, etas, 0.01, 1.0), NoSupportError);
    CHECK_THROWS_AS(estimate_pulse(std::vector<double>{1.0}, etas, 0.01, 1.0), ConfigError);
}

TEST_CASE("normalization, superlevel sets and centroids")
{
    const SamplingGrid g(Point(0.0, 0.0), Point(3.0, 1.0), std::array<int, 3>{3, 1, 1});
    IndicatorField f{g, {1.0, 4.0, 2.0}, Normalization::raw};
    const IndicatorField n = normalize(f);
    CHECK(n.normalization == Normalization::max_one);
    CHECK(n.values[1] == 1.0);
    CHECK(n.values[0] == 0.25);
    const auto mask = superlevel_set(n, 0.5);
    CHECK(mask == std::vector<bool>{false, true, true});
    const Point c = centroid(g, mask);
    CHECK(c[0] == doctest::Approx(2.0));
    CHECK(c[1] == doctest::Approx(0.5));
    CHECK_THROWS_AS(centroid(g, std::vector<bool>(3, false)), NumericalError);
}
