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

#include "mffm/forward.hpp"

#include "mffm/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>

namespace mffm
{

namespace
{

constexpr double kPi = std::numbers::pi;
const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * kPi);

template <class... Ts>
struct overloaded : Ts...
{
    using Ts::operator()...;
};

// (2 pi)^{-1/2} sum_q weight_q exp(-i omega phase_q)
cplx sum_band_sample(const std::vector<double> &phase, const std::vector<double> &weight, double omega,
                     std::vector<cplx> &scratch)
{
    scratch.resize(phase.size());
    for (std::size_t q = 0; q < phase.size(); ++q)
        scratch[q] = weight[q] * std::polar(1.0, -omega * phase[q]);
    return kInvSqrt2Pi * pairwise_sum(scratch);
}

std::vector<double> phases(const WeightedQuadrature &quad, double t_j, double c, const Direction &dir)
{
    if (dir.dim() != quad.dim)
        throw ConfigError("observation direction dimension does not match the scene");
    const std::size_t n = quad.weight.size();
    std::vector<double> out(n);
    const auto d = quad.dim;
    for (std::size_t q = 0; q < n; ++q)
    {
        const double *y = &quad.position[q * d];
        double s = dir.vec()[0] * y[0] + dir.vec()[1] * y[1];
        if (d == 3)
            s += dir.vec()[2] * y[2];
        out[q] = s / c - t_j;
    }
    return out;
}

} // namespace

// ------------------------------------------------------------------------------------------------
// SourceProfile
// ------------------------------------------------------------------------------------------------

double SourceProfile::operator()(const Point &z) const
{
    return std::visit(overloaded{
                          [&](const PolynomialProfile &) {
                              const double z1 = z[0], z2 = z[1];
                              return 2.0 * z1 + 3.0 * z2 * z2 + z1 * z2 * z2 + 1.0;
                          },
                          [](const ConstantProfile &c) { return c.value; },
                          [&](const GaussianProfile &g) {
                              return g.strength * std::exp(-z.dot(z) / (2.0 * g.width)) / (std::sqrt(2.0 * kPi) * g.width);
                          },
                      },
                      kind_);
}

std::string SourceProfile::name() const
{
    return std::visit(overloaded{
                          [](const PolynomialProfile &) { return "polynomial2d"; },
                          [](const ConstantProfile &) { return "constant"; },
                          [](const GaussianProfile &) { return "gaussian"; },
                      },
                      kind_);
}

// ------------------------------------------------------------------------------------------------
// SourceScene
// ------------------------------------------------------------------------------------------------

Shape SourceScene::support(std::size_t j) const
{
    if (j >= pulses.size())
        throw ConfigError("pulse index out of range");
    return shape.translated_to(trajectory.position(pulses[j]));
}

std::vector<std::string> SourceScene::validate() const
{
    if (pulses.empty())
        throw ConfigError("scene needs at least one pulse");
    if (!(wave_speed > 0.0))
        throw ConfigError("wave speed must be positive");
    if (trajectory.dim() != shape.dim())
        throw ConfigError("trajectory and shape dimensions differ");
    for (std::size_t j = 1; j < pulses.size(); ++j)
        if (!(pulses[j] > pulses[j - 1]))
            throw ConfigError("pulse instants must be strictly increasing");
    for (double t : pulses)
        trajectory.position(t); // range check

    auto warnings = trajectory.speed_warnings(wave_speed);
    const double diam = shape.diameter();
    for (std::size_t j = 1; j < pulses.size(); ++j)
    {
        if (!(pulses[j] - pulses[j - 1] > diam / wave_speed))
        {
            std::ostringstream msg;
            msg << "pulses " << j - 1 << " and " << j << " are closer than diam(D)/c = " << diam / wave_speed
                << "; their signals may overlap";
            warnings.push_back(msg.str());
        }
    }
    return warnings;
}

// ------------------------------------------------------------------------------------------------
// FrequencyGrid
// ------------------------------------------------------------------------------------------------

FrequencyGrid::FrequencyGrid(double kappa_, double half_band_, int n_) : kappa(kappa_), half_band(half_band_), n(n_)
{
    if (!(half_band > 0.0))
        throw ConfigError("half bandwidth must be positive");
    if (n < 1)
        throw ConfigError("frequency grid needs n >= 1");
}

FrequencyGrid FrequencyGrid::from_band(double omega_min, double omega_max, int n)
{
    if (!(omega_max > omega_min))
        throw ConfigError("omega_max must exceed omega_min");
    return FrequencyGrid(0.5 * (omega_min + omega_max), 0.5 * (omega_max - omega_min), n);
}

// ------------------------------------------------------------------------------------------------
// Synthesis
// ------------------------------------------------------------------------------------------------

cplx pairwise_sum(std::span<const cplx> values)
{
    constexpr std::size_t kBlock = 16;
    if (values.size() <= kBlock)
    {
        cplx s{0.0, 0.0};
        for (const auto &v : values)
            s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

WeightedQuadrature pulse_quadrature(const SourceScene &scene, std::size_t j, int pts_per_axis)
{
    const Shape support = scene.support(j);
    const Point center = support.center();
    const auto pts = quadrature_points(support, pts_per_axis);
    WeightedQuadrature quad;
    quad.dim = support.dim();
    quad.position.reserve(pts.size() * quad.dim);
    quad.weight.reserve(pts.size());
    for (const auto &qp : pts)
    {
        for (int a = 0; a < quad.dim; ++a)
            quad.position.push_back(qp.point[a]);
        quad.weight.push_back(qp.weight * scene.profile(qp.point - center));
    }
    return quad;
}

cplx farfield(const SourceScene &scene, std::size_t j, const Direction &dir, double omega, int pts_per_axis)
{
    const auto quad = pulse_quadrature(scene, j, pts_per_axis);
    const auto ph = phases(quad, scene.pulses[j], scene.wave_speed, dir);
    std::vector<cplx> scratch;
    return sum_band_sample(ph, quad.weight, omega, scratch);
}

FarFieldBand farfield_band(const WeightedQuadrature &quad, double t_j, double wave_speed, const Direction &dir,
                           const FrequencyGrid &grid)
{
    const auto ph = phases(quad, t_j, wave_speed, dir);
    FarFieldBand band{dir, grid, {}, {}};
    band.plus.resize(grid.n);
    band.minus.resize(grid.n - 1);
    std::vector<cplx> scratch;
    for (int j = 1; j <= grid.n; ++j)
        band.plus[j - 1] = sum_band_sample(ph, quad.weight, grid.kappa + grid.omega(j), scratch);
    for (int j = 1; j < grid.n; ++j)
        band.minus[j - 1] = sum_band_sample(ph, quad.weight, grid.kappa - grid.omega(j), scratch);
    return band;
}

FarFieldBand farfield_band(const SourceScene &scene, std::size_t j, const Direction &dir, const FrequencyGrid &grid,
                           int pts_per_axis)
{
    const auto quad = pulse_quadrature(scene, j, pts_per_axis);
    return farfield_band(quad, scene.pulses[j], scene.wave_speed, dir, grid);
}

std::vector<double> time_signal(const SourceScene &scene, const Point &receiver, std::span<const double> t_grid,
                                std::size_t sphere_pts)
{
    if (scene.dim() != 3 || receiver.dim() != 3)
        throw ConfigError("the time-domain signal is only available for 3D scenes");
    if (scene.wave_speed != 1.0)
        throw ConfigError("the time-domain signal uses the unit wave speed kernel; set wave_speed = 1");
    if (sphere_pts < 16)
        throw ConfigError("sphere quadrature needs at least 16 nodes");

    const double golden = kPi * (3.0 - std::sqrt(5.0));
    const double n = static_cast<double>(sphere_pts);

    struct PulseFrame
    {
        Shape support;
        Point center;
        double amplitude;
        double dist;  // receiver to emitter centre
        double reach; // bounding radius of the support around its centre
        Point e1, e2, e3;
    };
    std::vector<PulseFrame> frames;
    for (std::size_t j = 0; j < scene.pulses.size(); ++j)
    {
        PulseFrame f{scene.support(j), {}, 1.0, 0.0, 0.0, {}, {}, {}};
        f.center = f.support.center();
        if (scene.weighting == PulseWeighting::cosine)
            f.amplitude = std::cos(scene.pulses[j]);
        const Box box = f.support.bounding_box();
        f.reach = 0.5 * (box.hi - box.lo).norm();
        const Point d = f.center - receiver;
        f.dist = d.norm();
        // Orthonormal frame whose pole points from the receiver to the emitter.
        f.e3 = f.dist > 0.0 ? d * (1.0 / f.dist) : Point(0.0, 0.0, 1.0);
        const Point helper = std::abs(f.e3[0]) < 0.9 ? Point(1.0, 0.0, 0.0) : Point(0.0, 1.0, 0.0);
        Point e1 = helper - f.e3 * helper.dot(f.e3);
        f.e1 = e1 * (1.0 / e1.norm());
        f.e2 = Point(f.e3[1] * f.e1[2] - f.e3[2] * f.e1[1], f.e3[2] * f.e1[0] - f.e3[0] * f.e1[2],
                     f.e3[0] * f.e1[1] - f.e3[1] * f.e1[0]);
        frames.push_back(std::move(f));
    }

    std::vector<double> out(t_grid.size(), 0.0);
    for (std::size_t k = 0; k < t_grid.size(); ++k)
    {
        const double t = t_grid[k];
        double total = 0.0;
        for (std::size_t j = 0; j < frames.size(); ++j)
        {
            const auto &f = frames[j];
            const double radius = t - scene.pulses[j];
            if (radius <= 0.0 || std::abs(radius - f.dist) > f.reach)
                continue;
            // Lattice nodes are ordered by decreasing height along e3, so the nodes that can
            // reach the support form a prefix of the sequence.
            double cos_cap = -1.0;
            if (f.dist > 0.0)
                cos_cap = std::clamp((radius * radius + f.dist * f.dist - f.reach * f.reach) / (2.0 * radius * f.dist),
                                     -1.0, 1.0);
            double acc = 0.0;
            for (std::size_t i = 0; i < sphere_pts; ++i)
            {
                const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / n;
                if (z < cos_cap)
                    break;
                const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
                const double phi = golden * static_cast<double>(i);
                const Point u = f.e1 * (r * std::cos(phi)) + f.e2 * (r * std::sin(phi)) + f.e3 * z;
                const Point y = receiver + u * radius;
                if (f.support.contains(y))
                    acc += scene.profile(y - f.center);
            }
            // (1 / (4 pi R)) * (4 pi R^2 / n) * sum
            total += f.amplitude * radius / n * acc;
        }
        out[k] = total;
    }
    return out;
}

void write_band_csv(std::ostream &os, std::span<const FarFieldBand> bands)
{
    os << "direction_index,omega,re,im\n";
    char line[160];
    for (std::size_t d = 0; d < bands.size(); ++d)
    {
        const auto &b = bands[d];
        auto emit = [&](double omega, const cplx &v) {
            std::snprintf(line, sizeof line, "%zu,%.12e,%.12e,%.12e\n", d, omega, v.real(), v.imag());
            os << line;
        };
        for (int j = 1; j <= b.grid.n; ++j)
            emit(b.grid.kappa + b.grid.omega(j), b.plus[j - 1]);
        for (int j = 1; j < b.grid.n; ++j)
            emit(b.grid.kappa - b.grid.omega(j), b.minus[j - 1]);
    }
}

} // namespace mffm
