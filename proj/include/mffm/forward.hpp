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

#pragma once

#include "mffm/geometry.hpp"

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace mffm
{

using cplx = std::complex<double>;

// ================================================================================================
// Source description
// ================================================================================================

// S(z) = 2 z1 + 3 z2^2 + z1 z2^2 + 1, evaluated on the offset z = x - a(t_j).
// In 3D only the first two offset components enter.
struct PolynomialProfile
{
};

struct ConstantProfile
{
    double value = 1.0;
};

// strength * exp(-|z|^2 / (2 width)) / (sqrt(2 pi) width)
struct GaussianProfile
{
    double strength = 1.0;
    double width = 0.01;
};

class SourceProfile
{
  public:
    using Kind = std::variant<PolynomialProfile, ConstantProfile, GaussianProfile>;

    SourceProfile() = default;
    SourceProfile(Kind kind) : kind_(kind) {}

    double operator()(const Point &offset) const;
    const Kind &kind() const { return kind_; }
    std::string name() const;

  private:
    Kind kind_{PolynomialProfile{}};
};

// Amplitude multiplying pulse j in the time domain: 1, or cos(t_j).
enum class PulseWeighting
{
    unit,
    cosine,
};

struct SourceScene
{
    Shape shape;               // reference shape; its center is replaced by a(t_j)
    SourceProfile profile;
    Trajectory trajectory;
    std::vector<double> pulses; // strictly increasing excitation instants
    double wave_speed = 1.0;
    PulseWeighting weighting = PulseWeighting::unit;

    int dim() const { return shape.dim(); }
    // Support of pulse j, i.e. the shape translated to a(t_j).
    Shape support(std::size_t j) const;

    // Throws ConfigError on structural problems; returns warnings for violated physical
    // assumptions (source faster than the wave speed, non-separable pulses).
    std::vector<std::string> validate() const;
};

// ================================================================================================
// Frequency grid and far-field bands
// ================================================================================================

// Centre frequency kappa, half bandwidth K and N samples; dw = K/N.
struct FrequencyGrid
{
    double kappa = 0.0;
    double half_band = 0.0;
    int n = 1;

    FrequencyGrid() = default;
    FrequencyGrid(double kappa_, double half_band_, int n_);

    static FrequencyGrid from_band(double omega_min, double omega_max, int n);

    double step() const { return half_band / n; }
    // omega_j = (j - 0.5) dw, j = 1..N
    double omega(int j) const { return (j - 0.5) * step(); }
    // tau_n = n dw, n = 1..N
    double tau(int n_) const { return n_ * step(); }

    bool operator==(const FrequencyGrid &o) const = default;
};

// 2N-1 far-field samples for one observation direction:
// plus[j-1] = u(kappa + omega_j), j = 1..N;  minus[j-1] = u(kappa - omega_j), j = 1..N-1.
struct FarFieldBand
{
    Direction direction;
    FrequencyGrid grid;
    std::vector<cplx> plus;
    std::vector<cplx> minus;

    std::size_t sample_count() const { return plus.size() + minus.size(); }
};

// ================================================================================================
// Synthesis
// ================================================================================================

// Quadrature rule of a pulse support, with profile values folded into the weights.
struct WeightedQuadrature
{
    std::vector<double> position; // flattened points, dim entries each
    std::vector<double> weight;   // w_q * S(y_q - a(t_j))
    int dim = 2;
};

WeightedQuadrature pulse_quadrature(const SourceScene &scene, std::size_t j, int pts_per_axis);

// u(dir, omega) = (2 pi)^{-1/2} sum_q w_q exp(-i omega (dir.y_q / c - t_j)) S(y_q - a(t_j))
cplx farfield(const SourceScene &scene, std::size_t j, const Direction &dir, double omega, int pts_per_axis);

FarFieldBand farfield_band(const SourceScene &scene, std::size_t j, const Direction &dir, const FrequencyGrid &grid,
                           int pts_per_axis);

// Same, but reusing a precomputed quadrature of pulse j.
FarFieldBand farfield_band(const WeightedQuadrature &quad, double t_j, double wave_speed, const Direction &dir,
                           const FrequencyGrid &grid);

// Time-domain receiver signal U(receiver, t) for a 3D scene with c = 1.
std::vector<double> time_signal(const SourceScene &scene, const Point &receiver, std::span<const double> t_grid,
                                std::size_t sphere_pts);

// Pairwise (cascade) summation in a fixed order.
cplx pairwise_sum(std::span<const cplx> values);

// CSV with header `direction_index,omega,re,im`; plus samples first, then minus samples.
void write_band_csv(std::ostream &os, std::span<const FarFieldBand> bands);

} // namespace mffm
