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

#include "mffm/spectral.hpp"

#include <span>
#include <vector>

namespace mffm
{

// ================================================================================================
// Test vectors and the Picard series
// ================================================================================================

// values[n-1] = exp(-i tau_n (dir.y / c - eta)), n = 1..N
struct TestVector
{
    std::vector<cplx> values;
    Point y;
    double eta = 0.0;
    Direction direction;
    double wave_speed = 1.0;
    FrequencyGrid grid;
};

TestVector test_vector(const Point &y, double eta, const Direction &dir, double c, const FrequencyGrid &grid);

// Truncated Picard series of one F_sharp operator.
//
// Keeps the eigenpairs with lambda_n > cutoff_rel * lambda_max and evaluates
//   sum_n |psi_n^H phi|^2 / lambda_n
// in descending eigenvalue order. A vanishing operator (lambda_max = 0) evaluates to +inf.
class PicardSeries
{
  public:
    PicardSeries(const SharpOperator &op, double cutoff_rel);

    double evaluate(std::span<const cplx> phi) const;

    // Series at the test vector with phase s = dir.y / c - eta.
    double at_phase(double s) const;

    const Direction &direction() const { return direction_; }
    const FrequencyGrid &grid() const { return grid_; }
    std::size_t retained() const { return inv_lambda_.size(); }

  private:
    Direction direction_;
    FrequencyGrid grid_;
    bool degenerate_ = false;
    std::size_t n_ = 0;
    // Real and imaginary parts of the retained eigenvectors, laid out [row][eigen index].
    std::vector<double> re_;
    std::vector<double> im_;
    std::vector<double> inv_lambda_;
};

double picard_indicator(const SharpOperator &op, const TestVector &phi, double cutoff_rel);

// [I^(x)(y) + I^(-x)(y)]^{-1}; zero when either series is infinite.
double w_indicator(const SharpOperator &plus, const SharpOperator &minus, const Point &y, double eta, double c,
                   double cutoff_rel);

// ================================================================================================
// Field scans
// ================================================================================================

enum class Normalization
{
    raw,
    max_one,
};

struct IndicatorField
{
    SamplingGrid grid;
    std::vector<double> values; // one per cell, SamplingGrid order
    Normalization normalization = Normalization::raw;
};

// Operators of an antipodal observation pair (x, -x).
struct SharpPair
{
    SharpOperator plus;
    SharpOperator minus;
};

enum class Combine
{
    single_direction,  // 1 / I^(x) from the first pair's `plus` operator
    single_pair_w,     // W from the first pair
    multi_direction_i, // [sum over pairs and both signs of I]^{-1}
};

// Evaluates the chosen indicator at every cell centre. Cells only enter through their
// projections onto each direction, so each distinct projection is evaluated once.
IndicatorField scan_field(std::span<const SharpPair> pairs, const SamplingGrid &grid, double eta, double c,
                          double cutoff_rel, Combine combine, int jobs = 1);

// h(eta) = max of W_eta over the cells of `grid` inside the open ball |y| < radius.
std::vector<double> h_profile(const SharpOperator &plus, const SharpOperator &minus, const SamplingGrid &grid,
                              double radius, std::span<const double> etas, double c, double cutoff_rel, int jobs = 1);

struct PulseEstimate
{
    double eta1 = 0.0;
    double eta2 = 0.0;
    double t0 = 0.0;
    double width = 0.0; // c (eta2 - eta1)
};

// First/last eta with h >= rel_threshold * max(h). Throws NoSupportError when h has no positive value.
PulseEstimate estimate_pulse(std::span<const double> h, std::span<const double> etas, double rel_threshold, double c);

IndicatorField normalize(IndicatorField field);

// Cells with value >= level (apply to normalized fields for half-max sets).
std::vector<bool> superlevel_set(const IndicatorField &field, double level);

// Mean cell centre of the selected cells; throws NumericalError when none is selected.
Point centroid(const SamplingGrid &grid, const std::vector<bool> &mask);

} // namespace mffm
