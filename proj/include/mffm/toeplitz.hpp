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

#include "mffm/forward.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>

namespace mffm
{

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Discrete far-field operator of one observation direction.
//   entries(n, m) = dw * u(kappa + omega_{n-m+1})  for n >= m
//   entries(n, m) = dw * u(kappa - omega_{m-n})    for n <  m
struct ToeplitzMatrix
{
    CMatrix entries;
    FrequencyGrid grid;
    Direction direction;
};

ToeplitzMatrix assemble_toeplitz(const FarFieldBand &band);

// Largest singular value by power iteration on A^H A.
// Stops once ||A^H A v - s^2 v|| <= rel_tol * s^2; throws ConvergenceError after max_iter.
double spectral_norm(const CMatrix &a, double rel_tol = 1e-8, int max_iter = 10000);

enum class NoiseDistribution
{
    uniform,  // real and imaginary parts uniform on [-1, 1]
    gaussian, // real and imaginary parts standard normal
};

struct NoiseSpec
{
    double level = 0.0;
    std::uint64_t seed = 0;
    NoiseDistribution distribution = NoiseDistribution::uniform;
};

// Counter-based generator: the value at (seed, counter) does not depend on call order.
double counter_uniform(std::uint64_t seed, std::uint64_t counter); // in [0, 1)

// The perturbation matrix M; entry (r, c) draws from counters derived from r * cols + c.
CMatrix noise_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed, NoiseDistribution dist);

// F + level * ||F||_2 * M. The result is generally not Toeplitz.
CMatrix add_noise(const CMatrix &f, const NoiseSpec &spec);

// CSV dump with header `row,col,re,im`.
void write_matrix_csv(std::ostream &os, const CMatrix &m);

} // namespace mffm
