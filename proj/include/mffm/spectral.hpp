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

#include "mffm/toeplitz.hpp"

#include <Eigen/Dense>

namespace mffm
{

// Eigenvalues in descending order; column n of `vectors` pairs with values(n).
struct EigenSystem
{
    Eigen::VectorXd values;
    CMatrix vectors;
};

// Cyclic complex Jacobi for Hermitian matrices.
//
// Each (p, q) rotation is the real Jacobi rotation conjugated by the phase of a_pq, so that
// G^H A G annihilates a_pq while keeping A Hermitian. Sweeps run in row-cyclic order and stop
// once the off-diagonal Frobenius mass drops below 1e-14 ||A||_F. Throws ConfigError when
// ||A - A^H||_max > 1e-10 ||A||_max and ConvergenceError after max_sweeps.
EigenSystem hermitian_eigen(const CMatrix &a, int max_sweeps = 60);

// V |Lambda| V^H
CMatrix spectral_abs(const CMatrix &a);

// |Re F| + |Im F| with Re F = (F + F^H)/2 and Im F = (F - F^H)/(2i), together with its eigensystem.
// Eigenvalues in [-1e-12 lambda_max, 0) are clamped to zero.
struct SharpOperator
{
    CMatrix matrix;
    EigenSystem eig;
    Direction direction;
    FrequencyGrid grid;

    double lambda_max() const { return eig.values.size() ? eig.values(0) : 0.0; }
};

SharpOperator sharpen(const CMatrix &f, const Direction &direction, const FrequencyGrid &grid);
inline SharpOperator sharpen(const ToeplitzMatrix &f) { return sharpen(f.entries, f.direction, f.grid); }

} // namespace mffm
