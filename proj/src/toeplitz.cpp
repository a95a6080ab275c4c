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

#include "mffm/toeplitz.hpp"

#include "mffm/error.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

namespace mffm
{

ToeplitzMatrix assemble_toeplitz(const FarFieldBand &band)
{
    const int n = band.grid.n;
    if (static_cast<int>(band.plus.size()) != n || static_cast<int>(band.minus.size()) != n - 1)
        throw ConfigError("far-field band must hold exactly 2N-1 samples");
    const double dw = band.grid.step();
    ToeplitzMatrix t{CMatrix(n, n), band.grid, band.direction};
    for (int col = 0; col < n; ++col)
        for (int row = 0; row < n; ++row)
            t.entries(row, col) = dw * (row >= col ? band.plus[row - col] : band.minus[col - row - 1]);
    return t;
}

double spectral_norm(const CMatrix &a, double rel_tol, int max_iter)
{
    if (a.rows() != a.cols())
        throw ConfigError("spectral_norm expects a square matrix");
    if (a.size() == 0 || a.cwiseAbs().maxCoeff() == 0.0)
        return 0.0;
    const CMatrix b = a.adjoint() * a;
    // Deterministic start with no special alignment to the coordinate axes.
    CVector v(a.cols());
    for (Eigen::Index i = 0; i < v.size(); ++i)
        v(i) = cplx(1.0 + 0.1 * std::sin(1.0 + i), 0.05 * std::cos(2.0 + i));
    v.normalize();
    for (int it = 0; it < max_iter; ++it)
    {
        const CVector w = b * v;
        const double rayleigh = v.dot(w).real();
        if (rayleigh <= 0.0)
            return 0.0;
        const double residual = (w - rayleigh * v).norm();
        if (residual <= rel_tol * rayleigh)
            return std::sqrt(rayleigh);
        v = w / w.norm();
    }
    throw ConvergenceError("power iteration for the spectral norm did not converge");
}

double counter_uniform(std::uint64_t seed, std::uint64_t counter)
{
    // splitmix64 finaliser applied to a seed-keyed counter
    std::uint64_t z = seed * 0xD1B54A32D192ED03ULL + (counter + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

CMatrix noise_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed, NoiseDistribution dist)
{
    CMatrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
    {
        for (Eigen::Index c = 0; c < cols; ++c)
        {
            const auto k = static_cast<std::uint64_t>(r * cols + c);
            if (dist == NoiseDistribution::uniform)
            {
                m(r, c) = cplx(2.0 * counter_uniform(seed, 2 * k) - 1.0, 2.0 * counter_uniform(seed, 2 * k + 1) - 1.0);
            }
            else
            {
                // Box-Muller on two independent counters per component.
                auto normal = [&](std::uint64_t base) {
                    const double u1 = 1.0 - counter_uniform(seed, base);
                    const double u2 = counter_uniform(seed, base + 1);
                    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
                };
                m(r, c) = cplx(normal(4 * k), normal(4 * k + 2));
            }
        }
    }
    return m;
}

CMatrix add_noise(const CMatrix &f, const NoiseSpec &spec)
{
    if (spec.level < 0.0)
        throw ConfigError("noise level must be non-negative");
    if (spec.level == 0.0)
        return f;
    const double scale = spec.level * spectral_norm(f);
    return f + scale * noise_matrix(f.rows(), f.cols(), spec.seed, spec.distribution);
}

void write_matrix_csv(std::ostream &os, const CMatrix &m)
{
    os << "row,col,re,im\n";
    char line[128];
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
        {
            std::snprintf(line, sizeof line, "%td,%td,%.12e,%.12e\n", static_cast<std::ptrdiff_t>(r),
                          static_cast<std::ptrdiff_t>(c), m(r, c).real(), m(r, c).imag());
            os << line;
        }
}

} // namespace mffm
