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

#include "mffm/spectral.hpp"

#include "mffm/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mffm
{

namespace
{

double off_diagonal_norm(const CMatrix &a)
{
    double s = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            if (i != j)
                s += std::norm(a(i, j));
    return std::sqrt(s);
}

CMatrix hermitian_part(const CMatrix &a) { return 0.5 * (a + a.adjoint()); }

} // namespace

EigenSystem hermitian_eigen(const CMatrix &input, int max_sweeps)
{
    if (input.rows() != input.cols())
        throw ConfigError("hermitian_eigen expects a square matrix");
    const Eigen::Index n = input.rows();
    const double amax = n ? input.cwiseAbs().maxCoeff() : 0.0;
    if (n && (input - input.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * amax)
        throw ConfigError("hermitian_eigen received a non-Hermitian matrix");

    CMatrix a = hermitian_part(input);
    CMatrix v = CMatrix::Identity(n, n);
    const double fro = a.norm();
    const double tol = 1e-14 * fro;

    int sweep = 0;
    while (off_diagonal_norm(a) > tol)
    {
        if (sweep++ == max_sweeps)
            throw ConvergenceError("Jacobi eigensolver did not converge");
        for (Eigen::Index p = 0; p < n - 1; ++p)
        {
            for (Eigen::Index q = p + 1; q < n; ++q)
            {
                const cplx apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag == 0.0)
                    continue;
                const cplx phase = apq / mag; // e^{i phi}
                const double app = a(p, p).real(), aqq = a(q, q).real();
                const double theta = (aqq - app) / (2.0 * mag);
                double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                if (theta < 0.0)
                    t = -t;
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                // G_pp = G_qq = c, G_pq = s e^{i phi}, G_qp = -s e^{-i phi}
                const cplx gpq = s * phase;
                const cplx gqp = -s * std::conj(phase);

                for (Eigen::Index k = 0; k < n; ++k)
                {
                    if (k == p || k == q)
                        continue;
                    const cplx akp = a(k, p), akq = a(k, q);
                    const cplx np_ = c * akp + gqp * akq;
                    const cplx nq_ = gpq * akp + c * akq;
                    a(k, p) = np_;
                    a(k, q) = nq_;
                    a(p, k) = std::conj(np_);
                    a(q, k) = std::conj(nq_);
                }
                a(p, p) = app - t * mag;
                a(q, q) = aqq + t * mag;
                a(p, q) = 0.0;
                a(q, p) = 0.0;

                for (Eigen::Index k = 0; k < n; ++k)
                {
                    const cplx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp + gqp * vkq;
                    v(k, q) = gpq * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index i, Eigen::Index j) { return a(i, i).real() > a(j, j).real(); });
    EigenSystem es{Eigen::VectorXd(n), CMatrix(n, n)};
    for (Eigen::Index k = 0; k < n; ++k)
    {
        es.values(k) = a(order[k], order[k]).real();
        es.vectors.col(k) = v.col(order[k]);
    }
    return es;
}

CMatrix spectral_abs(const CMatrix &a)
{
    const auto es = hermitian_eigen(a);
    const CMatrix out = es.vectors * es.values.cwiseAbs().asDiagonal() * es.vectors.adjoint();
    return hermitian_part(out);
}

SharpOperator sharpen(const CMatrix &f, const Direction &direction, const FrequencyGrid &grid)
{
    if (f.rows() != f.cols())
        throw ConfigError("sharpen expects a square matrix");
    const CMatrix re = 0.5 * (f + f.adjoint());
    const CMatrix im = (f - f.adjoint()) / cplx(0.0, 2.0);
    SharpOperator op{hermitian_part(spectral_abs(re) + spectral_abs(im)), {}, direction, grid};
    op.eig = hermitian_eigen(op.matrix);
    const double lmax = std::max(0.0, op.lambda_max());
    for (Eigen::Index k = 0; k < op.eig.values.size(); ++k)
    {
        double &lam = op.eig.values(k);
        if (lam >= 0.0)
            continue;
        if (lam < -1e-12 * lmax)
            throw NumericalError("F_sharp has a significantly negative eigenvalue");
        lam = 0.0;
    }
    return op;
}

} // namespace mffm
