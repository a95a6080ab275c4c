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

#include "mffm/imaging.hpp"

#include "mffm/error.hpp"
#include "mffm/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mffm
{

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

// Distinct values of `keys` and, for every input index, the position of its value.
template <class Key>
void unique_keys(const std::vector<Key> &keys, std::vector<Key> &distinct, std::vector<std::size_t> &slot)
{
    std::vector<std::size_t> order(keys.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
    distinct.clear();
    slot.assign(keys.size(), 0);
    for (std::size_t r = 0; r < order.size(); ++r)
    {
        const Key &k = keys[order[r]];
        if (distinct.empty() || distinct.back() != k)
            distinct.push_back(k);
        slot[order[r]] = distinct.size() - 1;
    }
}

void check_cutoff(double cutoff_rel)
{
    if (!(cutoff_rel >= 0.0 && cutoff_rel < 1.0))
        throw ConfigError("cutoff_rel must lie in [0, 1)");
}

void check_pair(const SharpOperator &plus, const SharpOperator &minus)
{
    if (!minus.direction.approx_equal(-plus.direction))
        throw ConfigError("the second operator of a pair must observe the opposite direction");
    if (!(plus.grid == minus.grid))
        throw ConfigError("paired operators use different frequency grids");
}

} // namespace

TestVector test_vector(const Point &y, double eta, const Direction &dir, double c, const FrequencyGrid &grid)
{
    TestVector tv{std::vector<cplx>(grid.n), y, eta, dir, c, grid};
    const double s = dir.dot(y) / c - eta;
    for (int n = 1; n <= grid.n; ++n)
        tv.values[n - 1] = std::polar(1.0, -grid.tau(n) * s);
    return tv;
}

// ------------------------------------------------------------------------------------------------
// PicardSeries
// ------------------------------------------------------------------------------------------------

PicardSeries::PicardSeries(const SharpOperator &op, double cutoff_rel) : direction_(op.direction), grid_(op.grid)
{
    check_cutoff(cutoff_rel);
    n_ = static_cast<std::size_t>(op.eig.values.size());
    const double lmax = op.lambda_max();
    if (!(lmax > 0.0))
    {
        degenerate_ = true;
        return;
    }
    std::size_t kept = 0;
    while (kept < n_ && op.eig.values(static_cast<Eigen::Index>(kept)) > cutoff_rel * lmax)
        ++kept;
    inv_lambda_.resize(kept);
    re_.resize(n_ * kept);
    im_.resize(n_ * kept);
    for (std::size_t k = 0; k < kept; ++k)
    {
        inv_lambda_[k] = 1.0 / op.eig.values(static_cast<Eigen::Index>(k));
        for (std::size_t row = 0; row < n_; ++row)
        {
            const cplx v = op.eig.vectors(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(k));
            re_[row * kept + k] = v.real();
            im_[row * kept + k] = v.imag();
        }
    }
}

double PicardSeries::evaluate(std::span<const cplx> phi) const
{
    if (phi.size() != n_)
        throw ConfigError("test vector length does not match the operator");
    if (degenerate_)
        return kInf;
    const std::size_t kept = inv_lambda_.size();
    std::vector<double> acc_re(kept, 0.0), acc_im(kept, 0.0);
    for (std::size_t row = 0; row < n_; ++row)
    {
        const double x = phi[row].real(), y = phi[row].imag();
        const double *a = &re_[row * kept];
        const double *b = &im_[row * kept];
        // conj(psi) * phi
        for (std::size_t k = 0; k < kept; ++k)
        {
            acc_re[k] += a[k] * x + b[k] * y;
            acc_im[k] += a[k] * y - b[k] * x;
        }
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < kept; ++k)
        sum += (acc_re[k] * acc_re[k] + acc_im[k] * acc_im[k]) * inv_lambda_[k];
    return sum;
}

double PicardSeries::at_phase(double s) const
{
    std::vector<cplx> phi(n_);
    for (std::size_t n = 1; n <= n_; ++n)
        phi[n - 1] = std::polar(1.0, -grid_.tau(static_cast<int>(n)) * s);
    return evaluate(phi);
}

double picard_indicator(const SharpOperator &op, const TestVector &phi, double cutoff_rel)
{
    if (!(phi.grid == op.grid))
        throw ConfigError("test vector and operator use different frequency grids");
    if (!phi.direction.approx_equal(op.direction))
        throw ConfigError("test vector and operator belong to different observation directions");
    return PicardSeries(op, cutoff_rel).evaluate(phi.values);
}

double w_indicator(const SharpOperator &plus, const SharpOperator &minus, const Point &y, double eta, double c,
                   double cutoff_rel)
{
    check_pair(plus, minus);
    const double ip = picard_indicator(plus, test_vector(y, eta, plus.direction, c, plus.grid), cutoff_rel);
    const double im = picard_indicator(minus, test_vector(y, eta, minus.direction, c, minus.grid), cutoff_rel);
    return 1.0 / (ip + im);
}

// ------------------------------------------------------------------------------------------------
// Scans
// ------------------------------------------------------------------------------------------------

IndicatorField scan_field(std::span<const SharpPair> pairs, const SamplingGrid &grid, double eta, double c,
                          double cutoff_rel, Combine combine, int jobs)
{
    if (pairs.empty())
        throw ConfigError("scan_field needs at least one operator pair");
    check_cutoff(cutoff_rel);

    std::vector<const SharpOperator *> ops;
    const std::size_t used_pairs = combine == Combine::multi_direction_i ? pairs.size() : 1;
    for (std::size_t m = 0; m < used_pairs; ++m)
    {
        if (combine != Combine::single_direction)
            check_pair(pairs[m].plus, pairs[m].minus);
        if (!(pairs[m].plus.grid == pairs[0].plus.grid))
            throw ConfigError("scan_field received operators on mixed frequency grids");
        if (pairs[m].plus.direction.dim() != grid.dim())
            throw ConfigError("sampling grid and observation directions differ in dimension");
        ops.push_back(&pairs[m].plus);
        if (combine != Combine::single_direction)
            ops.push_back(&pairs[m].minus);
    }

    const std::size_t cells = grid.size();
    std::vector<Point> centers(cells);
    for (std::size_t i = 0; i < cells; ++i)
        centers[i] = grid.cell_center(i);

    std::vector<double> total(cells, 0.0);
    std::vector<double> proj(cells), distinct, values;
    std::vector<std::size_t> slot;
    for (const SharpOperator *op : ops)
    {
        const PicardSeries series(*op, cutoff_rel);
        for (std::size_t i = 0; i < cells; ++i)
            proj[i] = op->direction.dot(centers[i]);
        unique_keys(proj, distinct, slot);
        values.assign(distinct.size(), 0.0);
        parallel_for(distinct.size(), jobs, [&](std::size_t k) { values[k] = series.at_phase(distinct[k] / c - eta); });
        for (std::size_t i = 0; i < cells; ++i)
            total[i] += values[slot[i]];
    }

    IndicatorField field{grid, std::vector<double>(cells), Normalization::raw};
    for (std::size_t i = 0; i < cells; ++i)
        field.values[i] = 1.0 / total[i];
    return field;
}

std::vector<double> h_profile(const SharpOperator &plus, const SharpOperator &minus, const SamplingGrid &grid,
                              double radius, std::span<const double> etas, double c, double cutoff_rel, int jobs)
{
    check_pair(plus, minus);
    check_cutoff(cutoff_rel);
    if (etas.empty())
        throw ConfigError("h_profile needs at least one eta");
    for (std::size_t k = 1; k < etas.size(); ++k)
        if (!(etas[k] > etas[k - 1]))
            throw ConfigError("eta samples must be ascending");

    // W depends on a cell only through its two projections.
    std::vector<std::pair<double, double>> keys;
    for (std::size_t i = 0; i < grid.size(); ++i)
    {
        const Point y = grid.cell_center(i);
        if (y.dot(y) < radius * radius)
            keys.emplace_back(plus.direction.dot(y), minus.direction.dot(y));
    }
    std::vector<std::pair<double, double>> distinct;
    std::vector<std::size_t> slot;
    unique_keys(keys, distinct, slot);

    const PicardSeries sp(plus, cutoff_rel), sm(minus, cutoff_rel);
    std::vector<double> h(etas.size(), 0.0);
    parallel_for(etas.size(), jobs, [&](std::size_t k) {
        double best = 0.0;
        for (const auto &[p, q] : distinct)
            best = std::max(best, 1.0 / (sp.at_phase(p / c - etas[k]) + sm.at_phase(q / c - etas[k])));
        h[k] = best;
    });
    return h;
}

PulseEstimate estimate_pulse(std::span<const double> h, std::span<const double> etas, double rel_threshold, double c)
{
    if (h.size() != etas.size() || h.empty())
        throw ConfigError("h profile and eta samples must have the same non-zero length");
    double hmax = 0.0;
    for (double v : h)
        if (std::isfinite(v))
            hmax = std::max(hmax, v);
    if (!(hmax > 0.0))
        throw NoSupportError("h(eta) vanishes on the whole eta window");
    std::size_t first = h.size(), last = 0;
    for (std::size_t k = 0; k < h.size(); ++k)
    {
        if (h[k] >= rel_threshold * hmax)
        {
            first = std::min(first, k);
            last = k;
        }
    }
    PulseEstimate est;
    est.eta1 = etas[first];
    est.eta2 = etas[last];
    est.t0 = 0.5 * (est.eta1 + est.eta2);
    est.width = c * (est.eta2 - est.eta1);
    return est;
}

IndicatorField normalize(IndicatorField field)
{
    double m = 0.0;
    for (double v : field.values)
        m = std::max(m, v);
    if (m > 0.0 && std::isfinite(m))
        for (double &v : field.values)
            v /= m;
    field.normalization = Normalization::max_one;
    return field;
}

std::vector<bool> superlevel_set(const IndicatorField &field, double level)
{
    std::vector<bool> mask(field.values.size());
    for (std::size_t i = 0; i < mask.size(); ++i)
        mask[i] = field.values[i] >= level;
    return mask;
}

Point centroid(const SamplingGrid &grid, const std::vector<bool> &mask)
{
    Point sum = Point::zero(grid.dim());
    std::size_t count = 0;
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask[i])
        {
            sum = sum + grid.cell_center(i);
            ++count;
        }
    if (count == 0)
        throw NumericalError("centroid of an empty cell set");
    return sum * (1.0 / static_cast<double>(count));
}

} // namespace mffm
