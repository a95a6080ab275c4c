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


// End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero
// when any criterion fails. Scenarios are read from the shipped example configs.

#include "mffm/error.hpp"
#include "mffm/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace mffm;

namespace
{

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

Scenario config(const std::string &name)
{
    return load_scenario(std::string(MFFM_CONFIG_DIR) + "/" + name + ".json");
}

struct Outcome
{
    bool pass = false;
    std::string detail;
};

PulseEstimate estimate(const Scenario &s, std::size_t j = 0)
{
    const PulseProfile p = pulse_profile(s, j, 1);
    return estimate_pulse(p.h, p.etas, s.thresholds.rel_threshold, s.scene.wave_speed);
}

// ---- 1 -------------------------------------------------------------------------------------------

Outcome pulse_recovery()
{
    Outcome o{true, ""};
    std::ostringstream os;
    for (int t : {2, 4, 6})
    {
        const auto start = Clock::now();
        const PulseEstimate e = estimate(config("disk_pulse_t" + std::to_string(t)));
        const double dt = seconds_since(start);
        const bool ok = std::abs(e.t0 - t) <= 0.1 && std::abs(e.eta1 - (t - 1)) <= 0.2 &&
                        std::abs(e.eta2 - (t + 1)) <= 0.2 && dt < 30.0;
        o.pass = o.pass && ok;
        char buf[160];
        std::snprintf(buf, sizeof buf, "t0=%d: est %.3f [%.2f, %.2f] %.2fs; ", t, e.t0, e.eta1, e.eta2, dt);
        os << buf;
    }
    o.detail = os.str();
    return o;
}

// ---- 2 -------------------------------------------------------------------------------------------

Outcome direction_robustness()
{
    const PulseEstimate axis = estimate(config("disk_pulse_t4"));
    const PulseEstimate diag = estimate(config("disk_pulse_diagonal"));
    char buf[160];
    std::snprintf(buf, sizeof buf, "axis pair t0=%.3f, diagonal pair t0=%.3f", axis.t0, diag.t0);
    return {std::abs(axis.t0 - diag.t0) <= 0.1 && std::abs(diag.t0 - 4.0) <= 0.1, buf};
}

// ---- 3 -------------------------------------------------------------------------------------------

Outcome strip_geometry()
{
    const Scenario s = config("strip_single");
    const auto fields = strip_fields(s, s.strip.etas, 1);
    std::vector<double> x, y;
    for (std::size_t k = 0; k < fields.size(); ++k)
    {
        x.push_back(s.strip.etas[k] - 4.0);
        y.push_back(band_center(fields[k], s.directions[0], 0.5));
    }
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < x.size(); ++k)
    {
        sx += x[k];
        sy += y[k];
        sxx += x[k] * x[k];
        sxy += x[k] * y[k];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    std::ostringstream os;
    os << "slope=" << slope << " centers:";
    for (double v : y)
        os << ' ' << v;
    return {std::abs(slope - 1.0) <= 0.05, os.str()};
}

// ---- 4 -------------------------------------------------------------------------------------------

Outcome empty_intersection()
{
    const Scenario s = config("strip_pair");
    const std::vector<double> etas{2.0, 4.0};
    const auto f = strip_fields(s, etas, 1);
    const double m2 = *std::max_element(f[0].values.begin(), f[0].values.end());
    const double m4 = *std::max_element(f[1].values.begin(), f[1].values.end());
    char buf[160];
    std::snprintf(buf, sizeof buf, "max W(eta=2)=%.3e, max W(eta=4)=%.3e, ratio=%.3e", m2, m4, m2 / m4);
    return {m4 > 0.0 && m2 <= 1e-6 * m4, buf};
}

// ---- 5 -------------------------------------------------------------------------------------------

using Vec2 = std::array<double, 2>;

double cross(const Vec2 &o, const Vec2 &a, const Vec2 &b)
{
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Andrew's monotone chain; counter-clockwise.
std::vector<Vec2> convex_hull(std::vector<Vec2> p)
{
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    std::vector<Vec2> h(2 * p.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
    {
        while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 0)
            --k;
        h[k++] = p[i];
    }
    for (std::size_t i = p.size() - 1, t = k + 1; i > 0; --i)
    {
        while (k >= t && cross(h[k - 2], h[k - 1], p[i - 1]) <= 0)
            --k;
        h[k++] = p[i - 1];
    }
    h.resize(k - 1);
    return h;
}

double distance_to_hull(const std::vector<Vec2> &h, const Vec2 &q)
{
    bool inside = true;
    double best = 1e300;
    for (std::size_t i = 0; i < h.size(); ++i)
    {
        const Vec2 &a = h[i], &b = h[(i + 1) % h.size()];
        if (cross(a, b, q) < 0)
            inside = false;
        const double ex = b[0] - a[0], ey = b[1] - a[1];
        const double t = std::clamp(((q[0] - a[0]) * ex + (q[1] - a[1]) * ey) / (ex * ex + ey * ey), 0.0, 1.0);
        best = std::min(best, std::hypot(q[0] - a[0] - t * ex, q[1] - a[1] - t * ey));
    }
    return inside ? 0.0 : best;
}

Outcome hull_imaging()
{
    Outcome o{true, ""};
    std::ostringstream os;
    for (const char *name : {"hull_disk", "hull_kite", "hull_rounded_square"})
    {
        const Scenario s = config(name);
        const double t0 = estimate(s, s.hull.pulse).t0;
        const IndicatorField f = hull_field(s, s.hull.pulse, t0, 1);
        const auto mask = superlevel_set(f, s.thresholds.field_level);
        const Shape support = s.scene.support(s.hull.pulse);

        std::vector<Vec2> pts;
        for (const auto &q : quadrature_points(support, 400))
            pts.push_back({q.point[0], q.point[1]});
        const auto hull = convex_hull(pts);
        const double tol = 2.0 * std::max(s.sampling.cell_width(0), s.sampling.cell_width(1));

        std::size_t in_support = 0, covered = 0, outside = 0;
        for (std::size_t i = 0; i < mask.size(); ++i)
        {
            const Point y = s.sampling.cell_center(i);
            if (support.contains(y))
            {
                ++in_support;
                covered += mask[i];
            }
            if (mask[i] && distance_to_hull(hull, {y[0], y[1]}) > tol)
                ++outside;
        }
        const double coverage = static_cast<double>(covered) / static_cast<double>(in_support);
        const bool ok = coverage >= 0.8 && outside == 0;
        o.pass = o.pass && ok;
        char buf[200];
        std::snprintf(buf, sizeof buf, "%s t0=%.2f coverage=%.3f cells-outside-dilated-hull=%zu; ", name, t0,
                      coverage, outside);
        os << buf;
    }
    o.detail = os.str();
    return o;
}

// ---- 6, 7 ----------------------------------------------------------------------------------------

struct TrackScore
{
    std::size_t good = 0, total = 0;
    double worst = 0.0, seconds = 0.0;
};

TrackScore track(const std::string &name)
{
    const auto start = Clock::now();
    const TrajectoryResult r = trajectory_run(config(name), 1);
    TrackScore sc;
    for (const auto &e : r.entries)
    {
        ++sc.total;
        if (e.centroid)
        {
            sc.worst = std::max(sc.worst, e.error);
            sc.good += e.error <= 0.3;
        }
        else
            sc.worst = INFINITY;
    }
    sc.seconds = seconds_since(start);
    return sc;
}

Outcome trajectories()
{
    Outcome o{true, ""};
    std::ostringstream os;
    for (const char *name : {"trajectory_cardioid", "trajectory_trifolium", "trajectory_star"})
    {
        const TrackScore sc = track(name);
        const double frac = static_cast<double>(sc.good) / static_cast<double>(sc.total);
        bool ok = frac >= 0.9;
        if (std::string(name) == "trajectory_cardioid")
            ok = ok && sc.seconds < 600.0;
        o.pass = o.pass && ok;
        char buf[200];
        std::snprintf(buf, sizeof buf, "%s %zu/%zu within 0.3 (worst %.3f, %.1fs); ", name + 11, sc.good, sc.total,
                      sc.worst, sc.seconds);
        os << buf;
    }
    o.detail = os.str();
    return o;
}

Outcome helix()
{
    const TrackScore sc = track("helix_3d");
    const double frac = static_cast<double>(sc.good) / static_cast<double>(sc.total);
    char buf[200];
    std::snprintf(buf, sizeof buf, "%zu/%zu processed pulses within 0.3 (worst %.3f, %.1fs)", sc.good, sc.total,
                  sc.worst, sc.seconds);
    return {frac >= 0.85, buf};
}

// ---- 8 -------------------------------------------------------------------------------------------

Outcome noise()
{
    Outcome o{true, ""};
    std::ostringstream os;
    // The configured seed plus two more draws, so the result does not hinge on one realization.
    for (const char *name : {"noise_2pct", "noise_5pct", "noise_10pct"})
    {
        Scenario s = config(name);
        const bool asserted = std::string(name) != "noise_10pct";
        os << name + 6 << ':';
        for (std::uint64_t extra : {0ULL, 1ULL, 2ULL})
        {
            s.noise.seed = config(name).noise.seed + extra;
            double t0 = NAN;
            try
            {
                t0 = estimate(s).t0;
            }
            catch (const NumericalError &)
            {
            }
            if (asserted)
                o.pass = o.pass && std::abs(t0 - 4.0) <= 0.2;
            char buf[32];
            std::snprintf(buf, sizeof buf, " %.3f", t0);
            os << buf;
        }
        os << (asserted ? "; " : " (reported only); ");
    }
    o.detail = os.str();
    return o;
}

// ---- 9 -------------------------------------------------------------------------------------------

Outcome time_separability()
{
    const Scenario s = config("timesignal_gaussian");
    const auto t = s.timesignal.samples();
    const auto u = time_signal(s.scene, s.timesignal.receiver, t, s.timesignal.sphere_pts);
    const auto peaks = peak_times(t, u);
    const double expect[] = {3.0, 4.5, 6.0, 7.5, 9.0, 10.5, 12.0};
    bool ok = peaks.size() == 7;
    std::ostringstream os;
    os << "peaks:";
    for (std::size_t k = 0; k < peaks.size(); ++k)
    {
        os << ' ' << peaks[k];
        if (k < 7)
            ok = ok && std::abs(peaks[k] - expect[k]) <= 0.1;
    }
    return {ok, os.str()};
}

// ---- 10 ------------------------------------------------------------------------------------------

Outcome numerics()
{
    std::ostringstream os;
    bool ok = true;
    auto note = [&](const char *what, double v, bool pass) {
        os << what << '=' << v << (pass ? "" : "(!)") << ' ';
        ok = ok && pass;
    };

    const Scenario s = config("disk_pulse_t4");
    const Direction x = s.directions[0];
    const FarFieldBand band = farfield_band(s.scene, 0, x, s.grid, s.pts_per_axis);
    const ToeplitzMatrix f = assemble_toeplitz(band);
    const SharpOperator sharp = sharpen(f);

    // Hermitian eigen residual / orthonormality: the real F_sharp and a random Hermitian matrix.
    const CMatrix r = noise_matrix(48, 48, 2026, NoiseDistribution::gaussian);
    const CMatrix h = (r + r.adjoint()) * 0.5;
    double res = 0.0, orth = 0.0;
    for (const CMatrix *a : {&sharp.matrix, &h})
    {
        const EigenSystem es = a == &sharp.matrix ? sharp.eig : hermitian_eigen(*a);
        const CMatrix lam = es.values.cast<cplx>().asDiagonal();
        res = std::max(res, (*a * es.vectors - es.vectors * lam).norm() / a->norm());
        orth = std::max(orth, (es.vectors.adjoint() * es.vectors - CMatrix::Identity(48, 48)).norm());
    }
    note("eigen_residual", res, res <= 1e-10);
    note("orthonormality", orth, orth <= 1e-10);

    const CMatrix ah = spectral_abs(h);
    const double sq = (ah * ah - h * h).norm() / (h * h).norm();
    note("abs_square", sq, sq <= 1e-9);

    bool toeplitz = true;
    for (Eigen::Index i = 1; i < 48; ++i)
        for (Eigen::Index j = 1; j < 48; ++j)
            toeplitz = toeplitz && f.entries(i, j) == f.entries(i - 1, j - 1);
    note("toeplitz_exact", toeplitz ? 0.0 : 1.0, toeplitz);

    double conj_err = 0.0;
    for (std::size_t k = 0; k < band.minus.size(); ++k)
        conj_err = std::max(conj_err, std::abs(band.minus[k] - std::conj(band.plus[k])) / std::abs(band.plus[k]));
    note("conjugate_symmetry", conj_err, conj_err <= 1e-12);

    const SharpOperator id = sharpen(CMatrix::Identity(48, 48), x, s.grid);
    const double parseval = picard_indicator(id, test_vector(Point(0.7, -1.1), 2.5, x, 1.0, s.grid), 0.0);
    note("parseval_minus_N", std::abs(parseval - 48.0), std::abs(parseval - 48.0) <= 1e-12 * 48.0);

    Scenario noisy = s;
    noisy.noise = NoiseSpec{0.05, 77, NoiseDistribution::uniform};
    const Direction dirs[] = {x};
    const auto a = build_pairs(noisy, 0, dirs, 1);
    const auto b = build_pairs(noisy, 0, dirs, 2);
    const bool same = add_noise(f.entries, noisy.noise) == add_noise(f.entries, noisy.noise) &&
                      a[0].plus.matrix == b[0].plus.matrix && a[0].minus.matrix == b[0].minus.matrix;
    note("noise_bitwise", same ? 0.0 : 1.0, same);
    return {ok, os.str()};
}

} // namespace

int main()
{
    const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria = {
        {"pulse-moment recovery", pulse_recovery},
        {"direction robustness", direction_robustness},
        {"strip geometry", strip_geometry},
        {"empty-intersection suppression", empty_intersection},
        {"hull imaging", hull_imaging},
        {"trajectory", trajectories},
        {"3D helix", helix},
        {"noise", noise},
        {"time-domain separability", time_separability},
        {"numerics property suite", numerics},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k)
    {
        Outcome o;
        try
        {
            o = criteria[k].second();
        }
        catch (const std::exception &e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
    return failed == 0 ? 0 : 1;
}
