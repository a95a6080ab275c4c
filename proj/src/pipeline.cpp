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


#include "mffm/pipeline.hpp"

#include "mffm/error.hpp"
#include "mffm/io.hpp"
#include "mffm/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <map>
#include <numbers>
#include <sstream>

namespace mffm
{

using nlohmann::json;

// ------------------------------------------------------------------------------------------------
// Building blocks
// ------------------------------------------------------------------------------------------------

std::uint64_t operator_seed(std::uint64_t base, std::size_t pulse, const Direction &dir)
{
    std::string bytes(8 * 5, '\0');
    auto put = [&](std::size_t slot, std::uint64_t v) { std::memcpy(&bytes[8 * slot], &v, 8); };
    put(0, base);
    put(1, static_cast<std::uint64_t>(pulse));
    for (std::size_t a = 0; a < 3; ++a)
    {
        double x = a < static_cast<std::size_t>(dir.dim()) ? dir.vec()[a] : 0.0;
        if (x == 0.0)
            x = 0.0; // fold -0.0
        std::uint64_t bits;
        std::memcpy(&bits, &x, 8);
        put(2 + a, bits);
    }
    return fnv1a64(bytes);
}

SharpOperator build_operator(const Scenario &s, const WeightedQuadrature &quad, std::size_t pulse,
                             const Direction &dir)
{
    const FarFieldBand band = farfield_band(quad, s.scene.pulses.at(pulse), s.scene.wave_speed, dir, s.grid);
    const ToeplitzMatrix f = assemble_toeplitz(band);
    if (s.noise.level > 0.0)
    {
        const NoiseSpec spec{s.noise.level, operator_seed(s.noise.seed, pulse, dir), s.noise.distribution};
        return sharpen(add_noise(f.entries, spec), dir, s.grid);
    }
    return sharpen(f);
}

std::vector<SharpPair> build_pairs(const Scenario &s, std::size_t pulse, std::span<const Direction> dirs, int jobs)
{
    const WeightedQuadrature quad = pulse_quadrature(s.scene, pulse, s.pts_per_axis);
    std::vector<SharpOperator> ops(2 * dirs.size());
    parallel_for(ops.size(), jobs, [&](std::size_t k) {
        const Direction d = k % 2 == 0 ? dirs[k / 2] : -dirs[k / 2];
        ops[k] = build_operator(s, quad, pulse, d);
    });
    std::vector<SharpPair> pairs;
    for (std::size_t m = 0; m < dirs.size(); ++m)
        pairs.push_back(SharpPair{std::move(ops[2 * m]), std::move(ops[2 * m + 1])});
    return pairs;
}

PulseProfile pulse_profile(const Scenario &s, std::size_t pulse, int jobs)
{
    const double anchor = s.eta_window.pulse_relative ? s.scene.pulses.at(pulse) : 0.0;
    PulseProfile p;
    p.etas = s.eta_window.samples(anchor);
    const Direction d = s.pulse_pair_direction();
    const auto pairs = build_pairs(s, pulse, std::span<const Direction>(&d, 1), jobs);
    p.h = h_profile(pairs[0].plus, pairs[0].minus, s.sampling, s.ball(), p.etas, s.scene.wave_speed,
                    s.thresholds.cutoff_rel, jobs);
    return p;
}

std::vector<IndicatorField> strip_fields(const Scenario &s, std::span<const double> etas, int jobs)
{
    const auto pairs = build_pairs(s, s.strip.pulse, std::span<const Direction>(s.directions.data(), 1), jobs);
    std::vector<IndicatorField> out;
    for (double eta : etas)
        out.push_back(scan_field(pairs, s.sampling, eta, s.scene.wave_speed, s.thresholds.cutoff_rel,
                                 s.strip.pair ? Combine::single_pair_w : Combine::single_direction, jobs));
    return out;
}

double band_center(const IndicatorField &field, const Direction &dir, double level)
{
    const auto mask = superlevel_set(normalize(field), level);
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask[i])
        {
            sum += dir.dot(field.grid.cell_center(i));
            ++count;
        }
    if (count == 0)
        throw NumericalError("empty superlevel set");
    return sum / static_cast<double>(count);
}

IndicatorField hull_field(const Scenario &s, std::size_t pulse, double t0, int jobs)
{
    const auto pairs = build_pairs(s, pulse, s.directions, jobs);
    return normalize(scan_field(pairs, s.sampling, t0, s.scene.wave_speed, s.thresholds.cutoff_rel,
                                Combine::multi_direction_i, jobs));
}

TrajectoryResult trajectory_run(const Scenario &s, int jobs)
{
    TrajectoryResult res;
    res.overlay = IndicatorField{s.sampling, std::vector<double>(s.sampling.size(), 0.0), Normalization::max_one};
    for (std::size_t j : s.processed_pulses())
    {
        TrajectoryEntry e;
        e.pulse = j;
        e.t_nominal = s.scene.pulses[j];
        e.truth = s.scene.trajectory.position(e.t_nominal);
        try
        {
            const PulseProfile prof = pulse_profile(s, j, jobs);
            e.estimate = estimate_pulse(prof.h, prof.etas, s.thresholds.rel_threshold, s.scene.wave_speed);
            const IndicatorField field = hull_field(s, j, e.estimate->t0, jobs);
            e.centroid = centroid(s.sampling, superlevel_set(field, s.thresholds.field_level));
            e.error = (*e.centroid - e.truth).norm();
            for (std::size_t i = 0; i < field.values.size(); ++i)
                res.overlay.values[i] = std::max(res.overlay.values[i], field.values[i]);
        }
        catch (const NumericalError &err)
        {
            e.failure = err.what();
        }
        res.entries.push_back(std::move(e));
    }
    return res;
}

std::vector<double> peak_times(std::span<const double> t, std::span<const double> u, double rel)
{
    if (t.size() != u.size())
        throw ConfigError("peak_times: sample arrays differ in length");
    double umax = 0.0;
    for (double v : u)
        umax = std::max(umax, std::abs(v));
    std::vector<double> out;
    if (!(umax > 0.0))
        return out;
    for (std::size_t k = 1; k + 1 < u.size(); ++k)
    {
        const double a = std::abs(u[k - 1]), b = std::abs(u[k]), c = std::abs(u[k + 1]);
        if (b >= a && b > c && b >= rel * umax)
            out.push_back(t[k]);
    }
    return out;
}

// ------------------------------------------------------------------------------------------------
// Runs
// ------------------------------------------------------------------------------------------------

namespace
{

const char *noise_name(NoiseDistribution d)
{
    return d == NoiseDistribution::gaussian ? "gaussian" : "uniform";
}

json point_json(const Point &p)
{
    return json(p.coords());
}

Scenario with_seed(const Scenario &s, const RunOptions &opt)
{
    Scenario out = s;
    if (opt.seed)
        out.noise.seed = *opt.seed;
    return out;
}

// Collects outputs in memory, then either persists them with a manifest or checks them
// against an existing one.
class Run
{
  public:
    Run(std::string command, const Scenario *s, const RunOptions &opt)
        : opt_(opt), start_(std::chrono::steady_clock::now())
    {
        manifest_["schema_version"] = kScenarioSchemaVersion;
        manifest_["software_version"] = MFFM_VERSION;
        manifest_["command"] = std::move(command);
        if (!s)
            return;
        manifest_["scenario"] = s->name;
        manifest_["scenario_hash"] = hex64(s->source_hash);
        manifest_["seed"] = s->noise.seed;
        manifest_["noise"] = {{"level", s->noise.level}, {"distribution", noise_name(s->noise.distribution)}};
        manifest_["frequency"] = {{"kappa", s->grid.kappa}, {"half_band", s->grid.half_band}, {"n", s->grid.n}};
        json dirs = json::array();
        for (const auto &d : s->directions)
            dirs.push_back(point_json(d.vec()));
        manifest_["directions"] = dirs;
        manifest_["pulse_direction"] = point_json(s->pulse_pair_direction().vec());
        manifest_["eta_window"] = {{"min", s->eta_window.min},
                                   {"max", s->eta_window.max},
                                   {"step", s->eta_window.step},
                                   {"pulse_relative", s->eta_window.pulse_relative}};
        manifest_["thresholds"] = {{"rel_threshold", s->thresholds.rel_threshold},
                                   {"cutoff_rel", s->thresholds.cutoff_rel},
                                   {"field_level", s->thresholds.field_level}};
        manifest_["sampling"] = {{"min", point_json(s->sampling.box_min())},
                                 {"max", point_json(s->sampling.box_max())},
                                 {"resolution", s->sampling.resolution()}};
        manifest_["quadrature_pts_per_axis"] = s->pts_per_axis;
        manifest_["warnings"] = s->notes;
    }

    void add(const std::string &name, std::string content) { files_.emplace_back(name, std::move(content)); }

    json &results() { return manifest_["results"]; }

    json finish()
    {
        json outs = json::array();
        for (const auto &[name, content] : files_)
            outs.push_back({{"file", name}, {"fnv1a64", hex64(fnv1a64(content))}, {"bytes", content.size()}});
        manifest_["outputs"] = outs;
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start_;
        manifest_["wall_time_s"] = dt.count();

        const auto manifest_path = opt_.out_dir / "manifest.json";
        if (opt_.verify)
        {
            verify(manifest_path);
            manifest_["verified"] = true;
            return manifest_;
        }
        for (const auto &[name, content] : files_)
            write_file_atomic(opt_.out_dir / name, content);
        write_file_atomic(manifest_path, manifest_.dump(2) + "\n");
        return manifest_;
    }

  private:
    void verify(const std::filesystem::path &manifest_path) const
    {
        json old;
        try
        {
            old = json::parse(read_file(manifest_path));
        }
        catch (const json::exception &e)
        {
            throw IoError("unreadable manifest " + manifest_path.string() + ": " + e.what());
        }
        std::map<std::string, std::string> recorded;
        if (!old.contains("outputs") || !old["outputs"].is_array())
            throw IoError("manifest " + manifest_path.string() + " has no output list");
        for (const auto &o : old["outputs"])
            recorded[o.at("file").get<std::string>()] = o.at("fnv1a64").get<std::string>();

        std::vector<std::string> problems;
        std::map<std::string, bool> fresh;
        for (const auto &[name, content] : files_)
        {
            fresh[name] = true;
            const std::string h = hex64(fnv1a64(content));
            auto it = recorded.find(name);
            if (it == recorded.end())
                problems.push_back(name + ": not listed in the manifest");
            else if (it->second != h)
                problems.push_back(name + ": recomputed hash " + h + " != recorded " + it->second);
            else
            {
                std::string on_disk;
                try
                {
                    on_disk = read_file(opt_.out_dir / name);
                }
                catch (const IoError &)
                {
                    problems.push_back(name + ": missing on disk");
                    continue;
                }
                if (hex64(fnv1a64(on_disk)) != h)
                    problems.push_back(name + ": file on disk differs from the manifest");
            }
        }
        for (const auto &[name, h] : recorded)
            if (!fresh.count(name))
                problems.push_back(name + ": listed in the manifest but not produced");
        if (!problems.empty())
        {
            std::string msg = "verification failed:";
            for (const auto &p : problems)
                msg += "\n  " + p;
            throw VerificationError(msg);
        }
    }

    RunOptions opt_;
    std::chrono::steady_clock::time_point start_;
    json manifest_;
    std::vector<std::pair<std::string, std::string>> files_;
};

json estimate_json(std::size_t j, double t_nominal, const PulseEstimate &e)
{
    return {{"pulse", j}, {"t_nominal", t_nominal}, {"eta1", e.eta1}, {"eta2", e.eta2}, {"t0", e.t0},
            {"width", e.width}};
}

std::string eta_tag(double eta)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", eta);
    return buf;
}

void add_field(Run &run, const Scenario &s, const std::string &stem, const IndicatorField &f)
{
    if (s.write_csv)
        run.add(stem + ".csv", field_csv(f));
    if (s.write_pgm)
        run.add(stem + ".pgm", field_pgm(f));
}

} // namespace

json run_synthesize(const Scenario &s0, const RunOptions &opt)
{
    const Scenario s = with_seed(s0, opt);
    Run run("synthesize", &s, opt);
    std::ostringstream dirs;
    dirs << "direction_index,x,y" << (s.dim() == 3 ? ",z" : "") << "\n";
    for (std::size_t m = 0; m < s.directions.size(); ++m)
        for (int sign = 0; sign < 2; ++sign)
        {
            const Direction d = sign ? -s.directions[m] : s.directions[m];
            dirs << 2 * m + sign;
            for (int a = 0; a < s.dim(); ++a)
                dirs << ',' << format_double(d.vec()[static_cast<std::size_t>(a)]);
            dirs << '\n';
        }
    run.add("directions.csv", dirs.str());

    json per = json::array();
    for (std::size_t j : s.processed_pulses())
    {
        const WeightedQuadrature quad = pulse_quadrature(s.scene, j, s.pts_per_axis);
        std::vector<FarFieldBand> bands(2 * s.directions.size());
        parallel_for(bands.size(), opt.jobs, [&](std::size_t k) {
            const Direction d = k % 2 == 0 ? s.directions[k / 2] : -s.directions[k / 2];
            bands[k] = farfield_band(quad, s.scene.pulses[j], s.scene.wave_speed, d, s.grid);
        });
        std::ostringstream os;
        write_band_csv(os, bands);
        run.add("band_" + std::to_string(j) + ".csv", os.str());
        per.push_back({{"pulse", j}, {"t_nominal", s.scene.pulses[j]}, {"samples_per_direction", bands[0].sample_count()}});
    }
    run.results()["bands"] = per;
    return run.finish();
}

json run_pulse(const Scenario &s0, const RunOptions &opt)
{
    const Scenario s = with_seed(s0, opt);
    Run run("pulse", &s, opt);
    json per = json::array();
    std::vector<std::string> failures;
    for (std::size_t j : s.processed_pulses())
    {
        const PulseProfile p = pulse_profile(s, j, opt.jobs);
        run.add("h_profile_" + std::to_string(j) + ".csv", h_profile_csv(p.etas, p.h));
        try
        {
            per.push_back(estimate_json(j, s.scene.pulses[j],
                                        estimate_pulse(p.h, p.etas, s.thresholds.rel_threshold, s.scene.wave_speed)));
        }
        catch (const NoSupportError &e)
        {
            per.push_back({{"pulse", j}, {"t_nominal", s.scene.pulses[j]}, {"error", e.what()}});
            failures.push_back("pulse " + std::to_string(j) + ": " + e.what());
        }
    }
    run.results()["pulses"] = per;
    json m = run.finish();
    if (!failures.empty())
        throw NoSupportError(failures.front() + (failures.size() > 1 ? " (and more)" : ""));
    return m;
}

json run_strip(const Scenario &s0, const RunOptions &opt)
{
    const Scenario s = with_seed(s0, opt);
    Run run("strip", &s, opt);
    const auto fields = strip_fields(s, s.strip.etas, opt.jobs);
    json per = json::array();
    for (std::size_t k = 0; k < fields.size(); ++k)
    {
        const double eta = s.strip.etas[k];
        add_field(run, s, "strip_eta_" + eta_tag(eta), fields[k]);
        double vmax = 0.0;
        for (double v : fields[k].values)
            vmax = std::max(vmax, v);
        json r = {{"eta", eta}, {"max", vmax}};
        if (vmax > 0.0 && std::isfinite(vmax))
            r["band_center"] = band_center(fields[k], s.directions[0], s.thresholds.field_level);
        per.push_back(r);
    }
    run.results()["pulse"] = s.strip.pulse;
    run.results()["mode"] = s.strip.pair ? "pair_w" : "single_direction";
    run.results()["fields"] = per;
    return run.finish();
}

json run_hull(const Scenario &s0, const RunOptions &opt)
{
    const Scenario s = with_seed(s0, opt);
    Run run("hull", &s, opt);
    const std::size_t j = s.hull.pulse;
    double t0;
    if (s.hull.t0)
    {
        t0 = *s.hull.t0;
        run.results()["t0_source"] = "configured";
    }
    else
    {
        const PulseProfile p = pulse_profile(s, j, opt.jobs);
        const PulseEstimate e = estimate_pulse(p.h, p.etas, s.thresholds.rel_threshold, s.scene.wave_speed);
        t0 = e.t0;
        run.results()["t0_source"] = "estimated";
        run.results()["estimate"] = estimate_json(j, s.scene.pulses[j], e);
    }
    const IndicatorField field = hull_field(s, j, t0, opt.jobs);
    add_field(run, s, "hull", field);
    const auto mask = superlevel_set(field, s.thresholds.field_level);
    run.results()["pulse"] = j;
    run.results()["t0"] = t0;
    run.results()["superlevel_cells"] = std::count(mask.begin(), mask.end(), true);
    run.results()["centroid"] = point_json(centroid(s.sampling, mask));
    return run.finish();
}

json run_trajectory(const Scenario &s0, const RunOptions &opt)
{
    const Scenario s = with_seed(s0, opt);
    if (s.scene.pulses.size() < 2)
        throw ConfigError("trajectory runs need at least two pulses");
    Run run("trajectory", &s, opt);
    const TrajectoryResult res = trajectory_run(s, opt.jobs);
    const int dim = s.dim();
    const char *axes[] = {"x", "y", "z"};
    std::string csv = "pulse,t";
    for (int a = 0; a < dim; ++a)
        csv += std::string(",true_") + axes[a];
    csv += ",t0";
    for (int a = 0; a < dim; ++a)
        csv += std::string(",centroid_") + axes[a];
    csv += ",error,status\n";
    json per = json::array();
    std::size_t located = 0;
    for (const auto &e : res.entries)
    {
        csv += std::to_string(e.pulse) + "," + format_double(e.t_nominal);
        for (int a = 0; a < dim; ++a)
            csv += "," + format_double(e.truth[static_cast<std::size_t>(a)]);
        csv += "," + (e.estimate ? format_double(e.estimate->t0) : std::string("nan"));
        for (int a = 0; a < dim; ++a)
            csv += "," + (e.centroid ? format_double((*e.centroid)[static_cast<std::size_t>(a)]) : std::string("nan"));
        csv += "," + (e.centroid ? format_double(e.error) : std::string("nan"));
        csv += e.failure.empty() ? ",ok\n" : ",failed\n";
        json r = {{"pulse", e.pulse}, {"t_nominal", e.t_nominal}, {"truth", point_json(e.truth)}};
        if (e.estimate)
            r["t0"] = e.estimate->t0;
        if (e.centroid)
        {
            r["centroid"] = point_json(*e.centroid);
            r["error"] = e.error;
            ++located;
        }
        if (!e.failure.empty())
            r["failure"] = e.failure;
        per.push_back(r);
    }
    run.add("trajectory.csv", csv);
    add_field(run, s, "trajectory_overlay", res.overlay);
    run.results()["pulses"] = per;
    run.results()["processed"] = res.entries.size();
    run.results()["located"] = located;
    return run.finish();
}

json run_timesignal(const Scenario &s0, const RunOptions &opt)
{
    const Scenario s = with_seed(s0, opt);
    Run run("timesignal", &s, opt);
    const auto t = s.timesignal.samples();
    const auto u = time_signal(s.scene, s.timesignal.receiver, t, s.timesignal.sphere_pts);
    run.add("signal.csv", signal_csv(t, u));
    run.results()["receiver"] = point_json(s.timesignal.receiver);
    run.results()["peaks"] = peak_times(t, u);
    return run.finish();
}

// ------------------------------------------------------------------------------------------------
// Self test
// ------------------------------------------------------------------------------------------------

namespace
{

CMatrix random_hermitian(Eigen::Index n, std::uint64_t seed)
{
    CMatrix m = noise_matrix(n, n, seed, NoiseDistribution::uniform);
    return (m + m.adjoint()) * 0.5;
}

SelfCheck check(std::string name, bool pass, double value)
{
    std::ostringstream os;
    os << value;
    return SelfCheck{std::move(name), pass, os.str()};
}

} // namespace

std::vector<SelfCheck> selftest_checks(int jobs)
{
    std::vector<SelfCheck> out;

    {
        const CMatrix a = random_hermitian(24, 11);
        const EigenSystem es = hermitian_eigen(a);
        const CMatrix lam = es.values.cast<cplx>().asDiagonal();
        const double res = (a * es.vectors - es.vectors * lam).norm() / a.norm();
        const double orth = (es.vectors.adjoint() * es.vectors - CMatrix::Identity(24, 24)).norm();
        out.push_back(check("eigen_residual", res <= 1e-10 && orth <= 1e-10, std::max(res, orth)));
    }
    {
        const CMatrix a = random_hermitian(16, 12);
        const CMatrix b = spectral_abs(a);
        const double rel = (b * b - a * a).norm() / (a * a).norm();
        out.push_back(check("spectral_abs_square", rel <= 1e-9, rel));
    }

    SourceScene scene;
    scene.shape = Shape::disk(Point(0.0, 0.0), 1.0);
    scene.pulses = {4.0};
    const FrequencyGrid grid(0.0, 3.0 * std::numbers::pi, 48);
    const Direction ex(Point(1.0, 0.0));
    const FarFieldBand band = farfield_band(scene, 0, ex, grid, 60);
    {
        double worst = 0.0;
        for (std::size_t k = 0; k < band.minus.size(); ++k)
            worst = std::max(worst, std::abs(band.minus[k] - std::conj(band.plus[k])) / std::abs(band.plus[k]));
        out.push_back(check("band_conjugate_symmetry", worst <= 1e-12, worst));
    }
    {
        const ToeplitzMatrix f = assemble_toeplitz(band);
        bool exact = true;
        for (Eigen::Index r = 1; r < f.entries.rows(); ++r)
            for (Eigen::Index c = 1; c < f.entries.cols(); ++c)
                exact = exact && f.entries(r, c) == f.entries(r - 1, c - 1);
        out.push_back(check("toeplitz_structure", exact, exact ? 0.0 : 1.0));
        const CMatrix n1 = noise_matrix(48, 48, 99, NoiseDistribution::uniform);
        const CMatrix n2 = noise_matrix(48, 48, 99, NoiseDistribution::uniform);
        out.push_back(check("noise_determinism", n1 == n2, 0.0));
    }
    {
        const SharpOperator id = sharpen(CMatrix::Identity(48, 48), ex, grid);
        const double v = PicardSeries(id, 1e-14).evaluate(test_vector(Point(0.3, -0.2), 1.7, ex, 1.0, grid).values);
        out.push_back(check("picard_identity_parseval", std::abs(v - 48.0) <= 1e-12 * 48.0, v));
    }
    {
        Scenario s;
        s.scene = scene;
        s.grid = grid;
        s.directions = {ex};
        s.sampling = SamplingGrid(Point(-6.0, -6.0), Point(6.0, 6.0), 61);
        s.pts_per_axis = 80;
        s.eta_window = EtaWindow{0.0, 8.0, 0.05, false};
        const PulseProfile p = pulse_profile(s, 0, jobs);
        const PulseEstimate e = estimate_pulse(p.h, p.etas, s.thresholds.rel_threshold, 1.0);
        out.push_back(check("pulse_recovery_t0", std::abs(e.t0 - 4.0) <= 0.1, e.t0));
    }
    return out;
}

json run_selftest(const RunOptions &opt, std::vector<SelfCheck> &checks)
{
    Run run("selftest", nullptr, opt);
    checks = selftest_checks(opt.jobs);
    std::string csv = "check,pass,value\n";
    json per = json::array();
    for (const auto &c : checks)
    {
        csv += c.name + "," + (c.pass ? "1" : "0") + "," + c.detail + "\n";
        per.push_back({{"check", c.name}, {"pass", c.pass}, {"value", c.detail}});
    }
    run.add("selftest.csv", csv);
    run.results()["checks"] = per;
    return run.finish();
}

} // namespace mffm
