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

#include "mffm/scenario.hpp"

#include "mffm/error.hpp"
#include "mffm/io.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <set>

namespace mffm
{

using nlohmann::json;

namespace
{

// Object access with unknown-key rejection.
class Reader
{
  public:
    Reader(const json &obj, std::string where) : obj_(obj), where_(std::move(where))
    {
        if (!obj_.is_object())
            throw ConfigError(where_ + ": expected an object");
    }

    bool has(const char *key)
    {
        seen_.insert(key);
        return obj_.contains(key);
    }

    const json &at(const char *key)
    {
        if (!has(key))
            throw ConfigError(where_ + ": missing key '" + key + "'");
        return obj_.at(key);
    }

    double number(const char *key, double fallback)
    {
        return has(key) ? as_number(obj_.at(key), path(key)) : fallback;
    }
    double number(const char *key) { return as_number(at(key), path(key)); }

    long long integer(const char *key, long long fallback)
    {
        return has(key) ? as_integer(obj_.at(key), path(key)) : fallback;
    }

    bool boolean(const char *key, bool fallback)
    {
        if (!has(key))
            return fallback;
        if (!obj_.at(key).is_boolean())
            throw ConfigError(path(key) + ": expected true/false");
        return obj_.at(key).get<bool>();
    }

    std::string string(const char *key, const std::string &fallback)
    {
        if (!has(key))
            return fallback;
        if (!obj_.at(key).is_string())
            throw ConfigError(path(key) + ": expected a string");
        return obj_.at(key).get<std::string>();
    }

    std::string path(const char *key) const { return where_ + "." + key; }

    // Call once all keys have been consumed.
    void finish() const
    {
        for (auto it = obj_.begin(); it != obj_.end(); ++it)
            if (!seen_.count(it.key()))
                throw ConfigError(where_ + ": unknown key '" + it.key() + "'");
    }

    static double as_number(const json &v, const std::string &where)
    {
        if (!v.is_number())
            throw ConfigError(where + ": expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x))
            throw ConfigError(where + ": value is not finite");
        return x;
    }

    static long long as_integer(const json &v, const std::string &where)
    {
        if (!v.is_number_integer())
            throw ConfigError(where + ": expected an integer");
        return v.get<long long>();
    }

  private:
    const json &obj_;
    std::string where_;
    std::set<std::string> seen_;
};

std::vector<double> number_list(const json &v, const std::string &where)
{
    if (!v.is_array())
        throw ConfigError(where + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto &x : v)
        out.push_back(Reader::as_number(x, where));
    return out;
}

Point point(const json &v, const std::string &where)
{
    const auto c = number_list(v, where);
    if (c.size() != 2 && c.size() != 3)
        throw ConfigError(where + ": a point needs 2 or 3 coordinates");
    return Point::from(c);
}

Direction direction(const json &v, const std::string &where)
{
    const Point p = point(v, where);
    if (!(p.norm() > 0.0))
        throw ConfigError(where + ": zero vector is not a direction");
    return Direction::normalized(p);
}

Trajectory parse_trajectory(const json &v)
{
    Reader r(v, "scene.trajectory");
    const std::string kind = r.string("kind", "fixed");
    const double t_max = r.number("t_max", 0.0);
    Trajectory::Kind k;
    if (kind == "fixed")
        k = FixedPath{r.has("position") ? point(r.at("position"), r.path("position")) : Point(0.0, 0.0)};
    else if (kind == "linear")
    {
        const Point start = point(r.at("start"), r.path("start"));
        const Point vel = point(r.at("velocity"), r.path("velocity"));
        if (start.dim() != vel.dim())
            throw ConfigError("scene.trajectory: start and velocity differ in dimension");
        k = LinearPath{start, vel};
    }
    else if (kind == "cardioid")
        k = CardioidPath{};
    else if (kind == "trifolium")
        k = TrifoliumPath{};
    else if (kind == "star")
        k = StarPath{};
    else if (kind == "sine_line")
        k = SineLinePath{};
    else if (kind == "helix")
        k = HelixPath{};
    else
        throw ConfigError("scene.trajectory.kind: unknown trajectory '" + kind + "'");
    r.finish();
    if (t_max < 0.0)
        throw ConfigError("scene.trajectory.t_max must be positive");
    return Trajectory(k, t_max);
}

Shape parse_shape(const json &v, int dim)
{
    Reader r(v, "scene.shape");
    const std::string kind = r.string("kind", "disk");
    const Point origin = Point::zero(dim);
    Shape shape;
    if (kind == "disk" || kind == "ball")
    {
        const double radius = r.number("radius", 1.0);
        if (!(radius > 0.0))
            throw ConfigError("scene.shape.radius must be positive");
        shape = Shape::disk(origin, radius);
    }
    else if (kind == "kite")
    {
        const double scale = r.number("scale", 1.0);
        if (!(scale > 0.0))
            throw ConfigError("scene.shape.scale must be positive");
        if (dim != 2)
            throw ConfigError("scene.shape: kite is a 2D shape");
        shape = Shape::kite(origin, scale);
    }
    else if (kind == "rounded_square")
    {
        const double hw = r.number("half_width", 1.0);
        const double cr = r.number("corner_radius", 0.25);
        if (!(hw > 0.0) || !(cr >= 0.0) || cr > hw)
            throw ConfigError("scene.shape: need half_width > 0 and 0 <= corner_radius <= half_width");
        if (dim != 2)
            throw ConfigError("scene.shape: rounded_square is a 2D shape");
        shape = Shape::rounded_square(origin, hw, cr);
    }
    else
        throw ConfigError("scene.shape.kind: unknown shape '" + kind + "'");
    r.finish();
    return shape;
}

SourceProfile parse_profile(const json &v)
{
    Reader r(v, "scene.profile");
    const std::string kind = r.string("kind", "polynomial");
    SourceProfile::Kind k{PolynomialProfile{}};
    if (kind == "constant")
        k.emplace<ConstantProfile>(ConstantProfile{r.number("value", 1.0)});
    else if (kind == "gaussian")
    {
        const GaussianProfile g{r.number("strength", 1.0), r.number("width", 0.01)};
        if (!(g.width > 0.0))
            throw ConfigError("scene.profile.width must be positive");
        k.emplace<GaussianProfile>(g);
    }
    else if (kind != "polynomial")
        throw ConfigError("scene.profile.kind: unknown profile '" + kind + "'");
    r.finish();
    return SourceProfile(k);
}

std::vector<double> parse_pulses(const json &v)
{
    if (v.is_array())
        return number_list(v, "scene.pulses");
    Reader r(v, "scene.pulses");
    const double start = r.number("start", 0.0);
    const double step = r.number("step");
    const long long count = r.integer("count", 1);
    r.finish();
    if (count < 1)
        throw ConfigError("scene.pulses.count must be at least 1");
    if (count > 1 && !(step > 0.0))
        throw ConfigError("scene.pulses.step must be positive");
    std::vector<double> out(static_cast<std::size_t>(count));
    for (long long j = 0; j < count; ++j)
        out[static_cast<std::size_t>(j)] = start + static_cast<double>(j) * step;
    return out;
}

SourceScene parse_scene(const json &v)
{
    Reader r(v, "scene");
    SourceScene scene;
    scene.trajectory = r.has("trajectory") ? parse_trajectory(r.at("trajectory")) : Trajectory();
    const int dim = scene.trajectory.dim();
    scene.shape = r.has("shape") ? parse_shape(r.at("shape"), dim) : Shape::disk(Point::zero(dim), 1.0);
    if (r.has("profile"))
        scene.profile = parse_profile(r.at("profile"));
    scene.pulses = parse_pulses(r.at("pulses"));
    scene.wave_speed = r.number("wave_speed", 1.0);
    const std::string w = r.string("weighting", "unit");
    if (w == "unit")
        scene.weighting = PulseWeighting::unit;
    else if (w == "cosine")
        scene.weighting = PulseWeighting::cosine;
    else
        throw ConfigError("scene.weighting must be 'unit' or 'cosine'");
    r.finish();
    return scene;
}

FrequencyGrid parse_frequency(const json &v)
{
    Reader r(v, "frequency");
    const long long n = r.integer("n", 48);
    if (n < 1 || n > 4096)
        throw ConfigError("frequency.n must lie in [1, 4096]");
    const int ni = static_cast<int>(n);
    const bool band = r.has("omega_min") || r.has("omega_max");
    const bool half = r.has("half_band");
    const bool half_pi = r.has("half_band_pi");
    if (static_cast<int>(band) + static_cast<int>(half) + static_cast<int>(half_pi) > 1)
        throw ConfigError("frequency: give exactly one of omega_min/omega_max, half_band, half_band_pi");
    FrequencyGrid g;
    if (band)
    {
        if (r.has("kappa"))
            throw ConfigError("frequency: kappa is derived when omega_min/omega_max are given");
        g = FrequencyGrid::from_band(r.number("omega_min"), r.number("omega_max"), ni);
    }
    else
    {
        const double kappa = r.number("kappa", 0.0);
        const double k = half ? r.number("half_band") : std::numbers::pi * r.number("half_band_pi", 3.0);
        g = FrequencyGrid(kappa, k, ni);
    }
    r.finish();
    return g;
}

std::vector<Direction> parse_directions(const json &v, int dim)
{
    Reader r(v, "directions");
    std::vector<Direction> out;
    int given = 0;
    if (r.has("angles_deg"))
    {
        ++given;
        if (dim != 2)
            throw ConfigError("directions.angles_deg is only valid in 2D");
        for (double a : number_list(r.at("angles_deg"), r.path("angles_deg")))
            out.push_back(Direction::from_angle(a * std::numbers::pi / 180.0));
    }
    if (r.has("vectors"))
    {
        ++given;
        const json &list = r.at("vectors");
        if (!list.is_array())
            throw ConfigError("directions.vectors: expected an array of vectors");
        for (const auto &x : list)
            out.push_back(direction(x, "directions.vectors"));
    }
    if (r.has("fibonacci_hemisphere"))
    {
        ++given;
        if (dim != 3)
            throw ConfigError("directions.fibonacci_hemisphere is only valid in 3D");
        const long long count = r.integer("fibonacci_hemisphere", 10);
        if (count < 1)
            throw ConfigError("directions.fibonacci_hemisphere must be positive");
        out = fibonacci_hemisphere(static_cast<std::size_t>(count));
    }
    r.finish();
    if (given != 1)
        throw ConfigError("directions: give exactly one of angles_deg, vectors, fibonacci_hemisphere");
    if (out.empty())
        throw ConfigError("directions: at least one direction is required");
    for (const auto &d : out)
        if (d.dim() != dim)
            throw ConfigError("directions: dimension differs from the scene");
    return out;
}

std::array<int, 3> resolution(const json &v, int dim)
{
    std::array<int, 3> res{1, 1, 1};
    if (v.is_number_integer())
    {
        const long long n = v.get<long long>();
        for (int a = 0; a < dim; ++a)
            res[static_cast<std::size_t>(a)] = static_cast<int>(n);
    }
    else if (v.is_array() && static_cast<int>(v.size()) == dim)
    {
        for (int a = 0; a < dim; ++a)
            res[static_cast<std::size_t>(a)] = static_cast<int>(Reader::as_integer(v[static_cast<std::size_t>(a)], "sampling.resolution"));
    }
    else
        throw ConfigError("sampling.resolution: expected an integer or one integer per axis");
    for (int a = 0; a < dim; ++a)
        if (res[static_cast<std::size_t>(a)] < 1 || res[static_cast<std::size_t>(a)] > 4096)
            throw ConfigError("sampling.resolution must lie in [1, 4096]");
    return res;
}

SamplingGrid parse_sampling(const json *v, int dim)
{
    const double half = 6.0;
    Point lo = dim == 3 ? Point(-half, -half, -half) : Point(-half, -half);
    Point hi = lo * -1.0;
    std::array<int, 3> res = dim == 3 ? std::array<int, 3>{60, 60, 60} : std::array<int, 3>{121, 121, 1};
    if (v)
    {
        Reader r(*v, "sampling");
        if (r.has("min"))
            lo = point(r.at("min"), "sampling.min");
        if (r.has("max"))
            hi = point(r.at("max"), "sampling.max");
        if (r.has("resolution"))
            res = resolution(r.at("resolution"), dim);
        r.finish();
    }
    if (lo.dim() != dim || hi.dim() != dim)
        throw ConfigError("sampling: box dimension differs from the scene");
    return SamplingGrid(lo, hi, res);
}

std::uint64_t parse_seed(const json &v)
{
    if (v.is_number_unsigned())
        return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<long long>() >= 0)
        return static_cast<std::uint64_t>(v.get<long long>());
    throw ConfigError("noise.seed: expected a non-negative integer");
}

} // namespace

std::vector<double> EtaWindow::samples(double anchor) const
{
    if (!(step > 0.0) || !(max >= min))
        throw ConfigError("eta_window needs step > 0 and max >= min");
    const auto count = static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k)
        out[k] = anchor + min + static_cast<double>(k) * step;
    return out;
}

std::vector<double> TimeSignalSpec::samples() const
{
    if (!(t_step > 0.0) || !(t_max >= t_min))
        throw ConfigError("timesignal needs t_step > 0 and t_max >= t_min");
    const auto count = static_cast<std::size_t>(std::floor((t_max - t_min) / t_step + 1e-9)) + 1;
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k)
        out[k] = t_min + static_cast<double>(k) * t_step;
    return out;
}

std::vector<std::size_t> Scenario::processed_pulses() const
{
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < scene.pulses.size(); j += std::max<std::size_t>(pulse_stride, 1))
        out.push_back(j);
    return out;
}

std::vector<Direction> fibonacci_hemisphere(std::size_t count)
{
    // Golden-angle spiral with heights z_k = 1 - (k + 0.5)/count, all strictly positive.
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    std::vector<Direction> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k)
    {
        const double z = 1.0 - (static_cast<double>(k) + 0.5) / static_cast<double>(count);
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * static_cast<double>(k);
        out.push_back(Direction::normalized(Point(rho * std::cos(phi), rho * std::sin(phi), z)));
    }
    return out;
}

Scenario parse_scenario(const json &doc)
{
    Reader r(doc, "scenario");
    Scenario s;
    s.source_hash = fnv1a64(doc.dump());
    const long long version = r.integer("schema_version", kScenarioSchemaVersion);
    if (version != kScenarioSchemaVersion)
        throw ConfigError("unsupported schema_version " + std::to_string(version));
    s.name = r.string("name", s.name);
    s.scene = parse_scene(r.at("scene"));
    const int dim = s.dim();

    if (r.has("frequency"))
        s.grid = parse_frequency(r.at("frequency"));

    if (r.has("directions"))
        s.directions = parse_directions(r.at("directions"), dim);
    else
    {
        s.directions = {dim == 3 ? Direction(Point(0.0, 0.0, 1.0)) : Direction(Point(1.0, 0.0))};
        s.notes.push_back("no directions configured; using the first pair along the last/first axis");
    }
    if (r.has("pulse_direction"))
    {
        s.pulse_direction = direction(r.at("pulse_direction"), "pulse_direction");
        if (s.pulse_direction->dim() != dim)
            throw ConfigError("pulse_direction: dimension differs from the scene");
    }

    s.sampling = parse_sampling(r.has("sampling") ? &r.at("sampling") : nullptr, dim);
    if (r.has("ball_radius"))
    {
        s.ball_radius = r.number("ball_radius");
        if (!(*s.ball_radius > 0.0))
            throw ConfigError("ball_radius must be positive");
    }

    if (r.has("eta_window"))
    {
        Reader e(r.at("eta_window"), "eta_window");
        s.eta_window.min = e.number("min", s.eta_window.min);
        s.eta_window.max = e.number("max", s.eta_window.max);
        s.eta_window.step = e.number("step", s.eta_window.step);
        s.eta_window.pulse_relative = e.boolean("pulse_relative", false);
        e.finish();
    }
    else
        s.notes.push_back("eta_window defaulted to [0, 10] with step 0.05");
    (void)s.eta_window.samples();
    // Test vectors are 2 pi / dw periodic in eta; a longer window shows aliased copies.
    const double period = 2.0 * std::numbers::pi / s.grid.step();
    if (s.eta_window.max - s.eta_window.min >= period)
        s.notes.push_back("eta_window is at least one test-vector period (" + std::to_string(period) +
                          ") long; h(eta) will repeat");

    if (r.has("noise"))
    {
        Reader n(r.at("noise"), "noise");
        s.noise.level = n.number("level", 0.0);
        if (n.has("seed"))
            s.noise.seed = parse_seed(n.at("seed"));
        const std::string dist = n.string("distribution", "uniform");
        if (dist == "uniform")
            s.noise.distribution = NoiseDistribution::uniform;
        else if (dist == "gaussian")
            s.noise.distribution = NoiseDistribution::gaussian;
        else
            throw ConfigError("noise.distribution must be 'uniform' or 'gaussian'");
        n.finish();
        if (!(s.noise.level >= 0.0))
            throw ConfigError("noise.level must be non-negative");
    }

    if (r.has("thresholds"))
    {
        Reader t(r.at("thresholds"), "thresholds");
        s.thresholds.rel_threshold = t.number("rel_threshold", s.thresholds.rel_threshold);
        s.thresholds.cutoff_rel = t.number("cutoff_rel", s.thresholds.cutoff_rel);
        s.thresholds.field_level = t.number("field_level", s.thresholds.field_level);
        t.finish();
    }
    if (!(s.thresholds.rel_threshold > 0.0 && s.thresholds.rel_threshold <= 1.0))
        throw ConfigError("thresholds.rel_threshold must lie in (0, 1]");
    if (!(s.thresholds.cutoff_rel >= 0.0 && s.thresholds.cutoff_rel < 1.0))
        throw ConfigError("thresholds.cutoff_rel must lie in [0, 1)");
    if (!(s.thresholds.field_level > 0.0 && s.thresholds.field_level <= 1.0))
        throw ConfigError("thresholds.field_level must lie in (0, 1]");

    s.pts_per_axis = dim == 3 ? 60 : 200;
    if (r.has("quadrature"))
    {
        Reader q(r.at("quadrature"), "quadrature");
        s.pts_per_axis = static_cast<int>(q.integer("pts_per_axis", s.pts_per_axis));
        q.finish();
    }
    if (s.pts_per_axis < 4 || s.pts_per_axis > 4000)
        throw ConfigError("quadrature.pts_per_axis must lie in [4, 4000]");

    const long long stride = r.integer("pulse_stride", 1);
    if (stride < 1)
        throw ConfigError("pulse_stride must be at least 1");
    s.pulse_stride = static_cast<std::size_t>(stride);

    auto pulse_index = [&](Reader &rr, const char *where) {
        const long long j = rr.integer("pulse", 0);
        if (j < 0 || static_cast<std::size_t>(j) >= s.scene.pulses.size())
            throw ConfigError(std::string(where) + ".pulse is out of range");
        return static_cast<std::size_t>(j);
    };

    if (r.has("strip"))
    {
        Reader st(r.at("strip"), "strip");
        if (st.has("etas"))
            s.strip.etas = number_list(st.at("etas"), "strip.etas");
        s.strip.pair = st.boolean("pair", false);
        s.strip.pulse = pulse_index(st, "strip");
        st.finish();
        if (s.strip.etas.empty())
            throw ConfigError("strip.etas must not be empty");
    }

    if (r.has("hull"))
    {
        Reader h(r.at("hull"), "hull");
        if (h.has("t0"))
            s.hull.t0 = h.number("t0");
        s.hull.pulse = pulse_index(h, "hull");
        h.finish();
    }

    if (r.has("timesignal"))
    {
        Reader ts(r.at("timesignal"), "timesignal");
        if (ts.has("receiver"))
            s.timesignal.receiver = point(ts.at("receiver"), "timesignal.receiver");
        s.timesignal.t_min = ts.number("t_min", s.timesignal.t_min);
        s.timesignal.t_max = ts.number("t_max", s.timesignal.t_max);
        s.timesignal.t_step = ts.number("t_step", s.timesignal.t_step);
        const long long pts = ts.integer("sphere_pts", static_cast<long long>(s.timesignal.sphere_pts));
        if (pts < 16)
            throw ConfigError("timesignal.sphere_pts must be at least 16");
        s.timesignal.sphere_pts = static_cast<std::size_t>(pts);
        ts.finish();
        (void)s.timesignal.samples();
    }

    if (r.has("outputs"))
    {
        Reader o(r.at("outputs"), "outputs");
        s.write_csv = o.boolean("csv", true);
        s.write_pgm = o.boolean("pgm", true);
        o.finish();
    }
    r.finish();

    for (auto &w : s.scene.validate())
        s.notes.push_back(std::move(w));
    return s;
}

Scenario load_scenario(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open scenario file " + path.string());
    json doc;
    try
    {
        in >> doc;
    }
    catch (const json::parse_error &e)
    {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return parse_scenario(doc);
}

} // namespace mffm
