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

#include "mffm/geometry.hpp"

#include "mffm/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace mffm
{

namespace
{

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct overloaded : Ts...
{
    using Ts::operator()...;
};

std::array<double, 2> kite_point(double theta)
{
    return {std::cos(theta) + 0.65 * std::cos(2.0 * theta) - 0.65, 1.5 * std::sin(theta)};
}

std::vector<std::array<double, 2>> kite_outline(double scale, std::size_t samples)
{
    std::vector<std::array<double, 2>> out(samples);
    for (std::size_t k = 0; k < samples; ++k)
    {
        auto p = kite_point(2.0 * kPi * static_cast<double>(k) / static_cast<double>(samples));
        out[k] = {scale * p[0], scale * p[1]};
    }
    return out;
}

// Boundary sampled uniformly in arc length, counter-clockwise from (hw, -(hw - r)).
std::vector<std::array<double, 2>> rounded_square_outline(double hw, double r, std::size_t samples)
{
    const double straight = 2.0 * (hw - r);
    const double arc = 0.5 * kPi * r;
    const double perimeter = 4.0 * (straight + arc);
    const double inner = hw - r;

    // Corner centres and the outward normal angle at the start of each arc.
    const std::array<std::array<double, 2>, 4> corner = {{{inner, inner}, {-inner, inner}, {-inner, -inner}, {inner, -inner}}};

    std::vector<std::array<double, 2>> out(samples);
    for (std::size_t k = 0; k < samples; ++k)
    {
        double s = perimeter * static_cast<double>(k) / static_cast<double>(samples);
        int side = std::min(3, static_cast<int>(s / (straight + arc)));
        s -= side * (straight + arc);
        const double start_angle = side * 0.5 * kPi; // outward normal of the straight part
        const double nx = std::cos(start_angle), ny = std::sin(start_angle);
        const double tx = -ny, ty = nx;
        if (s < straight)
        {
            // Straight edge: starts at the end of the previous corner arc.
            const double u = -inner + s;
            out[k] = {hw * nx + u * tx, hw * ny + u * ty};
        }
        else
        {
            const double a = start_angle + (s - straight) / std::max(r, 1e-300);
            const auto &c = corner[side];
            out[k] = {c[0] + r * std::cos(a), c[1] + r * std::sin(a)};
        }
    }
    return out;
}

bool point_in_polygon(const std::vector<std::array<double, 2>> &poly, double x, double y)
{
    bool inside = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++)
    {
        const auto &a = poly[i];
        const auto &b = poly[j];
        if ((a[1] > y) != (b[1] > y))
        {
            const double xc = a[0] + (y - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
            if (x < xc)
                inside = !inside;
        }
    }
    return inside;
}

ProjectionInterval project_outline(const std::vector<std::array<double, 2>> &poly, const Direction &dir)
{
    const double dx = dir.vec()[0], dy = dir.vec()[1];
    ProjectionInterval r{+INFINITY, -INFINITY};
    for (const auto &p : poly)
    {
        const double v = dx * p[0] + dy * p[1];
        r.lo = std::min(r.lo, v);
        r.hi = std::max(r.hi, v);
    }
    return r;
}

void require_2d(const Point &center, const char *what)
{
    if (center.dim() != 2)
        throw ConfigError(std::string(what) + " is only defined in two dimensions");
}

} // namespace

// ------------------------------------------------------------------------------------------------
// Point / Direction
// ------------------------------------------------------------------------------------------------

Point Point::from(const std::vector<double> &coords)
{
    if (coords.size() == 2)
        return Point(coords[0], coords[1]);
    if (coords.size() == 3)
        return Point(coords[0], coords[1], coords[2]);
    throw ConfigError("a point needs 2 or 3 coordinates, got " + std::to_string(coords.size()));
}

Point Point::zero(int dim)
{
    if (dim == 2)
        return Point(0.0, 0.0);
    if (dim == 3)
        return Point(0.0, 0.0, 0.0);
    throw ConfigError("dimension must be 2 or 3");
}

double Point::dot(const Point &o) const
{
    if (dim_ != o.dim_)
        throw ConfigError("dimension mismatch in dot product");
    double s = v_[0] * o.v_[0] + v_[1] * o.v_[1];
    if (dim_ == 3)
        s += v_[2] * o.v_[2];
    return s;
}

double Point::norm() const { return std::sqrt(dot(*this)); }

Point Point::operator+(const Point &o) const
{
    if (dim_ != o.dim_)
        throw ConfigError("dimension mismatch in point addition");
    Point r = *this;
    for (int i = 0; i < 3; ++i)
        r.v_[i] += o.v_[i];
    return r;
}

Point Point::operator-(const Point &o) const { return *this + (-o); }

Point Point::operator-() const
{
    Point r = *this;
    for (auto &x : r.v_)
        x = -x;
    return r;
}

Point Point::operator*(double s) const
{
    Point r = *this;
    for (auto &x : r.v_)
        x *= s;
    return r;
}

std::vector<double> Point::coords() const { return std::vector<double>(v_.begin(), v_.begin() + dim_); }

void require_same_dim(const Point &a, const Point &b, const char *what)
{
    if (a.dim() != b.dim())
        throw ConfigError(std::string("dimension mismatch: ") + what);
}

Direction::Direction(const Point &p) : v_(p)
{
    if (std::abs(p.norm() - 1.0) > 1e-12)
        throw ConfigError("direction vector must have unit norm");
}

Direction Direction::normalized(const Point &p)
{
    const double n = p.norm();
    if (!(n > 0.0))
        throw ConfigError("cannot normalise a zero direction");
    Point q = p * (1.0 / n);
    // Re-normalise once more so the unit-norm check holds to rounding.
    return Direction(q * (1.0 / q.norm()));
}

Direction Direction::from_angle(double radians) { return Direction::normalized(Point(std::cos(radians), std::sin(radians))); }

Direction Direction::operator-() const
{
    Direction d = *this;
    d.v_ = -v_;
    return d;
}

bool Direction::approx_equal(const Direction &o, double tol) const
{
    if (dim() != o.dim())
        return false;
    for (int i = 0; i < dim(); ++i)
        if (std::abs(v_[i] - o.v_[i]) > tol)
            return false;
    return true;
}

// ------------------------------------------------------------------------------------------------
// Shape
// ------------------------------------------------------------------------------------------------

Shape::Shape(Kind kind, Point center) : kind_(std::move(kind)), center_(center)
{
    std::visit(overloaded{
                   [&](const DiskShape &d) {
                       if (!(d.radius > 0.0))
                           throw ConfigError("disk radius must be positive");
                   },
                   [&](const KiteShape &k) {
                       require_2d(center_, "kite");
                       if (!(k.scale > 0.0))
                           throw ConfigError("kite scale must be positive");
                       outline_ = std::make_shared<const Outline>(kite_outline(k.scale, kOutlineSamples));
                   },
                   [&](const RoundedSquareShape &s) {
                       require_2d(center_, "rounded square");
                       if (!(s.half_width > 0.0))
                           throw ConfigError("rounded square half width must be positive");
                       if (s.corner_radius < 0.0 || s.corner_radius > s.half_width)
                           throw ConfigError("corner radius must lie in [0, half_width]");
                       outline_ = std::make_shared<const Outline>(
                           rounded_square_outline(s.half_width, s.corner_radius, kOutlineSamples));
                   },
               },
               kind_);
}

std::string Shape::name() const
{
    return std::visit(overloaded{
                          [&](const DiskShape &) { return std::string(dim() == 3 ? "ball" : "disk"); },
                          [](const KiteShape &) { return std::string("kite"); },
                          [](const RoundedSquareShape &) { return std::string("rounded_square"); },
                      },
                      kind_);
}

Shape Shape::translated_to(const Point &c) const
{
    require_same_dim(center_, c, "shape translation");
    Shape s = *this;
    s.center_ = c;
    return s;
}

bool Shape::contains(const Point &p) const
{
    require_same_dim(center_, p, "shape membership");
    const Point d = p - center_;
    return std::visit(overloaded{
                          [&](const DiskShape &disk) { return d.dot(d) <= disk.radius * disk.radius; },
                          [&](const KiteShape &) { return point_in_polygon(*outline_, d[0], d[1]); },
                          [&](const RoundedSquareShape &s) {
                              const double ax = std::abs(d[0]), ay = std::abs(d[1]);
                              if (ax > s.half_width || ay > s.half_width)
                                  return false;
                              const double inner = s.half_width - s.corner_radius;
                              if (ax <= inner || ay <= inner)
                                  return true;
                              const double ex = ax - inner, ey = ay - inner;
                              return ex * ex + ey * ey <= s.corner_radius * s.corner_radius;
                          },
                      },
                      kind_);
}

Box Shape::bounding_box() const
{
    return std::visit(overloaded{
                          [&](const DiskShape &d) {
                              Point r = Point::zero(dim());
                              for (int i = 0; i < dim(); ++i)
                                  r[i] = d.radius;
                              return Box{center_ - r, center_ + r};
                          },
                          [&](const KiteShape &) {
                              auto ex = project_outline(*outline_, Direction(Point(1.0, 0.0)));
                              auto ey = project_outline(*outline_, Direction(Point(0.0, 1.0)));
                              // Pad by the chord sag of the polygon so the box contains the curve.
                              const double pad = 1e-6 * (ex.width() + ey.width());
                              return Box{center_ + Point(ex.lo - pad, ey.lo - pad), center_ + Point(ex.hi + pad, ey.hi + pad)};
                          },
                          [&](const RoundedSquareShape &s) {
                              Point r(s.half_width, s.half_width);
                              return Box{center_ - r, center_ + r};
                          },
                      },
                      kind_);
}

double Shape::diameter() const
{
    return std::visit(overloaded{
                          [](const DiskShape &d) { return 2.0 * d.radius; },
                          [&](const KiteShape &) {
                              double best = 0.0;
                              const auto &poly = *outline_;
                              // Coarse O(n^2 / stride^2) scan is plenty for a separability warning.
                              for (std::size_t i = 0; i < poly.size(); i += 8)
                                  for (std::size_t j = i + 1; j < poly.size(); j += 8)
                                      best = std::max(best, std::hypot(poly[i][0] - poly[j][0], poly[i][1] - poly[j][1]));
                              return best;
                          },
                          [](const RoundedSquareShape &s) {
                              const double inner = s.half_width - s.corner_radius;
                              return 2.0 * (std::sqrt(2.0) * inner + s.corner_radius);
                          },
                      },
                      kind_);
}

ProjectionInterval Shape::projection(const Direction &dir) const
{
    require_same_dim(center_, dir.vec(), "projection direction");
    const double shift = dir.dot(center_);
    return std::visit(overloaded{
                          [&](const DiskShape &d) { return ProjectionInterval{shift - d.radius, shift + d.radius}; },
                          [&](const auto &) {
                              auto coarse = project_outline(*outline_, dir);
                              Outline fine;
                              if (const auto *k = std::get_if<KiteShape>(&kind_))
                                  fine = kite_outline(k->scale, 2 * kOutlineSamples);
                              else
                              {
                                  const auto &s = std::get<RoundedSquareShape>(kind_);
                                  fine = rounded_square_outline(s.half_width, s.corner_radius, 2 * kOutlineSamples);
                              }
                              auto refined = project_outline(fine, dir);
                              if (std::abs(refined.lo - coarse.lo) >= 1e-3 || std::abs(refined.hi - coarse.hi) >= 1e-3)
                                  throw NumericalError("boundary sampling did not resolve the projection of " + name());
                              return ProjectionInterval{shift + coarse.lo, shift + coarse.hi};
                          },
                      },
                      kind_);
}

std::vector<QuadraturePoint> quadrature_points(const Shape &shape, int pts_per_axis, int boundary_refine)
{
    if (pts_per_axis < 4)
        throw ConfigError("quadrature needs at least 4 points per axis");
    const int dim = shape.dim();
    if (boundary_refine <= 0)
        boundary_refine = dim == 3 ? 2 : 8;
    const Box box = shape.bounding_box();
    std::array<double, 3> h{1.0, 1.0, 1.0};
    double cell = 1.0;
    for (int i = 0; i < dim; ++i)
    {
        h[i] = (box.hi[i] - box.lo[i]) / pts_per_axis;
        cell *= h[i];
    }
    const int n = pts_per_axis;
    const int nz = dim == 3 ? n : 1;

    // Membership of the cell corners decides which cells the boundary crosses.
    const int nc = n + 1, ncz = dim == 3 ? n + 1 : 1;
    std::vector<char> corner(static_cast<std::size_t>(nc) * nc * ncz);
    Point p = Point::zero(dim);
    for (int k = 0; k < ncz; ++k)
        for (int j = 0; j < nc; ++j)
            for (int i = 0; i < nc; ++i)
            {
                p[0] = box.lo[0] + i * h[0];
                p[1] = box.lo[1] + j * h[1];
                if (dim == 3)
                    p[2] = box.lo[2] + k * h[2];
                corner[(static_cast<std::size_t>(k) * nc + j) * nc + i] = shape.contains(p);
            }
    auto corner_at = [&](int i, int j, int k) { return corner[(static_cast<std::size_t>(k) * nc + j) * nc + i]; };

    const int s = boundary_refine;
    const int sz = dim == 3 ? s : 1;
    const double sub = cell / (static_cast<double>(s) * s * sz);
    std::vector<QuadraturePoint> out;
    out.reserve(static_cast<std::size_t>(n) * n * nz * 4 / 5);
    for (int k = 0; k < nz; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
            {
                int inside = 0;
                const int total = dim == 3 ? 8 : 4;
                for (int dk = 0; dk < (dim == 3 ? 2 : 1); ++dk)
                    for (int dj = 0; dj < 2; ++dj)
                        for (int di = 0; di < 2; ++di)
                            inside += corner_at(i + di, j + dj, k + dk);
                p[0] = box.lo[0] + (i + 0.5) * h[0];
                p[1] = box.lo[1] + (j + 0.5) * h[1];
                if (dim == 3)
                    p[2] = box.lo[2] + (k + 0.5) * h[2];
                const bool centre = shape.contains(p);
                if (inside == total && centre)
                {
                    out.push_back({p, cell});
                    continue;
                }
                if (inside == 0 && !centre)
                    continue;
                // Cut cell: masked midpoint rule on an s^dim sub-lattice.
                Point q = Point::zero(dim);
                for (int c = 0; c < sz; ++c)
                    for (int b = 0; b < s; ++b)
                        for (int a = 0; a < s; ++a)
                        {
                            q[0] = box.lo[0] + (i + (a + 0.5) / s) * h[0];
                            q[1] = box.lo[1] + (j + (b + 0.5) / s) * h[1];
                            if (dim == 3)
                                q[2] = box.lo[2] + (k + (c + 0.5) / s) * h[2];
                            if (shape.contains(q))
                                out.push_back({q, sub});
                        }
            }
    return out;
}

ProjectionInterval projection_interval(const Shape &shape, const Point &at, const Direction &dir)
{
    return shape.translated_to(at).projection(dir);
}

bool in_strip(const Point &y, const Direction &dir, const ProjectionInterval &proj, double eta, double t0, double c)
{
    const double s = dir.dot(y);
    const double shift = c * eta - c * t0;
    return proj.lo + shift < s && s < proj.hi + shift;
}

// ------------------------------------------------------------------------------------------------
// Trajectory
// ------------------------------------------------------------------------------------------------

namespace
{

double default_t_max(const Trajectory::Kind &kind)
{
    return std::visit(overloaded{
                          [](const FixedPath &) { return 1e6; },
                          [](const CardioidPath &) { return 80.0; },
                          [](const TrifoliumPath &) { return 80.0; },
                          [](const StarPath &) { return 80.0; },
                          [](const SineLinePath &) { return 16.0; },
                          [](const HelixPath &) { return 120.0; },
                          [](const LinearPath &) { return 1e6; },
                      },
                      kind);
}

} // namespace

Trajectory::Trajectory(Kind kind, double t_max) : kind_(std::move(kind)), t_max_(t_max > 0.0 ? t_max : default_t_max(kind_))
{
    if (const auto *l = std::get_if<LinearPath>(&kind_))
        require_same_dim(l->start, l->velocity, "linear trajectory");
}

int Trajectory::dim() const
{
    return std::visit(overloaded{
                          [](const FixedPath &f) { return f.position.dim(); },
                          [](const HelixPath &) { return 3; },
                          [](const LinearPath &l) { return l.start.dim(); },
                          [](const auto &) { return 2; },
                      },
                      kind_);
}

std::string Trajectory::name() const
{
    return std::visit(overloaded{
                          [](const FixedPath &) { return "fixed"; },
                          [](const CardioidPath &) { return "cardioid"; },
                          [](const TrifoliumPath &) { return "trifolium"; },
                          [](const StarPath &) { return "star"; },
                          [](const SineLinePath &) { return "sine_line"; },
                          [](const HelixPath &) { return "helix"; },
                          [](const LinearPath &) { return "linear"; },
                      },
                      kind_);
}

Point Trajectory::position(double t) const
{
    if (!(t >= 0.0 && t <= t_max_))
    {
        std::ostringstream msg;
        msg << "time " << t << " outside trajectory window [0, " << t_max_ << "]";
        throw ConfigError(msg.str());
    }
    const double w = kPi / 40.0;
    return std::visit(overloaded{
                          [](const FixedPath &f) { return f.position; },
                          [&](const CardioidPath &) {
                              const double s = std::sin(w * t);
                              return Point(8.0 * s * s * s, 6.0 * std::cos(w * t) - 2.0 * std::cos(2.0 * w * t) -
                                                                std::cos(3.0 * w * t) - 0.5 * std::cos(4.0 * w * t));
                          },
                          [&](const TrifoliumPath &) {
                              const double r = 8.0 * std::cos(3.0 * w * t);
                              return Point(r * std::cos(w * t), r * std::sin(w * t));
                          },
                          [&](const StarPath &) {
                              const double c = std::cos(w * t), s = std::sin(w * t);
                              return Point(7.0 * c * c * c, 7.0 * s * s * s);
                          },
                          [&](const SineLinePath &) {
                              return Point(t - 8.0, 4.0 * std::sin(kPi / 8.0 * (t - 8.0) + kPi));
                          },
                          [&](const HelixPath &) { return Point(std::cos(0.25 * t), t / 12.0 - 5.0, std::sin(0.25 * t)); },
                          [&](const LinearPath &l) { return l.start + l.velocity * t; },
                      },
                      kind_);
}

std::vector<std::string> Trajectory::speed_warnings(double c, int samples) const
{
    std::vector<std::string> warnings;
    if (std::holds_alternative<FixedPath>(kind_))
        return warnings;
    const double horizon = std::min(t_max_, 1e3);
    const double dt = horizon / samples;
    double worst = 0.0, worst_t = 0.0;
    for (int i = 0; i < samples; ++i)
    {
        const double t0 = i * dt;
        const double t1 = std::min(horizon, (i + 1) * dt);
        const double speed = (position(t1) - position(t0)).norm() / (t1 - t0);
        if (speed > worst)
        {
            worst = speed;
            worst_t = t0;
        }
    }
    if (worst >= c)
    {
        std::ostringstream msg;
        msg << name() << " trajectory moves at speed " << worst << " >= wave speed " << c << " near t=" << worst_t;
        warnings.push_back(msg.str());
    }
    return warnings;
}

// ------------------------------------------------------------------------------------------------
// SamplingGrid
// ------------------------------------------------------------------------------------------------

SamplingGrid::SamplingGrid(Point box_min, Point box_max, std::array<int, 3> resolution)
    : box_min_(box_min), box_max_(box_max), res_(resolution)
{
    require_same_dim(box_min, box_max, "sampling grid box");
    if (box_min.dim() == 2)
        res_[2] = 1;
    for (int i = 0; i < box_min.dim(); ++i)
    {
        if (!(box_min[i] < box_max[i]))
            throw ConfigError("sampling grid box_min must be below box_max on every axis");
        if (res_[i] < 1)
            throw ConfigError("sampling grid resolution must be positive");
    }
}

SamplingGrid::SamplingGrid(Point box_min, Point box_max, int resolution)
    : SamplingGrid(box_min, box_max, std::array<int, 3>{resolution, resolution, resolution})
{
}

std::size_t SamplingGrid::size() const
{
    std::size_t n = 1;
    for (int i = 0; i < dim(); ++i)
        n *= static_cast<std::size_t>(res_[i]);
    return n;
}

double SamplingGrid::cell_width(int axis) const { return (box_max_[axis] - box_min_[axis]) / res_[axis]; }

std::array<int, 3> SamplingGrid::unflatten(std::size_t index) const
{
    std::array<int, 3> ijk{0, 0, 0};
    ijk[0] = static_cast<int>(index % res_[0]);
    index /= res_[0];
    ijk[1] = static_cast<int>(index % res_[1]);
    index /= res_[1];
    ijk[2] = static_cast<int>(index);
    return ijk;
}

Point SamplingGrid::cell_center(std::size_t index) const
{
    const auto ijk = unflatten(index);
    Point p = Point::zero(dim());
    for (int a = 0; a < dim(); ++a)
        p[a] = box_min_[a] + (ijk[a] + 0.5) * cell_width(a);
    return p;
}

double SamplingGrid::circumradius() const
{
    double r2 = 0.0;
    for (int a = 0; a < dim(); ++a)
    {
        const double m = std::max(std::abs(box_min_[a]), std::abs(box_max_[a]));
        r2 += m * m;
    }
    return std::sqrt(r2);
}

} // namespace mffm
