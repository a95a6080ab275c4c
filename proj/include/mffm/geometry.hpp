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

#include <array>
#include <cstddef>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace mffm
{

// ================================================================================================
// Points and directions
// ================================================================================================

// A point (or displacement) in R^2 or R^3. Unused trailing coordinates are kept at zero.
class Point
{
  public:
    Point() = default;
    Point(double x, double y) : v_{x, y, 0.0}, dim_(2) {}
    Point(double x, double y, double z) : v_{x, y, z}, dim_(3) {}

    // Builds a point from 2 or 3 coordinates; throws ConfigError otherwise.
    static Point from(const std::vector<double> &coords);
    static Point zero(int dim);

    int dim() const { return dim_; }
    double operator[](std::size_t i) const { return v_[i]; }
    double &operator[](std::size_t i) { return v_[i]; }

    double dot(const Point &o) const;
    double norm() const;

    Point operator+(const Point &o) const;
    Point operator-(const Point &o) const;
    Point operator-() const;
    Point operator*(double s) const;

    bool operator==(const Point &o) const = default;

    std::vector<double> coords() const;

  private:
    std::array<double, 3> v_{};
    int dim_ = 2;
};

// Unit vector; the constructor rejects inputs whose norm differs from 1 by more than 1e-12.
class Direction
{
  public:
    // Defaults to the first coordinate axis in 2D.
    Direction() : v_(1.0, 0.0) {}
    explicit Direction(const Point &p);

    static Direction normalized(const Point &p);
    static Direction from_angle(double radians); // 2D: (cos, sin)

    const Point &vec() const { return v_; }
    int dim() const { return v_.dim(); }
    double dot(const Point &p) const { return v_.dot(p); }
    Direction operator-() const;

    // True when both directions agree componentwise within tol.
    bool approx_equal(const Direction &o, double tol = 1e-12) const;

  private:
    Point v_;
};

void require_same_dim(const Point &a, const Point &b, const char *what);

// ================================================================================================
// Shapes
// ================================================================================================

struct Box
{
    Point lo;
    Point hi;
};

// Values of x.y over D
struct ProjectionInterval
{
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
};

// Disk in 2D, ball in 3D.
struct DiskShape
{
    double radius = 1.0;
};

// Kite outline (cos t + 0.65 cos 2t - 0.65, 1.5 sin t) scaled by `scale`. 2D only.
struct KiteShape
{
    double scale = 1.0;
};

// Axis-aligned square with quarter-circle corners. 2D only.
struct RoundedSquareShape
{
    double half_width = 1.0;
    double corner_radius = 0.25;
};

class Shape
{
  public:
    using Kind = std::variant<DiskShape, KiteShape, RoundedSquareShape>;

    // Unit disk at the origin.
    Shape() : Shape(DiskShape{1.0}, Point(0.0, 0.0)) {}
    Shape(Kind kind, Point center);

    static Shape disk(Point center, double radius) { return Shape(DiskShape{radius}, center); }
    static Shape kite(Point center, double scale) { return Shape(KiteShape{scale}, center); }
    static Shape rounded_square(Point center, double half_width, double corner_radius)
    {
        return Shape(RoundedSquareShape{half_width, corner_radius}, center);
    }

    int dim() const { return center_.dim(); }
    const Point &center() const { return center_; }
    const Kind &kind() const { return kind_; }
    std::string name() const;

    // Same shape with its reference center moved to `c`.
    Shape translated_to(const Point &c) const;

    // Closed-region membership; throws ConfigError on dimension mismatch.
    bool contains(const Point &p) const;

    Box bounding_box() const;
    double diameter() const;

    // inf/sup of dir.y over the shape at its current center.
    ProjectionInterval projection(const Direction &dir) const;

  private:
    using Outline = std::vector<std::array<double, 2>>;

    Kind kind_;
    Point center_;
    // Dense boundary polygon in local coordinates (kite and rounded square only).
    std::shared_ptr<const Outline> outline_;
};

// Number of boundary samples used for non-analytic projections.
inline constexpr std::size_t kOutlineSamples = 4096;

struct QuadraturePoint
{
    Point point;
    double weight = 0.0;
};

// Masked midpoint rule over the bounding box of `shape` with pts_per_axis cells per axis.
// Cells cut by the boundary are replaced by a masked sub-lattice with boundary_refine points
// per axis (<= 0 selects 8 in 2D, 2 in 3D), which removes most of the staircase error.
std::vector<QuadraturePoint> quadrature_points(const Shape &shape, int pts_per_axis, int boundary_refine = 0);

// Projection of `shape` with its reference center placed at `at`.
ProjectionInterval projection_interval(const Shape &shape, const Point &at, const Direction &dir);

// Membership in the strip lo - c t0 + c eta < dir.y < hi - c t0 + c eta.
bool in_strip(const Point &y, const Direction &dir, const ProjectionInterval &proj, double eta, double t0,
              double c);

// ================================================================================================
// Trajectories
// ================================================================================================

struct FixedPath
{
    Point position;
};
struct CardioidPath
{
};
struct TrifoliumPath
{
};
struct StarPath
{
};
struct SineLinePath
{
};
struct HelixPath
{
};
struct LinearPath
{
    Point start;
    Point velocity;
};

class Trajectory
{
  public:
    using Kind = std::variant<FixedPath, CardioidPath, TrifoliumPath, StarPath, SineLinePath, HelixPath, LinearPath>;

    // t_max <= 0 selects the catalog default time window.
    Trajectory() : Trajectory(FixedPath{Point(0.0, 0.0)}, 1e6) {}
    explicit Trajectory(Kind kind, double t_max = 0.0);

    static Trajectory fixed(Point p, double t_max = 1e6) { return Trajectory(FixedPath{p}, t_max); }

    int dim() const;
    double t_max() const { return t_max_; }
    const Kind &kind() const { return kind_; }
    std::string name() const;

    // a(t); throws ConfigError for t outside [0, t_max].
    Point position(double t) const;

    // Sampled finite-difference speed check |a'(t)| < c. Returns human-readable warnings.
    std::vector<std::string> speed_warnings(double c, int samples = 2000) const;

  private:
    Kind kind_;
    double t_max_;
};

// ================================================================================================
// Sampling grids
// ================================================================================================

class SamplingGrid
{
  public:
    // [-6, 6]^2 with 121 cells per axis.
    SamplingGrid() : SamplingGrid(Point(-6.0, -6.0), Point(6.0, 6.0), 121) {}
    SamplingGrid(Point box_min, Point box_max, std::array<int, 3> resolution);
    // Same resolution on every axis.
    SamplingGrid(Point box_min, Point box_max, int resolution);

    int dim() const { return box_min_.dim(); }
    const Point &box_min() const { return box_min_; }
    const Point &box_max() const { return box_max_; }
    const std::array<int, 3> &resolution() const { return res_; }

    std::size_t size() const;
    double cell_width(int axis) const;

    // Cell centers in row-major order with the first axis varying fastest.
    Point cell_center(std::size_t index) const;
    std::array<int, 3> unflatten(std::size_t index) const;

    // Largest distance from the origin to a box corner.
    double circumradius() const;

    bool operator==(const SamplingGrid &o) const = default;

  private:
    Point box_min_;
    Point box_max_;
    std::array<int, 3> res_{1, 1, 1};
};

} // namespace mffm
