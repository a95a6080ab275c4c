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

#include "mffm/imaging.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mffm
{

inline constexpr int kScenarioSchemaVersion = 1;

struct EtaWindow
{
    double min = 0.0;
    double max = 10.0;
    double step = 0.05;
    // When set, the window is taken relative to each pulse's nominal instant (a time gate
    // around the separated pulse) instead of absolute times.
    bool pulse_relative = false;

    std::vector<double> samples(double anchor = 0.0) const;
};

struct Thresholds
{
    double rel_threshold = 0.01; // h(eta) support threshold
    double cutoff_rel = 1e-14;   // Picard spectral cutoff
    double field_level = 0.5;    // superlevel used for half-max sets
};

struct StripSpec
{
    std::vector<double> etas{1, 2, 3, 4, 5, 6};
    bool pair = false; // false: 1/I of the first direction, true: W of the first pair
    std::size_t pulse = 0;
};

struct HullSpec
{
    std::optional<double> t0; // unset: estimate from h(eta)
    std::size_t pulse = 0;
};

struct TimeSignalSpec
{
    Point receiver{3.0, 0.0, 0.0};
    double t_min = 0.0;
    double t_max = 14.0;
    double t_step = 0.01;
    std::size_t sphere_pts = 2000000;

    std::vector<double> samples() const;
};

struct Scenario
{
    std::string name = "scenario";
    SourceScene scene;
    FrequencyGrid grid{0.0, 3.0 * 3.14159265358979323846, 48};
    std::vector<Direction> directions;        // one per antipodal pair
    std::optional<Direction> pulse_direction; // pair used for h(eta); defaults to directions[0]
    SamplingGrid sampling;
    std::optional<double> ball_radius; // B_R for h(eta); defaults to the sampling circumradius
    EtaWindow eta_window;
    NoiseSpec noise;
    Thresholds thresholds;
    int pts_per_axis = 200;
    std::size_t pulse_stride = 1; // process every k-th pulse
    StripSpec strip;
    HullSpec hull;
    TimeSignalSpec timesignal;
    bool write_csv = true;
    bool write_pgm = true;
    // Parse-time observations (defaulted open choices, aliasing risks); copied into manifests.
    std::vector<std::string> notes;
    // FNV-1a of the canonical (sorted-key) serialization of the source document.
    std::uint64_t source_hash = 0;

    int dim() const { return scene.dim(); }
    Direction pulse_pair_direction() const { return pulse_direction ? *pulse_direction : directions.at(0); }
    double ball() const { return ball_radius ? *ball_radius : sampling.circumradius(); }
    std::vector<std::size_t> processed_pulses() const;
};

// Parses and validates a scenario document. Unknown keys and malformed values raise ConfigError.
Scenario parse_scenario(const nlohmann::json &doc);
Scenario load_scenario(const std::filesystem::path &path);

// `count` directions on the upper unit hemisphere (z > 0) from a Fibonacci lattice.
std::vector<Direction> fibonacci_hemisphere(std::size_t count);

} // namespace mffm
