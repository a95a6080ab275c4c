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

#include "mffm/scenario.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mffm
{

// ================================================================================================
// Building blocks (pure; no file I/O)
// ================================================================================================

// Noise seed of the operator for pulse j observed from `dir`. Depends on the direction's
// coordinates rather than its position in a list, so every code path sees the same draw.
std::uint64_t operator_seed(std::uint64_t base, std::size_t pulse, const Direction &dir);

// Synthesize -> assemble -> (noise) -> sharpen for one direction of pulse j.
SharpOperator build_operator(const Scenario &s, const WeightedQuadrature &quad, std::size_t pulse,
                             const Direction &dir);

// Operators for each direction and its antipode.
std::vector<SharpPair> build_pairs(const Scenario &s, std::size_t pulse, std::span<const Direction> dirs, int jobs);

struct PulseProfile
{
    std::vector<double> etas;
    std::vector<double> h;
};

// h(eta) of pulse j over the scenario's eta window (anchored at t_j when pulse-relative).
PulseProfile pulse_profile(const Scenario &s, std::size_t pulse, int jobs);

// Single-direction 1/I (or W when strip.pair is set) of strip.pulse, one field per eta.
std::vector<IndicatorField> strip_fields(const Scenario &s, std::span<const double> etas, int jobs);

// Mean of dir.y over the cells where the max-normalized field reaches `level`.
double band_center(const IndicatorField &field, const Direction &dir, double level);

// Normalized multi-direction field of pulse j at eta = t0.
IndicatorField hull_field(const Scenario &s, std::size_t pulse, double t0, int jobs);

struct TrajectoryEntry
{
    std::size_t pulse = 0;
    double t_nominal = 0.0;
    Point truth;
    std::optional<PulseEstimate> estimate;
    std::optional<Point> centroid;
    double error = 0.0; // |centroid - truth|; meaningful when centroid is set
    std::string failure;
};

struct TrajectoryResult
{
    std::vector<TrajectoryEntry> entries;
    IndicatorField overlay; // pointwise max of the per-pulse normalized fields
};

TrajectoryResult trajectory_run(const Scenario &s, int jobs);

// Times of local maxima of |u| exceeding rel * max |u|.
std::vector<double> peak_times(std::span<const double> t, std::span<const double> u, double rel = 0.05);

// ================================================================================================
// Runs with persisted outputs
// ================================================================================================

struct RunOptions
{
    std::filesystem::path out_dir = "out";
    std::optional<std::uint64_t> seed; // overrides noise.seed
    int jobs = 1;
    // Recompute outputs and compare their hashes with the manifest already in out_dir
    // instead of writing anything.
    bool verify = false;
};

// Each run writes its outputs plus manifest.json and returns the manifest.
// Throws VerificationError on a --verify mismatch and NoSupportError when a pulse could not
// be located (after persisting everything else).
nlohmann::json run_synthesize(const Scenario &s, const RunOptions &opt);
nlohmann::json run_pulse(const Scenario &s, const RunOptions &opt);
nlohmann::json run_strip(const Scenario &s, const RunOptions &opt);
nlohmann::json run_hull(const Scenario &s, const RunOptions &opt);
nlohmann::json run_trajectory(const Scenario &s, const RunOptions &opt);
nlohmann::json run_timesignal(const Scenario &s, const RunOptions &opt);

struct SelfCheck
{
    std::string name;
    bool pass = false;
    std::string detail;
};

// Quick built-in numerics and recovery checks; independent of any scenario file.
std::vector<SelfCheck> selftest_checks(int jobs);
nlohmann::json run_selftest(const RunOptions &opt, std::vector<SelfCheck> &checks);

} // namespace mffm
