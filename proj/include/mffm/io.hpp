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

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

namespace mffm
{

// Text renderings of pipeline products. Rendering and writing are split so that runs can
// hash their outputs before (or instead of) touching the disk.

// Header `x,y[,z],value`, one row per cell in grid order, %.12e.
std::string field_csv(const IndicatorField &field);

// Plain PGM (P2), maxval 65535, values mapped linearly from [0, max] with the top row at the
// largest y. 3D fields are reduced by a maximum projection along z.
std::string field_pgm(const IndicatorField &field);

// Header `eta,h`.
std::string h_profile_csv(std::span<const double> etas, std::span<const double> h);

// Header `t,U`.
std::string signal_csv(std::span<const double> t, std::span<const double> u);

std::string format_double(double v); // %.12e

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

// Writes through a temporary sibling and renames it into place. Throws IoError.
void write_file_atomic(const std::filesystem::path &path, std::string_view content);
std::string read_file(const std::filesystem::path &path);

} // namespace mffm
