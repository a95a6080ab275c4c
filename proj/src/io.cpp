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


#include "mffm/io.hpp"

#include "mffm/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

namespace mffm
{

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

std::string field_csv(const IndicatorField &field)
{
    const SamplingGrid &g = field.grid;
    const int dim = g.dim();
    std::string out = dim == 3 ? "x,y,z,value\n" : "x,y,value\n";
    out.reserve(out.size() + field.values.size() * (dim + 1) * 20);
    for (std::size_t i = 0; i < field.values.size(); ++i)
    {
        const Point p = g.cell_center(i);
        for (int a = 0; a < dim; ++a)
        {
            out += format_double(p[static_cast<std::size_t>(a)]);
            out += ',';
        }
        out += format_double(field.values[i]);
        out += '\n';
    }
    return out;
}

std::string field_pgm(const IndicatorField &field)
{
    const auto &res = field.grid.resolution();
    const std::size_t w = static_cast<std::size_t>(res[0]), h = static_cast<std::size_t>(res[1]);
    const std::size_t layers = field.grid.dim() == 3 ? static_cast<std::size_t>(res[2]) : 1;
    if (field.values.size() != w * h * layers)
        throw ConfigError("field values do not match the sampling grid");
    std::vector<double> img(w * h, 0.0);
    for (std::size_t k = 0; k < layers; ++k)
        for (std::size_t i = 0; i < w * h; ++i)
        {
            const double v = field.values[k * w * h + i];
            img[i] = k == 0 ? v : std::max(img[i], v);
        }
    double vmax = 0.0;
    for (double v : img)
        if (std::isfinite(v))
            vmax = std::max(vmax, v);

    std::ostringstream os;
    os << "P2\n" << w << ' ' << h << "\n65535\n";
    for (std::size_t row = 0; row < h; ++row)
    {
        const std::size_t iy = h - 1 - row;
        for (std::size_t ix = 0; ix < w; ++ix)
        {
            double v = img[iy * w + ix];
            if (!std::isfinite(v))
                v = v > 0 ? vmax : 0.0;
            const double t = vmax > 0.0 ? std::clamp(v / vmax, 0.0, 1.0) : 0.0;
            os << (ix ? " " : "") << static_cast<long>(std::lround(t * 65535.0));
        }
        os << '\n';
    }
    return os.str();
}

namespace
{

std::string two_column_csv(const char *header, std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size())
        throw ConfigError("CSV columns differ in length");
    std::string out = header;
    out += '\n';
    for (std::size_t k = 0; k < a.size(); ++k)
    {
        out += format_double(a[k]);
        out += ',';
        out += format_double(b[k]);
        out += '\n';
    }
    return out;
}

} // namespace

std::string h_profile_csv(std::span<const double> etas, std::span<const double> h)
{
    return two_column_csv("eta,h", etas, h);
}

std::string signal_csv(std::span<const double> t, std::span<const double> u)
{
    return two_column_csv("t,U", t, u);
}

std::uint64_t fnv1a64(std::string_view data)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : data)
    {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void write_file_atomic(const std::filesystem::path &path, std::string_view content)
{
    namespace fs = std::filesystem;
    std::error_code ec;
    if (path.has_parent_path())
    {
        fs::create_directories(path.parent_path(), ec);
        if (ec)
            throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out)
            throw IoError("write failed for " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec)
    {
        fs::remove(tmp, ec);
        throw IoError("cannot move output into place: " + path.string());
    }
}

std::string read_file(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace mffm
