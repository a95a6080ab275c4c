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


// Command-line front end: one subcommand per pipeline run.

#include "mffm/error.hpp"
#include "mffm/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>

namespace
{

enum Exit
{
    kOk = 0,
    kConfig = 2,
    kNumerical = 3,
    kIo = 4,
};

void print_summary(const std::string &cmd, const nlohmann::json &m)
{
    const auto &r = m.contains("results") ? m["results"] : nlohmann::json::object();
    if (cmd == "pulse")
    {
        for (const auto &p : r["pulses"])
        {
            if (p.contains("error"))
                std::printf("pulse %zu: %s\n", p["pulse"].get<std::size_t>(), p["error"].get<std::string>().c_str());
            else
                std::printf("pulse %zu: t0=%.4f  interval=[%.4f, %.4f]\n", p["pulse"].get<std::size_t>(),
                            p["t0"].get<double>(), p["eta1"].get<double>(), p["eta2"].get<double>());
        }
    }
    else if (cmd == "strip")
    {
        for (const auto &f : r["fields"])
            std::printf("eta=%.3f  max=%.6e  band_center=%s\n", f["eta"].get<double>(), f["max"].get<double>(),
                        f.contains("band_center") ? std::to_string(f["band_center"].get<double>()).c_str() : "-");
    }
    else if (cmd == "hull")
        std::printf("t0=%.4f (%s)  superlevel cells=%zu\n", r["t0"].get<double>(),
                    r["t0_source"].get<std::string>().c_str(), r["superlevel_cells"].get<std::size_t>());
    else if (cmd == "trajectory")
    {
        for (const auto &p : r["pulses"])
        {
            if (p.contains("error"))
                std::printf("pulse %zu: t0=%.3f  centroid error=%.4f\n", p["pulse"].get<std::size_t>(),
                            p["t0"].get<double>(), p["error"].get<double>());
            else
                std::printf("pulse %zu: failed (%s)\n", p["pulse"].get<std::size_t>(),
                            p.value("failure", std::string("unknown")).c_str());
        }
        std::printf("located %zu of %zu pulses\n", r["located"].get<std::size_t>(), r["processed"].get<std::size_t>());
    }
    else if (cmd == "timesignal")
    {
        std::printf("peaks:");
        for (const auto &t : r["peaks"])
            std::printf(" %.2f", t.get<double>());
        std::printf("\n");
    }
    else if (cmd == "synthesize")
        std::printf("wrote %zu band files\n", r["bands"].size());

    if (m.value("verified", false))
        std::printf("verify: %zu outputs match the manifest\n", m["outputs"].size());
    for (const auto &w : m.value("warnings", nlohmann::json::array()))
        std::fprintf(stderr, "warning: %s\n", w.get<std::string>().c_str());
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"mffm: multi-frequency factorization imaging of pulsed moving sources"};
    app.set_version_flag("--version", std::string(MFFM_VERSION));
    app.require_subcommand(1);

    std::string config;
    mffm::RunOptions opt;
    std::uint64_t seed = 0;
    app.add_option("--config", config, "Scenario file (JSON)");
    app.add_option("--out", opt.out_dir, "Output directory")->default_str("out");
    auto *seed_opt = app.add_option("--seed", seed, "Noise seed (overrides the scenario)");
    app.add_option("--jobs", opt.jobs, "Worker threads")->check(CLI::Range(1, 1024));
    app.add_flag("--verify", opt.verify, "Recompute outputs and check them against out/manifest.json");

    const char *names[][2] = {
        {"synthesize", "Write far-field bands for every processed pulse"},
        {"pulse", "Locate pulse instants from h(eta)"},
        {"strip", "Single-direction strip fields over an eta sweep"},
        {"hull", "Multi-direction support reconstruction"},
        {"trajectory", "Per-pulse reconstruction and centroid tracking"},
        {"timesignal", "Time-domain receiver signal (3D, c = 1)"},
        {"selftest", "Built-in numerics and recovery checks"},
    };
    for (const auto &n : names)
        app.add_subcommand(n[0], n[1])->fallthrough();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }
    if (*seed_opt)
        opt.seed = seed;

    const std::string cmd = app.get_subcommands().front()->get_name();
    try
    {
        if (cmd == "selftest")
        {
            std::vector<mffm::SelfCheck> checks;
            const auto m = mffm::run_selftest(opt, checks);
            bool all = true;
            for (const auto &c : checks)
            {
                std::printf("%s %s (%s)\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
                all = all && c.pass;
            }
            print_summary(cmd, m);
            return all ? kOk : kNumerical;
        }
        if (config.empty())
            throw mffm::ConfigError("--config is required for '" + cmd + "'");
        const mffm::Scenario s = mffm::load_scenario(config);
        nlohmann::json m;
        if (cmd == "synthesize")
            m = mffm::run_synthesize(s, opt);
        else if (cmd == "pulse")
            m = mffm::run_pulse(s, opt);
        else if (cmd == "strip")
            m = mffm::run_strip(s, opt);
        else if (cmd == "hull")
            m = mffm::run_hull(s, opt);
        else if (cmd == "trajectory")
            m = mffm::run_trajectory(s, opt);
        else
            m = mffm::run_timesignal(s, opt);
        print_summary(cmd, m);
        return kOk;
    }
    catch (const mffm::ConfigError &e)
    {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kConfig;
    }
    catch (const mffm::NumericalError &e)
    {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kNumerical;
    }
    catch (const mffm::VerificationError &e)
    {
        std::fprintf(stderr, "%s\n", e.what());
        return kNumerical;
    }
    catch (const mffm::IoError &e)
    {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return kIo;
    }
    catch (const nlohmann::json::exception &e)
    {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kConfig;
    }
    catch (const std::filesystem::filesystem_error &e)
    {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return kIo;
    }
}
