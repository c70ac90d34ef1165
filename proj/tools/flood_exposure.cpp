// Copyright 2026 The flood-exposure Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// flood-exposure: command-line driver.
//
//   flood-exposure validate --config <path>
//   flood-exposure run --config <path> --scenario current|future
//   flood-exposure compare --config <path>
//
// Every configuration key can also be given as a flag of the same name.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "flood_exposure/cli.hpp"
#include "flood_exposure/config.hpp"

namespace fe = flood_exposure;

namespace {

void add_overrides(CLI::App& cmd, fe::ConfigOverrides& o) {
    auto str = [&](const char* name, std::optional<std::string>& dst) {
        cmd.add_option_function<std::string>(std::string("--") + name, [&dst](const std::string& v) { dst = v; });
    };
    auto num = [&](const char* name, std::optional<double>& dst) {
        cmd.add_option_function<double>(std::string("--") + name, [&dst](const double& v) { dst = v; });
    };
    auto flag = [&](const char* name, std::optional<bool>& dst) {
        cmd.add_option_function<bool>(std::string("--") + name, [&dst](const bool& v) { dst = v; });
    };
    str("facilities", o.facilities);
    str("tracts", o.tracts);
    str("flood_current", o.flood_current);
    str("flood_future", o.flood_future);
    str("current_label", o.current_label);
    str("future_label", o.future_label);
    str("output_dir", o.output_dir);
    str("weighting", o.weighting);
    num("flood_buffer_m", o.flood_buffer_m);
    num("snap_resolution_m", o.snap_resolution_m);
    num("inclusion_threshold", o.inclusion_threshold);
    cmd.add_option_function<std::vector<double>>("--radii_m", [&o](const std::vector<double>& v) { o.radii_m = v; })
        ->delimiter(',');
    cmd.add_option_function<int>("--disc_segments", [&o](const int& v) { o.disc_segments = v; });
    flag("disc_area_correction", o.disc_area_correction);
    flag("emit_csv", o.emit_csv);
    flag("emit_geojson", o.emit_geojson);
    flag("emit_summary_json", o.emit_summary_json);
    flag("emit_chart_json", o.emit_chart_json);
    cmd.add_option_function<unsigned>("--threads", [&o](const unsigned& v) { o.threads = v; });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Flood-induced pollutant exposure of census tracts"};
    app.name("flood-exposure");
    app.require_subcommand(1);

    std::string config_path;
    std::string scenario;
    fe::ConfigOverrides overrides;

    auto* validate = app.add_subcommand("validate", "Check every configured input file");
    auto* run = app.add_subcommand("run", "Compute exposure for one flood scenario");
    auto* compare = app.add_subcommand("compare", "Compare the current and future scenarios");
    for (CLI::App* cmd : {validate, run, compare}) {
        cmd->add_option("--config", config_path, "TOML configuration file")->required();
        add_overrides(*cmd, overrides);
    }
    run->add_option("--scenario", scenario, "current or future")->required()->check(CLI::IsMember({"current", "future"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : fe::cli::kValidationError;
    }

    fe::RunConfig cfg;
    const int loaded = fe::cli::guarded(std::cerr, [&] {
        cfg = fe::load_config(config_path);
        fe::apply_overrides(cfg, overrides);
        return 0;
    });
    if (loaded != 0) return loaded;

    if (validate->parsed()) return fe::cli::cmd_validate(cfg, std::cout, std::cerr);
    if (run->parsed()) return fe::cli::cmd_run(cfg, scenario, std::cout, std::cerr);
    return fe::cli::cmd_compare(cfg, std::cout, std::cerr);
}
