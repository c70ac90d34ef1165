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

#ifndef FLOOD_EXPOSURE_CLI_HPP
#define FLOOD_EXPOSURE_CLI_HPP

#include <exception>
#include <filesystem>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "flood_exposure/config.hpp"
#include "flood_exposure/equity.hpp"
#include "flood_exposure/errors.hpp"
#include "flood_exposure/exposure.hpp"
#include "flood_exposure/ingest.hpp"
#include "flood_exposure/report.hpp"

namespace flood_exposure::cli {

enum ExitCode : int { kOk = 0, kIoError = 1, kValidationError = 2, kInternalError = 3 };

inline int exit_code_for(const Error& e) {
    switch (e.category()) {
        case Error::Category::io: return kIoError;
        case Error::Category::validation: return kValidationError;
        case Error::Category::geometry: return kInternalError;
    }
    return kInternalError;
}

// Runs `body`, reporting any library error on `err` and mapping it to an
// exit code.
inline int guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternalError;
    }
}

inline void require_path(const std::filesystem::path& p, const char* key) {
    if (p.empty()) {
        throw ValidationError(ValidationError::Kind::bad_argument, "", "", key, "path not configured");
    }
    if (!std::filesystem::exists(p)) throw IoError(std::string(key) + " not found: " + p.string());
}

/// Reads every configured input, printing row counts and the first ten
/// record errors.
inline int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    bool io_failure = false;
    std::vector<ValidationError> errors;
    auto attempt = [&](const char* key, const std::filesystem::path& path, bool required,
                       const std::function<std::size_t(ErrorSink&)>& read, const char* unit) {
        if (path.empty() && !required) return;
        try {
            require_path(path, key);
            ErrorSink sink;
            const std::size_t n = read(sink);
            out << key << ": " << n << ' ' << unit << " (" << path.string() << ")\n";
            errors.insert(errors.end(), sink.errors().begin(), sink.errors().end());
        } catch (const IoError& e) {
            io_failure = true;
            err << "error: " << e.what() << '\n';
        } catch (const ValidationError& e) {
            errors.push_back(e);
        }
    };
    attempt("facilities", cfg.facilities, true,
            [&](ErrorSink& s) { return read_facilities(cfg.facilities, &s).size(); }, "facilities");
    attempt("tracts", cfg.tracts, true, [&](ErrorSink& s) { return read_tracts(cfg.tracts, &s).size(); }, "tracts");
    attempt("flood_current", cfg.flood_current, true,
            [&](ErrorSink& s) { return read_flood_scenario(cfg.flood_current, cfg.current_label, &s).points.size(); },
            "flood points");
    attempt("flood_future", cfg.flood_future, false,
            [&](ErrorSink& s) { return read_flood_scenario(cfg.flood_future, cfg.future_label, &s).points.size(); },
            "flood points");
    try {
        cfg.exposure.validate();
    } catch (const ValidationError& e) {
        errors.push_back(e);
    }
    const std::size_t shown = std::min<std::size_t>(errors.size(), 10);
    for (std::size_t i = 0; i < shown; ++i) err << "error: " << errors[i].what() << '\n';
    if (errors.size() > shown) err << "... " << errors.size() - shown << " more errors\n";
    if (io_failure) return kIoError;
    if (!errors.empty()) return kValidationError;
    out << "ok\n";
    return kOk;
}

struct Inputs {
    std::vector<Facility> facilities;
    std::vector<Tract> tracts;
};

inline Inputs load_inputs(const RunConfig& cfg) {
    require_path(cfg.facilities, "facilities");
    require_path(cfg.tracts, "tracts");
    return {read_facilities(cfg.facilities), read_tracts(cfg.tracts)};
}

inline FloodScenario load_scenario(const RunConfig& cfg, bool future) {
    const auto& path = future ? cfg.flood_future : cfg.flood_current;
    require_path(path, future ? "flood_future" : "flood_current");
    return read_flood_scenario(path, future ? cfg.future_label : cfg.current_label);
}

inline ScenarioResult run_pipeline(const RunConfig& cfg, const Inputs& in, const FloodScenario& scenario) {
    return run_scenario(std::span<const Facility>(in.facilities), std::span<const Tract>(in.tracts), scenario,
                        cfg.exposure, default_projection(in.tracts), effective_workers(cfg));
}

inline nlohmann::json radar_chart(const DisparitySummary& s) { return radar_json(radar_normalize(s)); }

/// Runs one scenario and writes its exposure tables, flooded-facility list
/// and summary.
inline int cmd_run(const RunConfig& cfg, const std::string& which, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (which != "current" && which != "future") {
            throw ValidationError(ValidationError::Kind::bad_argument, "", "", "scenario",
                                  "scenario must be 'current' or 'future'");
        }
        cfg.exposure.validate();
        const Inputs in = load_inputs(cfg);
        const FloodScenario scenario = load_scenario(cfg, which == "future");
        const ScenarioResult res = run_pipeline(cfg, in, scenario);
        const DisparitySummary disparity =
            disparity_summary(in.tracts, res, cfg.exposure.inclusion_threshold, cfg.weighting);

        std::filesystem::create_directories(cfg.output_dir);
        const std::string label = res.label;
        if (cfg.emit.csv) {
            detail::write_text(cfg.output_dir / ("exposure_" + label + ".csv"), exposure_csv(res));
            detail::write_text(cfg.output_dir / ("flooded_" + label + ".csv"), flooded_csv(res));
        }
        if (cfg.emit.geojson) {
            detail::write_text(cfg.output_dir / ("exposure_" + label + ".geojson"), exposure_geojson(res, in.tracts));
        }
        if (cfg.emit.summary_json) {
            detail::write_text(cfg.output_dir / ("summary_" + label + ".json"), summary_json(res, disparity));
        }
        if (cfg.emit.chart_json) {
            const nlohmann::json chart = {{"scenario", label}, {"radar", radar_chart(disparity)}};
            detail::write_text(cfg.output_dir / ("chart_" + label + ".json"), chart.dump(2) + "\n");
        }
        out << "scenario " << label << ": " << res.flooded.size() << " flooded facilities";
        for (const auto& [kind, n] : res.counts_by_kind) out << ", " << to_string(kind) << ' ' << n;
        out << '\n';
        for (std::size_t r = 0; r < res.radii.size(); ++r) {
            out << "  " << radius_tag(res.radii[r]) << ": threatened population "
                << fixed(res.total_threatened(r), kCountDigits) << '\n';
        }
        return static_cast<int>(kOk);
    });
}

/// Runs both scenarios and writes the per-tract deltas and the comparison
/// summary with chart data.
inline int cmd_compare(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        cfg.exposure.validate();
        const Inputs in = load_inputs(cfg);
        const FloodScenario cur_s = load_scenario(cfg, false);
        const FloodScenario fut_s = load_scenario(cfg, true);
        const ScenarioResult cur = run_pipeline(cfg, in, cur_s);
        const ScenarioResult fut = run_pipeline(cfg, in, fut_s);
        const ScenarioDelta delta = scenario_delta(cur, fut);
        const double tau = cfg.exposure.inclusion_threshold;
        const DisparitySummary cur_disp = disparity_summary(in.tracts, cur, tau, cfg.weighting);
        const DisparitySummary fut_disp = disparity_summary(in.tracts, fut, tau, cfg.weighting);

        std::filesystem::create_directories(cfg.output_dir);
        if (cfg.emit.csv) detail::write_text(cfg.output_dir / "delta.csv", delta_csv(delta, cur.radii));
        if (cfg.emit.geojson) {
            detail::write_text(cfg.output_dir / "delta.geojson", delta_geojson(delta, cur.radii, in.tracts));
        }

        nlohmann::json totals = nlohmann::json::array();
        nlohmann::json profiles = nlohmann::json::array();
        nlohmann::json histograms = nlohmann::json::array();
        for (std::size_t r = 0; r < cur.radii.size(); ++r) {
            const RadiusTotals& t = delta.totals[r];
            totals.push_back({{"radius_m", rounded(t.radius, kCountDigits)},
                              {"tag", radius_tag(t.radius)},
                              {cur.label, rounded(t.current, kCountDigits)},
                              {fut.label, rounded(t.future, kCountDigits)},
                              {"increase", rounded(t.increase, kCountDigits)},
                              {"percent_increase",
                               t.percent ? nlohmann::json(rounded(*t.percent, kCountDigits)) : nlohmann::json(nullptr)}});
            const auto increased = increased_tracts(in.tracts, delta, r);
            nlohmann::json profile = nullptr;
            if (!increased.empty()) profile = detail::indicator_json(increase_profile(in.tracts, delta, r, cfg.weighting));
            profiles.push_back({{"tag", radius_tag(cur.radii[r])}, {"tract_count", increased.size()}, {"mean", profile}});

            nlohmann::json hist = nlohmann::json::array();
            for (std::size_t k = 1; k < kIndicatorCount; ++k) {
                std::vector<double> vals;
                for (const Tract* tr : increased) vals.push_back(as_array(tr->indicators)[k]);
                const Histogram h = proportion_histogram(vals);
                hist.push_back({{"indicator", kIndicatorNames[k]}, {"bin_edges_lo", h.lo}, {"bin_edges_hi", h.hi},
                                {"counts", h.counts}});
            }
            histograms.push_back({{"tag", radius_tag(cur.radii[r])}, {"histograms", std::move(hist)}});
        }
        const nlohmann::json doc = {
            {"current", cur.label},
            {"future", fut.label},
            {"flooded", {{cur.label, cur.flooded.size()}, {fut.label, fut.flooded.size()}}},
            {"totals", std::move(totals)},
            {"increase_profile", std::move(profiles)},
            {"disparity", {{cur.label, disparity_json(cur_disp)}, {fut.label, disparity_json(fut_disp)}}},
            {"charts",
             {{"radar", {{cur.label, radar_chart(cur_disp)}, {fut.label, radar_chart(fut_disp)}}},
              {"increase_histograms", std::move(histograms)}}}};
        if (cfg.emit.summary_json || cfg.emit.chart_json) {
            detail::write_text(cfg.output_dir / "compare_summary.json", doc.dump(2) + "\n");
        }
        for (const RadiusTotals& t : delta.totals) {
            out << radius_tag(t.radius) << ": " << cur.label << ' ' << fixed(t.current, kCountDigits) << ", "
                << fut.label << ' ' << fixed(t.future, kCountDigits) << ", increase "
                << (t.percent ? fixed(*t.percent, 2) + "%" : std::string("n/a")) << '\n';
        }
        return static_cast<int>(kOk);
    });
}

}  // namespace flood_exposure::cli

#endif
