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

#ifndef FLOOD_EXPOSURE_REPORT_HPP
#define FLOOD_EXPOSURE_REPORT_HPP

// Output files. Areas are written with 6 fractional digits, persons, ratios
// and distances with 3, so identical results give byte-identical files.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "flood_exposure/equity.hpp"
#include "flood_exposure/errors.hpp"
#include "flood_exposure/exposure.hpp"
#include "flood_exposure/ingest.hpp"

namespace flood_exposure {

inline constexpr int kAreaDigits = 6;
inline constexpr int kCountDigits = 3;

inline std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    std::string s(buf);
    // No negative zero.
    if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
    return s;
}

// The double that `fixed(v, digits)` denotes.
inline double rounded(double v, int digits) { return *detail::parse_number(fixed(v, digits)); }

/// Short tag for a radius column: "1mi" for whole miles, else "<meters>m".
inline std::string radius_tag(double radius_m) {
    const double miles = radius_m / kMeters_per_mile;
    const double whole = std::round(miles);
    if (std::abs(miles - whole) < 1e-9) return std::to_string(static_cast<long long>(whole)) + "mi";
    std::string s = fixed(radius_m, kCountDigits);
    s.erase(s.find_last_not_of('0') + 1);
    if (s.back() == '.') s.pop_back();
    return s + "m";
}

namespace detail {

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("error writing " + path.string());
}

inline nlohmann::json indicator_json(const IndicatorVector& v) {
    return {{"per_capita_income", rounded(v.per_capita_income, kCountDigits)},
            {"p_minority", rounded(v.p_minority, kAreaDigits)},
            {"p_poverty", rounded(v.p_poverty, kAreaDigits)},
            {"p_unemployed", rounded(v.p_unemployed, kAreaDigits)},
            {"p_no_diploma", rounded(v.p_no_diploma, kAreaDigits)}};
}

}  // namespace detail

inline std::vector<std::string> exposure_csv_header(const std::vector<double>& radii) {
    std::vector<std::string> h = {"geoid", "total_pop", "tract_area_m2"};
    for (double r : radii) {
        const std::string t = radius_tag(r);
        h.push_back("area_in_zone_m2_" + t);
        h.push_back("threatened_pop_" + t);
        h.push_back("ratio_" + t);
    }
    return h;
}

inline std::string join_csv(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) line += ',';
        line += detail::csv_escape(fields[i]);
    }
    return line + '\n';
}

inline std::string exposure_csv(const ScenarioResult& res) {
    std::string out = join_csv(exposure_csv_header(res.radii));
    for (const TractExposure& e : res.exposures) {
        std::vector<std::string> row = {e.geoid, fixed(e.total_pop, kCountDigits), fixed(e.tract_area, kAreaDigits)};
        for (const RadiusExposure& r : e.by_radius) {
            row.push_back(fixed(r.area_in_zone, kAreaDigits));
            row.push_back(fixed(r.threatened_pop, kCountDigits));
            row.push_back(fixed(r.ratio, kCountDigits));
        }
        out += join_csv(row);
    }
    return out;
}

/// Parses an exposure CSV back into tract exposures (values as written).
inline std::vector<TractExposure> parse_exposure_csv(const std::string& text, const std::vector<double>& radii) {
    const auto records = detail::parse_csv(text, "exposure csv");
    if (records.empty() || records.front().fields != exposure_csv_header(radii)) {
        throw ValidationError(ValidationError::Kind::schema, "exposure csv", "header", "", "unexpected header");
    }
    std::vector<TractExposure> out;
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& f = records[i].fields;
        if (f.size() != 3 + 3 * radii.size()) {
            throw detail::schema_error("exposure csv", records[i].line, "", "wrong number of fields");
        }
        auto num = [&](std::size_t k) {
            auto v = detail::parse_number(f[k]);
            if (!v) throw detail::schema_error("exposure csv", records[i].line, "", "not a number");
            return *v;
        };
        TractExposure e;
        e.geoid = f[0];
        e.total_pop = num(1);
        e.tract_area = num(2);
        for (std::size_t r = 0; r < radii.size(); ++r) {
            e.by_radius.push_back({num(3 + 3 * r), num(4 + 3 * r), num(5 + 3 * r)});
        }
        out.push_back(std::move(e));
    }
    return out;
}

inline std::string flooded_csv(const ScenarioResult& res) {
    std::string out = "id,kind,min_distance_m\n";
    for (const FloodedFacility& f : res.flooded) {
        out += join_csv({f.facility.id, to_string(f.facility.kind), fixed(f.min_distance_to_flood, kCountDigits)});
    }
    return out;
}

inline nlohmann::json exposure_properties(const TractExposure& e, const std::vector<double>& radii) {
    nlohmann::json p = {{"geoid", e.geoid},
                        {"total_pop", rounded(e.total_pop, kCountDigits)},
                        {"tract_area_m2", rounded(e.tract_area, kAreaDigits)}};
    for (std::size_t r = 0; r < radii.size(); ++r) {
        const std::string t = radius_tag(radii[r]);
        p["area_in_zone_m2_" + t] = rounded(e.by_radius[r].area_in_zone, kAreaDigits);
        p["threatened_pop_" + t] = rounded(e.by_radius[r].threatened_pop, kCountDigits);
        p["ratio_" + t] = rounded(e.by_radius[r].ratio, kCountDigits);
    }
    return p;
}

inline std::string tract_feature_collection(const std::vector<Tract>& tracts, const std::vector<std::string>& geoids,
                                            const std::vector<nlohmann::json>& properties) {
    const auto by_id = detail::index_by_geoid(tracts);
    nlohmann::json features = nlohmann::json::array();
    for (std::size_t i = 0; i < geoids.size(); ++i) {
        auto it = by_id.find(geoids[i]);
        nlohmann::json geometry = it == by_id.end() ? nlohmann::json(nullptr) : geo_multipolygon_json(it->second->geometry);
        features.push_back({{"type", "Feature"}, {"properties", properties[i]}, {"geometry", std::move(geometry)}});
    }
    return nlohmann::json({{"type", "FeatureCollection"}, {"features", std::move(features)}}).dump() + "\n";
}

inline std::string exposure_geojson(const ScenarioResult& res, const std::vector<Tract>& tracts) {
    std::vector<std::string> ids;
    std::vector<nlohmann::json> props;
    for (const TractExposure& e : res.exposures) {
        ids.push_back(e.geoid);
        props.push_back(exposure_properties(e, res.radii));
    }
    return tract_feature_collection(tracts, ids, props);
}

inline nlohmann::json disparity_json(const DisparitySummary& s) {
    nlohmann::json cols = nlohmann::json::array();
    for (const DisparityColumn& c : s.columns) {
        cols.push_back({{"name", c.name},
                        {"radius_m", c.radius ? nlohmann::json(rounded(*c.radius, kCountDigits)) : nlohmann::json(nullptr)},
                        {"tract_count", c.tract_count},
                        {"mean", c.mean ? detail::indicator_json(*c.mean) : nlohmann::json(nullptr)}});
    }
    return {{"threshold", s.threshold},
            {"weighting", s.weighting == Weighting::population ? "population" : "unweighted"},
            {"columns", std::move(cols)}};
}

inline nlohmann::json radar_json(const RadarTable& t) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t k = 0; k < kIndicatorCount; ++k) {
        nlohmann::json vals = nlohmann::json::array();
        for (double v : t.rows[k]) vals.push_back(rounded(v, kAreaDigits));
        rows.push_back({{"indicator", kIndicatorNames[k]}, {"values", std::move(vals)}});
    }
    return {{"columns", t.columns}, {"indicators", std::move(rows)}};
}

inline std::string summary_json(const ScenarioResult& res, const DisparitySummary& disparity) {
    nlohmann::json counts = nlohmann::json::object();
    for (const auto& [kind, n] : res.counts_by_kind) counts[to_string(kind)] = n;
    nlohmann::json radii = nlohmann::json::array();
    for (std::size_t r = 0; r < res.radii.size(); ++r) {
        std::size_t touched = 0;
        for (const TractExposure& e : res.exposures) touched += e.by_radius[r].area_in_zone > 0.0 ? 1 : 0;
        radii.push_back({{"radius_m", rounded(res.radii[r], kCountDigits)},
                         {"tag", radius_tag(res.radii[r])},
                         {"threatened_pop", rounded(res.total_threatened(r), kCountDigits)},
                         {"tracts_touched", touched}});
    }
    const nlohmann::json doc = {{"scenario", res.label},
                                {"flooded_total", res.flooded.size()},
                                {"counts_by_kind", std::move(counts)},
                                {"radii", std::move(radii)},
                                {"disparity", disparity_json(disparity)}};
    return doc.dump(2) + "\n";
}

inline std::string delta_csv(const ScenarioDelta& d, const std::vector<double>& radii) {
    std::vector<std::string> header = {"geoid"};
    for (double r : radii) {
        header.push_back("increase_" + radius_tag(r));
        header.push_back("increase_ratio_" + radius_tag(r));
    }
    std::string out = join_csv(header);
    for (const TractDelta& t : d.tracts) {
        std::vector<std::string> row = {t.geoid};
        for (const RadiusDelta& r : t.by_radius) {
            row.push_back(fixed(r.increase, kCountDigits));
            row.push_back(fixed(r.increase_ratio, kCountDigits));
        }
        out += join_csv(row);
    }
    return out;
}

inline std::string delta_geojson(const ScenarioDelta& d, const std::vector<double>& radii,
                                 const std::vector<Tract>& tracts) {
    std::vector<std::string> ids;
    std::vector<nlohmann::json> props;
    for (const TractDelta& t : d.tracts) {
        nlohmann::json p = {{"geoid", t.geoid}, {"total_pop", rounded(t.total_pop, kCountDigits)}};
        for (std::size_t r = 0; r < radii.size(); ++r) {
            p["increase_" + radius_tag(radii[r])] = rounded(t.by_radius[r].increase, kCountDigits);
            p["increase_ratio_" + radius_tag(radii[r])] = rounded(t.by_radius[r].increase_ratio, kCountDigits);
        }
        ids.push_back(t.geoid);
        props.push_back(std::move(p));
    }
    return tract_feature_collection(tracts, ids, props);
}

}  // namespace flood_exposure

#endif
