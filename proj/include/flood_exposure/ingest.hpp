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

#ifndef FLOOD_EXPOSURE_INGEST_HPP
#define FLOOD_EXPOSURE_INGEST_HPP

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "flood_exposure/boolean.hpp"
#include "flood_exposure/errors.hpp"
#include "flood_exposure/geometry.hpp"
#include "flood_exposure/projection.hpp"

namespace flood_exposure {

enum class FacilityKind { tri, npl, industrial };

inline constexpr FacilityKind kAllFacilityKinds[] = {FacilityKind::tri, FacilityKind::npl, FacilityKind::industrial};

inline const char* to_string(FacilityKind k) {
    switch (k) {
        case FacilityKind::tri: return "TRI";
        case FacilityKind::npl: return "NPL";
        case FacilityKind::industrial: return "INDUSTRIAL";
    }
    return "?";
}

inline std::optional<FacilityKind> parse_facility_kind(std::string_view s) {
    std::string up(s);
    std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (up == "TRI") return FacilityKind::tri;
    if (up == "NPL") return FacilityKind::npl;
    if (up == "INDUSTRIAL") return FacilityKind::industrial;
    return std::nullopt;
}

struct Facility {
    std::string id;
    std::string name;
    FacilityKind kind = FacilityKind::tri;
    GeoPoint location;

    friend bool operator==(const Facility&, const Facility&) = default;
};

struct FloodPoint {
    GeoPoint location;
    double depth_m = 0.0;

    friend bool operator==(const FloodPoint&, const FloodPoint&) = default;
};

struct FloodScenario {
    std::string label;
    std::vector<FloodPoint> points;

    friend bool operator==(const FloodScenario&, const FloodScenario&) = default;
};

using GeoRing = std::vector<GeoPoint>;

struct GeoPolygon {
    GeoRing exterior;
    std::vector<GeoRing> holes;

    friend bool operator==(const GeoPolygon&, const GeoPolygon&) = default;
};

struct GeoMultiPolygon {
    std::vector<GeoPolygon> parts;

    friend bool operator==(const GeoMultiPolygon&, const GeoMultiPolygon&) = default;
};

// The five socioeconomic indicators carried by each tract. Proportions are
// fractions in [0, 1].
struct IndicatorVector {
    double per_capita_income = 0.0;
    double p_minority = 0.0;
    double p_poverty = 0.0;
    double p_unemployed = 0.0;
    double p_no_diploma = 0.0;

    friend bool operator==(const IndicatorVector&, const IndicatorVector&) = default;
};

struct Tract {
    std::string geoid;
    GeoMultiPolygon geometry;
    double total_pop = 0.0;
    IndicatorVector indicators;

    friend bool operator==(const Tract&, const Tract&) = default;
};

// Collects recoverable record-level errors. When a reader is given a sink it
// skips bad records and keeps going; without one it throws the first error.
class ErrorSink {
public:
    void add(ValidationError e) { errors_.push_back(std::move(e)); }
    const std::vector<ValidationError>& errors() const noexcept { return errors_; }
    bool empty() const noexcept { return errors_.empty(); }

private:
    std::vector<ValidationError> errors_;
};

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("error reading " + path.string());
    std::string text = ss.str();
    if (text.rfind("\xEF\xBB\xBF", 0) == 0) text.erase(0, 3);
    return text;
}

inline void raise_or_collect(ErrorSink* sink, ValidationError e) {
    if (!sink) throw e;
    sink->add(std::move(e));
}

// One logical CSV record with its 1-based line number.
struct CsvRecord {
    std::size_t line = 0;
    std::vector<std::string> fields;
};

// RFC 4180 style: comma separated, optional double quotes with "" escapes,
// LF or CRLF line endings.
inline std::vector<CsvRecord> parse_csv(std::string_view text, const std::string& file) {
    std::vector<CsvRecord> records;
    CsvRecord cur;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    std::size_t line = 1;
    cur.line = 1;
    auto end_field = [&] {
        cur.fields.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        const bool blank = cur.fields.size() == 1 && cur.fields[0].empty();
        if (!blank) records.push_back(std::move(cur));
        cur = CsvRecord{};
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        if (c == '"' && !field_started) {
            quoted = true;
            field_started = true;
        } else if (c == ',') {
            end_field();
        } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
            continue;
        } else if (c == '\n') {
            end_record();
            ++line;
            cur.line = line;
        } else {
            field.push_back(c);
            field_started = true;
        }
    }
    if (quoted) {
        throw ValidationError(ValidationError::Kind::schema, file, "row " + std::to_string(cur.line), "",
                              "unterminated quoted field");
    }
    if (field_started || !cur.fields.empty()) end_record();
    return records;
}

// Maps required column names to positions in the header record.
inline std::vector<std::size_t> require_columns(const CsvRecord& header, std::span<const std::string_view> names,
                                                const std::string& file) {
    std::vector<std::size_t> pos;
    for (std::string_view name : names) {
        auto it = std::find(header.fields.begin(), header.fields.end(), name);
        if (it == header.fields.end()) {
            throw ValidationError(ValidationError::Kind::schema, file, "header", std::string(name),
                                  "required column missing");
        }
        pos.push_back(static_cast<std::size_t>(it - header.fields.begin()));
    }
    return pos;
}

inline std::optional<double> parse_number(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

inline std::string row_label(std::size_t line) { return "row " + std::to_string(line); }

inline ValidationError schema_error(const std::string& file, std::size_t line, std::string_view column,
                                    const std::string& reason) {
    return ValidationError(ValidationError::Kind::schema, file, row_label(line), std::string(column), reason);
}

// Shortest decimal text that parses back to exactly `v`.
inline std::string exact_number(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

inline double ring_signed_area_deg(const GeoRing& r) {
    double twice = 0.0;
    const std::size_t n = r.size();
    for (std::size_t i = 0; i < n; ++i) {
        const GeoPoint& a = r[i];
        const GeoPoint& b = r[(i + 1) % n];
        twice += (a.lon - r[0].lon) * (b.lat - r[0].lat) - (b.lon - r[0].lon) * (a.lat - r[0].lat);
    }
    return 0.5 * twice;
}

inline MultiPolygon as_degree_plane(const GeoMultiPolygon& g) {
    auto conv = [](const GeoRing& r) {
        Ring out;
        for (const GeoPoint& p : r) out.vertices.push_back({p.lon, p.lat});
        return out;
    };
    MultiPolygon m;
    for (const GeoPolygon& p : g.parts) {
        Polygon q;
        q.exterior = conv(p.exterior);
        for (const GeoRing& h : p.holes) q.holes.push_back(conv(h));
        m.parts.push_back(std::move(q));
    }
    return m;
}

}  // namespace detail

/// Reads `id,name,kind,lon,lat` facility rows.
inline std::vector<Facility> read_facilities(const std::filesystem::path& path, ErrorSink* sink = nullptr) {
    const std::string file = path.string();
    const auto records = detail::parse_csv(detail::read_file(path), file);
    std::vector<Facility> out;
    if (records.empty()) {
        throw ValidationError(ValidationError::Kind::schema, file, "header", "", "missing header row");
    }
    static constexpr std::string_view kColumns[] = {"id", "name", "kind", "lon", "lat"};
    const auto col = detail::require_columns(records.front(), kColumns, file);
    std::unordered_set<std::string> ids;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.fields.size() != records.front().fields.size()) {
            detail::raise_or_collect(sink, detail::schema_error(file, rec.line, "", "wrong number of fields"));
            continue;
        }
        Facility f;
        f.id = rec.fields[col[0]];
        f.name = rec.fields[col[1]];
        if (f.id.empty()) {
            detail::raise_or_collect(sink, detail::schema_error(file, rec.line, "id", "empty id"));
            continue;
        }
        const auto kind = parse_facility_kind(rec.fields[col[2]]);
        if (!kind) {
            detail::raise_or_collect(sink, detail::schema_error(file, rec.line, "kind",
                                                                "unknown facility kind '" + rec.fields[col[2]] + "'"));
            continue;
        }
        f.kind = *kind;
        const auto lon = detail::parse_number(rec.fields[col[3]]);
        const auto lat = detail::parse_number(rec.fields[col[4]]);
        if (!lon || !lat) {
            detail::raise_or_collect(sink, detail::schema_error(file, rec.line, !lon ? "lon" : "lat", "not a finite number"));
            continue;
        }
        if (*lon < -180.0 || *lon > 180.0 || *lat < -90.0 || *lat > 90.0) {
            const bool bad_lon = *lon < -180.0 || *lon > 180.0;
            detail::raise_or_collect(sink, ValidationError(ValidationError::Kind::coordinate_out_of_range, file,
                                                           detail::row_label(rec.line), bad_lon ? "lon" : "lat",
                                                           "coordinate out of range"));
            continue;
        }
        f.location = {*lon, *lat};
        if (!ids.insert(f.id).second) {
            detail::raise_or_collect(sink, ValidationError(ValidationError::Kind::duplicate_id, file,
                                                           detail::row_label(rec.line), "id",
                                                           "duplicate facility id '" + f.id + "'"));
            continue;
        }
        out.push_back(std::move(f));
    }
    return out;
}

/// Reads `lon,lat,depth_m` inundation points. Zero depth is kept.
inline FloodScenario read_flood_scenario(const std::filesystem::path& path, std::string label,
                                         ErrorSink* sink = nullptr) {
    const std::string file = path.string();
    if (label.empty()) {
        throw ValidationError(ValidationError::Kind::bad_argument, file, "", "", "flood scenario label must not be empty");
    }
    const auto records = detail::parse_csv(detail::read_file(path), file);
    if (records.empty()) {
        throw ValidationError(ValidationError::Kind::schema, file, "header", "", "missing header row");
    }
    static constexpr std::string_view kColumns[] = {"lon", "lat", "depth_m"};
    const auto col = detail::require_columns(records.front(), kColumns, file);
    FloodScenario out;
    out.label = std::move(label);
    out.points.reserve(records.size() - 1);
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.fields.size() != records.front().fields.size()) {
            detail::raise_or_collect(sink, detail::schema_error(file, rec.line, "", "wrong number of fields"));
            continue;
        }
        const auto lon = detail::parse_number(rec.fields[col[0]]);
        const auto lat = detail::parse_number(rec.fields[col[1]]);
        const auto depth = detail::parse_number(rec.fields[col[2]]);
        if (!lon || !lat || !depth) {
            detail::raise_or_collect(
                sink, detail::schema_error(file, rec.line, !lon ? "lon" : (!lat ? "lat" : "depth_m"), "not a finite number"));
            continue;
        }
        if (*lon < -180.0 || *lon > 180.0 || *lat < -90.0 || *lat > 90.0) {
            const bool bad_lon = *lon < -180.0 || *lon > 180.0;
            detail::raise_or_collect(sink, ValidationError(ValidationError::Kind::coordinate_out_of_range, file,
                                                           detail::row_label(rec.line), bad_lon ? "lon" : "lat",
                                                           "coordinate out of range"));
            continue;
        }
        if (*depth < 0.0) {
            detail::raise_or_collect(sink, ValidationError(ValidationError::Kind::negative_depth, file,
                                                           detail::row_label(rec.line), "depth_m", "negative flood depth"));
            continue;
        }
        out.points.push_back({{*lon, *lat}, *depth});
    }
    return out;
}

namespace detail {

inline GeoRing parse_ring(const nlohmann::json& coords, const std::string& file, const std::string& where) {
    if (!coords.is_array()) {
        throw ValidationError(ValidationError::Kind::schema, file, where, "geometry", "ring is not an array");
    }
    GeoRing ring;
    ring.reserve(coords.size());
    for (const auto& pos : coords) {
        if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() || !pos[1].is_number()) {
            throw ValidationError(ValidationError::Kind::schema, file, where, "geometry", "invalid position");
        }
        const GeoPoint p{pos[0].get<double>(), pos[1].get<double>()};
        if (!is_valid(p)) {
            throw ValidationError(ValidationError::Kind::coordinate_out_of_range, file, where, "geometry",
                                  "coordinate out of range");
        }
        ring.push_back(p);
    }
    if (ring.size() > 1 && ring.front() == ring.back()) ring.pop_back();
    return ring;
}

inline GeoPolygon parse_polygon(const nlohmann::json& rings, const std::string& file, const std::string& where) {
    if (!rings.is_array() || rings.empty()) {
        throw ValidationError(ValidationError::Kind::schema, file, where, "geometry", "polygon has no rings");
    }
    GeoPolygon poly;
    poly.exterior = parse_ring(rings[0], file, where);
    for (std::size_t i = 1; i < rings.size(); ++i) poly.holes.push_back(parse_ring(rings[i], file, where));
    return poly;
}

inline double number_property(const nlohmann::json& props, const char* name, const std::string& file,
                              const std::string& where) {
    auto it = props.find(name);
    if (it == props.end() || !it->is_number()) {
        throw ValidationError(ValidationError::Kind::schema, file, where, name, "missing or non-numeric property");
    }
    const double v = it->get<double>();
    if (!std::isfinite(v)) {
        throw ValidationError(ValidationError::Kind::schema, file, where, name, "property is not finite");
    }
    return v;
}

// Checks and rewinds one tract geometry. Ring validity is tested on a grid
// of 1e-8 degrees (about 1 mm).
inline void validate_tract_geometry(GeoMultiPolygon& g, const std::string& file, const std::string& where) {
    auto bad = [&](const std::string& reason) {
        return ValidationError(ValidationError::Kind::invalid_geometry, file, where, "geometry", reason);
    };
    if (g.parts.empty()) throw bad("empty geometry");
    for (GeoPolygon& p : g.parts) {
        auto fix = [&](GeoRing& r, bool ccw) {
            if (r.size() < 3) throw bad("ring has fewer than 3 vertices");
            const double a = ring_signed_area_deg(r);
            if (a == 0.0) throw bad("zero-area ring");
            if ((a > 0.0) != ccw) std::reverse(r.begin(), r.end());
        };
        fix(p.exterior, true);
        for (GeoRing& h : p.holes) fix(h, false);
    }
    const std::string defect = find_ring_defect(as_degree_plane(g), SnapGrid{1e-8});
    if (!defect.empty()) throw bad(defect);
}

}  // namespace detail

/// Reads census tracts from a GeoJSON FeatureCollection.
inline std::vector<Tract> read_tracts(const std::filesystem::path& path, ErrorSink* sink = nullptr) {
    const std::string file = path.string();
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(detail::read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(ValidationError::Kind::schema, file, "", "", std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" || !doc.contains("features") ||
        !doc["features"].is_array()) {
        throw ValidationError(ValidationError::Kind::schema, file, "", "type", "expected a FeatureCollection");
    }
    std::vector<Tract> out;
    std::unordered_set<std::string> geoids;
    const auto& features = doc["features"];
    for (std::size_t i = 0; i < features.size(); ++i) {
        std::string where = "feature " + std::to_string(i);
        try {
            const auto& f = features[i];
            if (!f.is_object() || !f.contains("properties") || !f["properties"].is_object()) {
                throw ValidationError(ValidationError::Kind::schema, file, where, "properties", "missing properties");
            }
            const auto& props = f["properties"];
            Tract t;
            auto gid = props.find("GEOID");
            if (gid == props.end() || !(gid->is_string() || gid->is_number_integer())) {
                throw ValidationError(ValidationError::Kind::schema, file, where, "GEOID", "missing GEOID");
            }
            t.geoid = gid->is_string() ? gid->get<std::string>() : std::to_string(gid->get<long long>());
            if (t.geoid.empty()) {
                throw ValidationError(ValidationError::Kind::schema, file, where, "GEOID", "empty GEOID");
            }
            where += " (GEOID " + t.geoid + ")";
            t.total_pop = detail::number_property(props, "total_pop", file, where);
            if (t.total_pop < 0.0) {
                throw ValidationError(ValidationError::Kind::schema, file, where, "total_pop", "negative population");
            }
            t.indicators.per_capita_income = detail::number_property(props, "per_capita_income", file, where);
            if (t.indicators.per_capita_income < 0.0) {
                throw ValidationError(ValidationError::Kind::schema, file, where, "per_capita_income", "negative income");
            }
            const std::pair<const char*, double*> proportions[] = {
                {"p_minority", &t.indicators.p_minority},
                {"p_poverty", &t.indicators.p_poverty},
                {"p_unemployed", &t.indicators.p_unemployed},
                {"p_no_diploma", &t.indicators.p_no_diploma}};
            for (const auto& [name, dst] : proportions) {
                *dst = detail::number_property(props, name, file, where);
                if (*dst < 0.0 || *dst > 1.0) {
                    throw ValidationError(ValidationError::Kind::proportion_out_of_range, file, where, name,
                                          "proportion outside [0, 1]");
                }
            }
            if (!f.contains("geometry") || !f["geometry"].is_object()) {
                throw ValidationError(ValidationError::Kind::schema, file, where, "geometry", "missing geometry");
            }
            const auto& geom = f["geometry"];
            const std::string type = geom.value("type", "");
            if (!geom.contains("coordinates")) {
                throw ValidationError(ValidationError::Kind::schema, file, where, "geometry", "missing coordinates");
            }
            if (type == "Polygon") {
                t.geometry.parts.push_back(detail::parse_polygon(geom["coordinates"], file, where));
            } else if (type == "MultiPolygon" && geom["coordinates"].is_array()) {
                for (const auto& poly : geom["coordinates"]) {
                    t.geometry.parts.push_back(detail::parse_polygon(poly, file, where));
                }
            } else {
                throw ValidationError(ValidationError::Kind::schema, file, where, "geometry",
                                      "geometry must be Polygon or MultiPolygon");
            }
            detail::validate_tract_geometry(t.geometry, file, where);
            if (!geoids.insert(t.geoid).second) {
                throw ValidationError(ValidationError::Kind::duplicate_id, file, where, "GEOID", "duplicate GEOID");
            }
            out.push_back(std::move(t));
        } catch (const nlohmann::json::exception& e) {
            detail::raise_or_collect(sink, ValidationError(ValidationError::Kind::schema, file, where, "", e.what()));
        } catch (ValidationError& e) {
            detail::raise_or_collect(sink, std::move(e));
        }
    }
    return out;
}

// Writers emit full-precision values so that reading them back reproduces
// the parsed data exactly.

inline void write_facilities(const std::filesystem::path& path, const std::vector<Facility>& facilities) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << "id,name,kind,lon,lat\n";
    for (const Facility& f : facilities) {
        out << detail::csv_escape(f.id) << ',' << detail::csv_escape(f.name) << ',' << to_string(f.kind) << ','
            << detail::exact_number(f.location.lon) << ',' << detail::exact_number(f.location.lat) << '\n';
    }
}

inline void write_flood_scenario(const std::filesystem::path& path, const FloodScenario& scenario) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << "lon,lat,depth_m\n";
    for (const FloodPoint& p : scenario.points) {
        out << detail::exact_number(p.location.lon) << ',' << detail::exact_number(p.location.lat) << ','
            << detail::exact_number(p.depth_m) << '\n';
    }
}

inline nlohmann::json geo_multipolygon_json(const GeoMultiPolygon& g) {
    auto ring_json = [](const GeoRing& r) {
        nlohmann::json a = nlohmann::json::array();
        for (const GeoPoint& p : r) a.push_back({p.lon, p.lat});
        if (!r.empty()) a.push_back({r.front().lon, r.front().lat});
        return a;
    };
    nlohmann::json polys = nlohmann::json::array();
    for (const GeoPolygon& p : g.parts) {
        nlohmann::json rings = nlohmann::json::array();
        rings.push_back(ring_json(p.exterior));
        for (const GeoRing& h : p.holes) rings.push_back(ring_json(h));
        polys.push_back(std::move(rings));
    }
    return {{"type", "MultiPolygon"}, {"coordinates", std::move(polys)}};
}

inline void write_tracts(const std::filesystem::path& path, const std::vector<Tract>& tracts) {
    nlohmann::json features = nlohmann::json::array();
    for (const Tract& t : tracts) {
        features.push_back({{"type", "Feature"},
                            {"properties",
                             {{"GEOID", t.geoid},
                              {"total_pop", t.total_pop},
                              {"per_capita_income", t.indicators.per_capita_income},
                              {"p_minority", t.indicators.p_minority},
                              {"p_poverty", t.indicators.p_poverty},
                              {"p_unemployed", t.indicators.p_unemployed},
                              {"p_no_diploma", t.indicators.p_no_diploma}}},
                            {"geometry", geo_multipolygon_json(t.geometry)}});
    }
    const nlohmann::json doc = {{"type", "FeatureCollection"}, {"features", std::move(features)}};
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << doc.dump() << '\n';
}

}  // namespace flood_exposure

#endif
