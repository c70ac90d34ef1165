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

#ifndef FLOOD_EXPOSURE_EQUITY_HPP
#define FLOOD_EXPOSURE_EQUITY_HPP

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "flood_exposure/errors.hpp"
#include "flood_exposure/exposure.hpp"
#include "flood_exposure/ingest.hpp"

namespace flood_exposure {

inline constexpr std::size_t kIndicatorCount = 5;

inline constexpr std::array<const char*, kIndicatorCount> kIndicatorNames = {
    "per_capita_income", "p_minority", "p_poverty", "p_unemployed", "p_no_diploma"};

inline std::array<double, kIndicatorCount> as_array(const IndicatorVector& v) {
    return {v.per_capita_income, v.p_minority, v.p_poverty, v.p_unemployed, v.p_no_diploma};
}

inline IndicatorVector from_array(const std::array<double, kIndicatorCount>& a) {
    return {a[0], a[1], a[2], a[3], a[4]};
}

enum class Weighting { unweighted, population };

namespace detail {

// Mean of the selected tracts' indicator vectors; nullopt when none selected
// (or, for population weighting, when the selected population is zero).
inline std::optional<IndicatorVector> mean_indicators(std::span<const Tract* const> selected, Weighting w) {
    std::array<double, kIndicatorCount> acc{};
    double weight_sum = 0.0;
    for (const Tract* t : selected) {
        const double wt = w == Weighting::population ? t->total_pop : 1.0;
        const auto v = as_array(t->indicators);
        for (std::size_t k = 0; k < kIndicatorCount; ++k) acc[k] += wt * v[k];
        weight_sum += wt;
    }
    if (selected.empty() || !(weight_sum > 0.0)) return std::nullopt;
    for (double& a : acc) a /= weight_sum;
    return from_array(acc);
}

inline std::unordered_map<std::string, const Tract*> index_by_geoid(std::span<const Tract> tracts) {
    std::unordered_map<std::string, const Tract*> by_id;
    by_id.reserve(tracts.size());
    for (const Tract& t : tracts) by_id.emplace(t.geoid, &t);
    return by_id;
}

}  // namespace detail

// One column of the disparity table: all tracts, or the tracts within one
// radius of the flooded facilities.
struct DisparityColumn {
    std::string name;                 // "ALL" or "WITHIN_<n>MI"
    std::optional<double> radius;     // meters; empty for ALL
    std::size_t tract_count = 0;
    std::optional<IndicatorVector> mean;  // absent when no tract qualifies
};

struct DisparitySummary {
    std::vector<DisparityColumn> columns;
    double threshold = 0.0;
    Weighting weighting = Weighting::unweighted;
};

inline std::string radius_column_name(double radius_m) {
    const double miles = radius_m / kMeters_per_mile;
    const double rounded = std::round(miles);
    if (std::abs(miles - rounded) < 1e-9) return "WITHIN_" + std::to_string(static_cast<long long>(rounded)) + "MI";
    return "WITHIN_" + std::to_string(static_cast<long long>(std::llround(radius_m))) + "M";
}

/// Table of indicator means over all tracts and over the tracts whose zone
/// overlap fraction exceeds `threshold` at each radius.
inline DisparitySummary disparity_summary(std::span<const Tract> tracts, const ScenarioResult& result,
                                          double threshold = 0.0, Weighting weighting = Weighting::unweighted) {
    const auto by_id = detail::index_by_geoid(tracts);
    if (result.exposures.size() != tracts.size()) {
        throw ValidationError(ValidationError::Kind::tract_set_mismatch, "scenario result does not cover every tract");
    }
    DisparitySummary s;
    s.threshold = threshold;
    s.weighting = weighting;

    std::vector<const Tract*> all;
    all.reserve(tracts.size());
    for (const Tract& t : tracts) all.push_back(&t);
    s.columns.push_back({"ALL", std::nullopt, all.size(), detail::mean_indicators(all, weighting)});

    for (std::size_t r = 0; r < result.radii.size(); ++r) {
        std::vector<const Tract*> members;
        for (const TractExposure& e : result.exposures) {
            auto it = by_id.find(e.geoid);
            if (it == by_id.end()) {
                throw ValidationError(ValidationError::Kind::tract_set_mismatch, "", "GEOID " + e.geoid, "",
                                      "exposure for unknown tract");
            }
            if (e.tract_area > 0.0 && e.by_radius.at(r).area_in_zone / e.tract_area > threshold) {
                members.push_back(it->second);
            }
        }
        s.columns.push_back({radius_column_name(result.radii[r]), result.radii[r], members.size(),
                             detail::mean_indicators(members, weighting)});
    }
    return s;
}

/// Min-max normalization to [0, 1]; a constant input maps to 0.5 everywhere.
inline std::vector<double> min_max_normalize(std::span<const double> values) {
    std::vector<double> out(values.size(), 0.5);
    if (values.empty()) return out;
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double span = *hi - *lo;
    if (!(span > 0.0)) return out;
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = std::clamp((values[i] - *lo) / span, 0.0, 1.0);
    return out;
}

struct RadarTable {
    std::vector<std::string> columns;                      // present columns only
    std::array<std::vector<double>, kIndicatorCount> rows;  // rows[indicator][column]
};

/// Per-indicator min-max normalization across the present columns. Income is
/// normalized like the proportions, without inversion.
inline RadarTable radar_normalize(const DisparitySummary& summary) {
    RadarTable t;
    std::vector<std::array<double, kIndicatorCount>> cols;
    for (const DisparityColumn& c : summary.columns) {
        if (!c.mean) continue;
        t.columns.push_back(c.name);
        cols.push_back(as_array(*c.mean));
    }
    for (std::size_t k = 0; k < kIndicatorCount; ++k) {
        std::vector<double> v;
        v.reserve(cols.size());
        for (const auto& c : cols) v.push_back(c[k]);
        t.rows[k] = min_max_normalize(v);
    }
    return t;
}

struct RadiusDelta {
    double increase = 0.0;        // persons, signed
    double increase_ratio = 0.0;  // increase / total_pop

    friend bool operator==(const RadiusDelta&, const RadiusDelta&) = default;
};

struct TractDelta {
    std::string geoid;
    double total_pop = 0.0;
    std::vector<RadiusDelta> by_radius;

    friend bool operator==(const TractDelta&, const TractDelta&) = default;
};

struct RadiusTotals {
    double radius = 0.0;
    double current = 0.0;
    double future = 0.0;
    double increase = 0.0;          // sum of per-tract increases
    std::optional<double> percent;  // 100 * increase / current; absent when current is 0
};

struct ScenarioDelta {
    std::string current_label;
    std::string future_label;
    std::vector<TractDelta> tracts;  // sorted by geoid
    std::vector<RadiusTotals> totals;
};

/// Per-tract change in threatened population from `current` to `future`.
inline ScenarioDelta scenario_delta(const ScenarioResult& current, const ScenarioResult& future) {
    if (current.radii != future.radii) {
        throw ValidationError(ValidationError::Kind::tract_set_mismatch, "scenario radii differ");
    }
    if (current.exposures.size() != future.exposures.size()) {
        throw ValidationError(ValidationError::Kind::tract_set_mismatch, "scenario tract sets differ in size");
    }
    ScenarioDelta d;
    d.current_label = current.label;
    d.future_label = future.label;
    const std::size_t nr = current.radii.size();
    d.totals.resize(nr);
    for (std::size_t r = 0; r < nr; ++r) {
        d.totals[r].radius = current.radii[r];
        d.totals[r].current = current.total_threatened(r);
        d.totals[r].future = future.total_threatened(r);
    }
    d.tracts.reserve(current.exposures.size());
    for (std::size_t i = 0; i < current.exposures.size(); ++i) {
        const TractExposure& a = current.exposures[i];
        const TractExposure& b = future.exposures[i];
        if (a.geoid != b.geoid) {
            throw ValidationError(ValidationError::Kind::tract_set_mismatch, "", "GEOID " + a.geoid, "",
                                  "tract missing from the other scenario");
        }
        TractDelta td;
        td.geoid = a.geoid;
        td.total_pop = a.total_pop;
        td.by_radius.resize(nr);
        for (std::size_t r = 0; r < nr; ++r) {
            RadiusDelta& rd = td.by_radius[r];
            rd.increase = b.by_radius.at(r).threatened_pop - a.by_radius.at(r).threatened_pop;
            rd.increase_ratio = a.total_pop > 0.0 ? rd.increase / a.total_pop : 0.0;
            d.totals[r].increase += rd.increase;
        }
        d.tracts.push_back(std::move(td));
    }
    for (RadiusTotals& t : d.totals) {
        if (t.current > 0.0) t.percent = 100.0 * t.increase / t.current;
    }
    return d;
}

/// Tracts whose threatened population grew at `radius_index`.
inline std::vector<const Tract*> increased_tracts(std::span<const Tract> tracts, const ScenarioDelta& delta,
                                                  std::size_t radius_index) {
    const auto by_id = detail::index_by_geoid(tracts);
    std::vector<const Tract*> out;
    for (const TractDelta& td : delta.tracts) {
        if (td.by_radius.at(radius_index).increase > 0.0) {
            auto it = by_id.find(td.geoid);
            if (it == by_id.end()) {
                throw ValidationError(ValidationError::Kind::tract_set_mismatch, "", "GEOID " + td.geoid, "",
                                      "delta for unknown tract");
            }
            out.push_back(it->second);
        }
    }
    return out;
}

/// Mean indicators over the tracts with a positive increase at the radius.
inline IndicatorVector increase_profile(std::span<const Tract> tracts, const ScenarioDelta& delta,
                                        std::size_t radius_index, Weighting weighting = Weighting::unweighted) {
    const auto selected = increased_tracts(tracts, delta, radius_index);
    const auto mean = detail::mean_indicators(selected, weighting);
    if (!mean) {
        throw ValidationError(ValidationError::Kind::empty_selection, "no tract has an increase at this radius");
    }
    return *mean;
}

struct Histogram {
    double lo = 0.0;
    double hi = 1.0;
    std::vector<std::size_t> counts;
};

// Equal-width histogram over [0, 1]; 1.0 falls in the last bin.
inline Histogram proportion_histogram(std::span<const double> values, std::size_t bins = 10) {
    Histogram h;
    h.counts.assign(bins, 0);
    for (double v : values) {
        auto b = static_cast<std::size_t>(std::clamp(v, 0.0, 1.0) * static_cast<double>(bins));
        ++h.counts[std::min(b, bins - 1)];
    }
    return h;
}

}  // namespace flood_exposure

#endif
