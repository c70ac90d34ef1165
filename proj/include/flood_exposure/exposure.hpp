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

#ifndef FLOOD_EXPOSURE_EXPOSURE_HPP
#define FLOOD_EXPOSURE_EXPOSURE_HPP

#include <algorithm>
#include <atomic>
#include <exception>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "flood_exposure/boolean.hpp"
#include "flood_exposure/errors.hpp"
#include "flood_exposure/geometry.hpp"
#include "flood_exposure/ingest.hpp"
#include "flood_exposure/projection.hpp"
#include "flood_exposure/spatial_index.hpp"

namespace flood_exposure {

struct ExposureConfig {
    double flood_buffer = 0.1 * kMeters_per_mile;
    std::vector<double> radii = {1.0 * kMeters_per_mile, 3.0 * kMeters_per_mile, 5.0 * kMeters_per_mile};
    int disc_segments = 64;
    bool disc_area_correction = true;
    SnapGrid snap{};
    // A tract is "within n miles" when more than this fraction of its area
    // lies in the n-mile zone.
    double inclusion_threshold = 0.0;

    void validate() const {
        auto fail = [](const std::string& what) {
            throw ValidationError(ValidationError::Kind::bad_argument, "", "", "", what);
        };
        if (!(flood_buffer > 0.0) || !std::isfinite(flood_buffer)) fail("flood_buffer must be positive");
        if (radii.empty()) fail("radii must not be empty");
        for (std::size_t i = 0; i < radii.size(); ++i) {
            if (!(radii[i] > 0.0) || !std::isfinite(radii[i])) fail("radii must be positive");
            if (i > 0 && !(radii[i] > radii[i - 1])) fail("radii must be strictly increasing");
        }
        if (disc_segments < 3) fail("disc_segments must be at least 3");
        if (!(snap.resolution > 0.0) || !std::isfinite(snap.resolution)) fail("snap resolution must be positive");
        if (!(inclusion_threshold >= 0.0 && inclusion_threshold < 1.0)) fail("inclusion_threshold must be in [0, 1)");
    }
};

struct FloodedFacility {
    Facility facility;
    double min_distance_to_flood = 0.0;  // meters, geodesic

    friend bool operator==(const FloodedFacility&, const FloodedFacility&) = default;
};

struct RadiusExposure {
    double area_in_zone = 0.0;    // m^2
    double threatened_pop = 0.0;  // persons
    double ratio = 0.0;           // threatened / total

    friend bool operator==(const RadiusExposure&, const RadiusExposure&) = default;
};

struct TractExposure {
    std::string geoid;
    double total_pop = 0.0;
    double tract_area = 0.0;  // m^2
    std::vector<RadiusExposure> by_radius;

    friend bool operator==(const TractExposure&, const TractExposure&) = default;
};

struct ScenarioResult {
    std::string label;
    std::vector<double> radii;
    std::vector<FloodedFacility> flooded;
    std::vector<MultiPolygon> zones;       // one per radius, projected plane
    std::vector<TractExposure> exposures;  // sorted by geoid
    std::map<FacilityKind, std::size_t> counts_by_kind;
    ProjectionSpec projection;

    double total_threatened(std::size_t radius_index) const {
        double s = 0.0;
        for (const TractExposure& e : exposures) s += e.by_radius.at(radius_index).threatened_pop;
        return s;
    }
};

// A tract resolved onto the projected plane and the snap grid.
struct PlanarTract {
    std::string geoid;
    MultiPolygon geometry;
    double total_pop = 0.0;
    double area = 0.0;  // exact area of the snapped geometry
    Rect bounds;
};

inline PlanarTract make_planar_tract(std::string geoid, const MultiPolygon& plane_geometry, double total_pop,
                                     const SnapGrid& grid) {
    PlanarTract t;
    t.geoid = std::move(geoid);
    t.geometry = snap_to_grid(plane_geometry, grid);
    t.total_pop = total_pop;
    t.area = snapped_area(t.geometry, grid);
    if (!(t.area > 0.0)) {
        throw ValidationError(ValidationError::Kind::invalid_geometry, "", "GEOID " + t.geoid, "geometry",
                              "tract has zero area on the snap grid");
    }
    t.bounds = bounds(t.geometry);
    return t;
}

inline MultiPolygon project_geometry(const Projection& proj, const GeoMultiPolygon& g) {
    auto ring = [&](const GeoRing& r) {
        Ring out;
        out.vertices.reserve(r.size());
        for (const GeoPoint& p : r) out.vertices.push_back(proj.project(p));
        return out;
    };
    MultiPolygon m;
    m.parts.reserve(g.parts.size());
    for (const GeoPolygon& p : g.parts) {
        Polygon q;
        q.exterior = ring(p.exterior);
        for (const GeoRing& h : p.holes) q.holes.push_back(ring(h));
        m.parts.push_back(std::move(q));
    }
    return m;
}

inline PlanarTract make_planar_tract(const Tract& tract, const Projection& proj, const SnapGrid& grid) {
    return make_planar_tract(tract.geoid, project_geometry(proj, tract.geometry), tract.total_pop, grid);
}

/// LAEA centered on the middle of the tracts' geographic bounding box.
inline ProjectionSpec default_projection(const std::vector<Tract>& tracts) {
    double lo_lon = INFINITY, lo_lat = INFINITY, hi_lon = -INFINITY, hi_lat = -INFINITY;
    for (const Tract& t : tracts) {
        for (const GeoPolygon& p : t.geometry.parts) {
            for (const GeoPoint& q : p.exterior) {
                lo_lon = std::min(lo_lon, q.lon);
                hi_lon = std::max(hi_lon, q.lon);
                lo_lat = std::min(lo_lat, q.lat);
                hi_lat = std::max(hi_lat, q.lat);
            }
        }
    }
    ProjectionSpec spec;
    spec.kind = ProjectionKind::laea;
    if (std::isfinite(lo_lon)) spec.center = {0.5 * (lo_lon + hi_lon), 0.5 * (lo_lat + hi_lat)};
    return spec;
}

namespace detail {

// Planar search radius that is certain to contain every geodesic neighbour
// within `d`: LAEA scale error stays far below 5% within a few thousand km.
inline double planar_search_radius(double d) { return d * 1.05 + 1.0; }

inline unsigned resolve_workers(unsigned requested) {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

template <typename Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = next++; i < n; i = next++) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
                next = n;
            }
        });
    }
    for (std::thread& t : pool) t.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace detail

/// Facilities within `cfg.flood_buffer` (geodesic, inclusive) of any flood
/// point, sorted by id. Candidates come from an R-tree over the projected
/// flood points; the geodesic distance decides.
inline std::vector<FloodedFacility> detect_flooded(std::span<const Facility> facilities, const FloodScenario& scenario,
                                                   const ExposureConfig& cfg, const Projection& proj) {
    std::vector<FloodedFacility> out;
    if (scenario.points.empty() || facilities.empty()) return out;
    std::vector<IndexedRect> items;
    items.reserve(scenario.points.size());
    for (std::size_t i = 0; i < scenario.points.size(); ++i) {
        const PlanePoint p = proj.project(scenario.points[i].location);
        items.push_back({{p.x, p.y, p.x, p.y}, i});
    }
    const RTree index = RTree::bulk_build(items);
    const double search = detail::planar_search_radius(cfg.flood_buffer);
    for (const Facility& f : facilities) {
        const PlanePoint p = proj.project(f.location);
        double best = INFINITY;
        for (std::size_t id : index.within_distance(p, search)) {
            best = std::min(best, geodesic_distance(f.location, scenario.points[id].location));
        }
        if (best <= cfg.flood_buffer) out.push_back({f, best});
    }
    std::sort(out.begin(), out.end(),
              [](const FloodedFacility& a, const FloodedFacility& b) { return a.facility.id < b.facility.id; });
    return out;
}

inline std::vector<FloodedFacility> detect_flooded(std::span<const Facility> facilities, const FloodScenario& scenario,
                                                   const ExposureConfig& cfg) {
    double lo_lon = INFINITY, lo_lat = INFINITY, hi_lon = -INFINITY, hi_lat = -INFINITY;
    for (const FloodPoint& p : scenario.points) {
        lo_lon = std::min(lo_lon, p.location.lon);
        hi_lon = std::max(hi_lon, p.location.lon);
        lo_lat = std::min(lo_lat, p.location.lat);
        hi_lat = std::max(hi_lat, p.location.lat);
    }
    ProjectionSpec spec;
    if (std::isfinite(lo_lon)) spec.center = {0.5 * (lo_lon + hi_lon), 0.5 * (lo_lat + hi_lat)};
    return detect_flooded(facilities, scenario, cfg, Projection(spec));
}

namespace detail {

// Vertex offsets of the disc on the snap grid. Rounding the offsets moves the
// area by ~1e-7 relative for a 1-mile 64-gon; with area correction on, a few
// vertices are then nudged by one grid step (one or two per round, chosen to
// best cancel the remaining error) until the exact snapped area is within
// 5e-11 relative of pi r^2 or no move helps.
inline std::vector<GridPoint> disc_offsets(double radius, const ExposureConfig& cfg) {
    const Polygon unit = buffer_disc({0.0, 0.0}, radius, cfg.disc_segments, cfg.disc_area_correction);
    std::vector<GridPoint> pts;
    pts.reserve(unit.exterior.vertices.size());
    const SnapGrid unanchored{cfg.snap.resolution};
    for (const PlanePoint& v : unit.exterior.vertices) pts.push_back(snap(v, unanchored));
    const double res = cfg.snap.resolution;
    if (!cfg.disc_area_correction || radius < 1000.0 * res) return pts;

    const std::size_t n = pts.size();
    const double target = 2.0 * std::numbers::pi * radius * radius / (res * res);  // twice-area, grid units
    double diff = target - static_cast<double>(twice_area(pts));
    const double tol = 5e-11 * target;
    std::vector<bool> moved(n, false);

    struct Move {
        std::size_t i;
        std::int64_t dx, dy;
        double delta;
    };
    while (std::abs(diff) > tol) {
        std::vector<Move> moves;
        for (std::size_t i = 0; i < n; ++i) {
            if (moved[i]) continue;
            const GridPoint& prev = pts[(i + n - 1) % n];
            const GridPoint& next = pts[(i + 1) % n];
            const double gx = static_cast<double>(next.y - prev.y);
            const double gy = static_cast<double>(prev.x - next.x);
            moves.push_back({i, 1, 0, gx});
            moves.push_back({i, -1, 0, -gx});
            moves.push_back({i, 0, 1, gy});
            moves.push_back({i, 0, -1, -gy});
        }
        double best = std::abs(diff);
        std::size_t bi = moves.size(), bj = moves.size();
        for (std::size_t a = 0; a < moves.size(); ++a) {
            const double r1 = std::abs(diff - moves[a].delta);
            if (r1 < best) best = r1, bi = a, bj = moves.size();
            for (std::size_t b = a + 1; b < moves.size(); ++b) {
                // Neighbouring moves interact; keep pairs independent.
                const std::size_t gap = moves[a].i > moves[b].i ? moves[a].i - moves[b].i : moves[b].i - moves[a].i;
                if (gap <= 1 || gap == n - 1) continue;
                const double r2 = std::abs(diff - moves[a].delta - moves[b].delta);
                if (r2 < best) best = r2, bi = a, bj = b;
            }
        }
        if (bi == moves.size()) break;
        for (std::size_t k : {bi, bj}) {
            if (k == moves.size()) continue;
            const Move& m = moves[k];
            pts[m.i].x += m.dx;
            pts[m.i].y += m.dy;
            moved[m.i] = true;
            diff -= m.delta;
        }
    }
    return pts;
}

inline Polygon place_disc(const GridPoint& c, std::span<const GridPoint> offsets, const SnapGrid& grid) {
    Polygon disc;
    disc.exterior.vertices.reserve(offsets.size());
    for (const GridPoint& o : offsets) disc.exterior.vertices.push_back(unsnap({c.x + o.x, c.y + o.y}, grid));
    return disc;
}

}  // namespace detail

/// Disc polygon whose vertices are the snapped center plus snapped offsets,
/// so translating the center by whole grid cells translates the disc exactly.
inline Polygon grid_disc(const PlanePoint& center, double radius, const ExposureConfig& cfg) {
    const auto offsets = detail::disc_offsets(radius, cfg);
    return detail::place_disc(detail::snap(center, cfg.snap), offsets, cfg.snap);
}

/// Union of the discs of `radius` around each center.
inline MultiPolygon build_zone(std::span<const PlanePoint> centers, double radius, const ExposureConfig& cfg) {
    if (centers.empty()) return {};
    const auto offsets = detail::disc_offsets(radius, cfg);
    std::vector<Polygon> discs;
    discs.reserve(centers.size());
    for (const PlanePoint& c : centers) discs.push_back(detail::place_disc(detail::snap(c, cfg.snap), offsets, cfg.snap));
    return union_all(discs, cfg.snap);
}

inline MultiPolygon build_zone(std::span<const FloodedFacility> flooded, double radius, const ExposureConfig& cfg,
                               const Projection& proj) {
    std::vector<PlanePoint> centers;
    centers.reserve(flooded.size());
    for (const FloodedFacility& f : flooded) centers.push_back(proj.project(f.facility.location));
    return build_zone(centers, radius, cfg);
}

/// Areal apportionment: the tract's population times the fraction of its
/// area inside the zone.
inline RadiusExposure apportion(const PlanarTract& tract, const MultiPolygon& zone, const ExposureConfig& cfg) {
    RadiusExposure r;
    if (zone.empty() || !bounds(zone).intersects(tract.bounds)) return r;
    const MultiPolygon clipped = boolean_op(tract.geometry, zone, BoolOp::intersection, cfg.snap);
    // Rounded crossing points can nudge the clipped area past the tract's own.
    r.area_in_zone = std::clamp(snapped_area(clipped, cfg.snap), 0.0, tract.area);
    r.threatened_pop = r.area_in_zone == tract.area ? tract.total_pop : tract.total_pop * (r.area_in_zone / tract.area);
    r.ratio = tract.total_pop > 0.0 ? r.threatened_pop / tract.total_pop : 0.0;
    return r;
}

struct ZoneSet {
    std::vector<MultiPolygon> zones;
    std::vector<std::vector<Rect>> part_bounds;
};

inline ZoneSet build_zones(std::span<const PlanePoint> centers, const ExposureConfig& cfg) {
    ZoneSet zs;
    for (double r : cfg.radii) {
        zs.zones.push_back(build_zone(centers, r, cfg));
        std::vector<Rect> pb;
        for (const Polygon& p : zs.zones.back().parts) pb.push_back(bounds(p.exterior));
        zs.part_bounds.push_back(std::move(pb));
    }
    return zs;
}

/// Apportions every tract against every zone. Only tracts whose bounds touch
/// a zone part's bounds are clipped. Output order follows `tracts`.
inline std::vector<TractExposure> apportion_all(std::span<const PlanarTract> tracts, const ZoneSet& zs,
                                                const ExposureConfig& cfg, unsigned workers = 1) {
    std::vector<IndexedRect> items;
    items.reserve(tracts.size());
    for (std::size_t i = 0; i < tracts.size(); ++i) items.push_back({tracts[i].bounds, i});
    const RTree index = RTree::bulk_build(items);

    const std::size_t nr = zs.zones.size();
    std::vector<std::vector<bool>> candidate(nr, std::vector<bool>(tracts.size(), false));
    for (std::size_t r = 0; r < nr; ++r) {
        for (const Rect& b : zs.part_bounds[r]) {
            for (std::size_t id : index.query_range(b)) candidate[r][id] = true;
        }
    }

    std::vector<TractExposure> out(tracts.size());
    detail::parallel_for(tracts.size(), detail::resolve_workers(workers), [&](std::size_t i) {
        const PlanarTract& t = tracts[i];
        TractExposure& e = out[i];
        e.geoid = t.geoid;
        e.total_pop = t.total_pop;
        e.tract_area = t.area;
        e.by_radius.assign(nr, RadiusExposure{});
        for (std::size_t r = 0; r < nr; ++r) {
            if (candidate[r][i]) e.by_radius[r] = apportion(t, zs.zones[r], cfg);
        }
    });
    return out;
}

// A tract already on the projected plane, before snapping.
struct PlaneTract {
    std::string geoid;
    MultiPolygon geometry;
    double total_pop = 0.0;
};

struct PlanarRun {
    std::vector<MultiPolygon> zones;       // one per radius
    std::vector<TractExposure> exposures;  // same order as the input tracts
    SnapGrid grid;
};

/// The snap grid used for a planar run: `cfg.snap` re-anchored at the lower
/// left corner of the tracts. Translating every input translates every
/// snapped vertex by the same amount, and scenarios over the same tracts
/// share one grid whatever their facilities.
inline SnapGrid anchored_grid(std::span<const PlaneTract> tracts, const SnapGrid& base) {
    double x = INFINITY, y = INFINITY;
    auto take = [&](const PlanePoint& p) {
        x = std::min(x, p.x);
        y = std::min(y, p.y);
    };
    for (const PlaneTract& t : tracts) {
        for (const Polygon& poly : t.geometry.parts) {
            for (const PlanePoint& v : poly.exterior.vertices) take(v);
        }
    }
    SnapGrid g = base;
    g.origin = std::isfinite(x) && std::isfinite(y) ? PlanePoint{x, y} : PlanePoint{};
    return g;
}

/// Zones around `centers` and the apportioned exposure of each tract, all on
/// the anchored grid.
inline PlanarRun expose_planar(std::span<const PlaneTract> tracts, std::span<const PlanePoint> centers,
                               const ExposureConfig& cfg, unsigned workers = 1) {
    ExposureConfig local = cfg;
    local.snap = anchored_grid(tracts, cfg.snap);
    std::vector<PlanarTract> planar(tracts.size());
    detail::parallel_for(tracts.size(), detail::resolve_workers(workers), [&](std::size_t i) {
        planar[i] = make_planar_tract(tracts[i].geoid, tracts[i].geometry, tracts[i].total_pop, local.snap);
    });
    ZoneSet zs = build_zones(centers, local);
    PlanarRun run;
    run.exposures = apportion_all(planar, zs, local, workers);
    run.zones = std::move(zs.zones);
    run.grid = local.snap;
    return run;
}

/// Full pipeline for one flood scenario: detection, zones per radius and
/// per-tract apportionment. Exposures are sorted by GEOID.
inline ScenarioResult run_scenario(std::span<const Facility> facilities, std::span<const Tract> tracts,
                                   const FloodScenario& scenario, const ExposureConfig& cfg,
                                   const ProjectionSpec& projection, unsigned workers = 1) {
    cfg.validate();
    const Projection proj(projection);
    ScenarioResult res;
    res.label = scenario.label;
    res.radii = cfg.radii;
    res.projection = projection;
    res.flooded = detect_flooded(facilities, scenario, cfg, proj);
    for (FacilityKind k : kAllFacilityKinds) res.counts_by_kind[k] = 0;
    for (const FloodedFacility& f : res.flooded) ++res.counts_by_kind[f.facility.kind];

    std::vector<PlanePoint> centers;
    centers.reserve(res.flooded.size());
    for (const FloodedFacility& f : res.flooded) centers.push_back(proj.project(f.facility.location));

    std::vector<PlaneTract> plane(tracts.size());
    detail::parallel_for(tracts.size(), detail::resolve_workers(workers), [&](std::size_t i) {
        plane[i] = {tracts[i].geoid, project_geometry(proj, tracts[i].geometry), tracts[i].total_pop};
    });
    std::sort(plane.begin(), plane.end(), [](const PlaneTract& a, const PlaneTract& b) { return a.geoid < b.geoid; });

    PlanarRun run = expose_planar(plane, centers, cfg, workers);
    res.exposures = std::move(run.exposures);
    res.zones = std::move(run.zones);
    return res;
}

inline ScenarioResult run_scenario(const std::vector<Facility>& facilities, const std::vector<Tract>& tracts,
                                   const FloodScenario& scenario, const ExposureConfig& cfg, unsigned workers = 1) {
    return run_scenario(std::span<const Facility>(facilities), std::span<const Tract>(tracts), scenario, cfg,
                        default_projection(tracts), workers);
}

}  // namespace flood_exposure

#endif
