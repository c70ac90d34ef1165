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

#ifndef FLOOD_EXPOSURE_GEOMETRY_HPP
#define FLOOD_EXPOSURE_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "flood_exposure/errors.hpp"
#include "flood_exposure/projection.hpp"

namespace flood_exposure {

// A closed ring. The closing vertex is implicit and must not be repeated.
// Exteriors run counterclockwise, holes clockwise.
struct Ring {
    std::vector<PlanePoint> vertices;

    friend bool operator==(const Ring&, const Ring&) = default;
};

struct Polygon {
    Ring exterior;
    std::vector<Ring> holes;

    friend bool operator==(const Polygon&, const Polygon&) = default;
};

struct MultiPolygon {
    std::vector<Polygon> parts;

    bool empty() const noexcept { return parts.empty(); }

    friend bool operator==(const MultiPolygon&, const MultiPolygon&) = default;
};

// Coordinate quantum used by the boolean kernel. Grid points are
// origin + k * resolution.
struct SnapGrid {
    double resolution = 0.001;  // meters
    PlanePoint origin{};
};

struct Rect {
    double min_x = 0.0;
    double min_y = 0.0;
    double max_x = 0.0;
    double max_y = 0.0;

    bool intersects(const Rect& o) const noexcept {
        return min_x <= o.max_x && o.min_x <= max_x && min_y <= o.max_y && o.min_y <= max_y;
    }
    bool contains(const PlanePoint& p) const noexcept {
        return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
    }
    Rect expanded(double d) const noexcept { return {min_x - d, min_y - d, max_x + d, max_y + d}; }

    friend bool operator==(const Rect&, const Rect&) = default;
};

inline std::size_t distinct_vertex_count(const Ring& r) {
    std::vector<PlanePoint> pts = r.vertices;
    std::sort(pts.begin(), pts.end(), [](const PlanePoint& a, const PlanePoint& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    return static_cast<std::size_t>(std::unique(pts.begin(), pts.end()) - pts.begin());
}

/// Signed shoelace area; positive for counterclockwise rings.
inline double ring_area(const Ring& r) {
    if (distinct_vertex_count(r) < 3) {
        throw GeometryError(GeometryError::Kind::degenerate_ring, "ring has fewer than 3 distinct vertices");
    }
    // Relative to the first vertex so large projected offsets do not cancel.
    const PlanePoint o = r.vertices.front();
    const std::size_t n = r.vertices.size();
    double twice = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double ax = r.vertices[i].x - o.x;
        const double ay = r.vertices[i].y - o.y;
        const double bx = r.vertices[i + 1].x - o.x;
        const double by = r.vertices[i + 1].y - o.y;
        twice += ax * by - ay * bx;
    }
    return 0.5 * twice;
}

inline double polygon_area(const Polygon& p) {
    double area = std::abs(ring_area(p.exterior));
    for (const Ring& h : p.holes) area -= std::abs(ring_area(h));
    if (area < 0.0) {
        throw GeometryError(GeometryError::Kind::invalid_topology, "polygon holes exceed its exterior area");
    }
    return area;
}

inline double multipolygon_area(const MultiPolygon& m) {
    double area = 0.0;
    for (const Polygon& p : m.parts) area += polygon_area(p);
    return area;
}

inline Rect bounds(const Ring& r) {
    Rect b{INFINITY, INFINITY, -INFINITY, -INFINITY};
    for (const PlanePoint& p : r.vertices) {
        b.min_x = std::min(b.min_x, p.x);
        b.min_y = std::min(b.min_y, p.y);
        b.max_x = std::max(b.max_x, p.x);
        b.max_y = std::max(b.max_y, p.y);
    }
    return b;
}

inline Rect bounds(const MultiPolygon& m) {
    Rect b{INFINITY, INFINITY, -INFINITY, -INFINITY};
    for (const Polygon& p : m.parts) {
        const Rect e = bounds(p.exterior);
        b = {std::min(b.min_x, e.min_x), std::min(b.min_y, e.min_y), std::max(b.max_x, e.max_x),
             std::max(b.max_y, e.max_y)};
    }
    return b;
}

inline std::size_t vertex_count(const MultiPolygon& m) {
    std::size_t n = 0;
    for (const Polygon& p : m.parts) {
        n += p.exterior.vertices.size();
        for (const Ring& h : p.holes) n += h.vertices.size();
    }
    return n;
}

// Rewinds every exterior counterclockwise and every hole clockwise.
inline void normalize_orientation(MultiPolygon& m) {
    for (Polygon& p : m.parts) {
        if (ring_area(p.exterior) < 0.0) std::reverse(p.exterior.vertices.begin(), p.exterior.vertices.end());
        for (Ring& h : p.holes) {
            if (ring_area(h) > 0.0) std::reverse(h.vertices.begin(), h.vertices.end());
        }
    }
}

namespace detail {

template <typename Fn>
void for_each_ring(const MultiPolygon& m, Fn&& fn) {
    for (const Polygon& p : m.parts) {
        fn(p.exterior);
        for (const Ring& h : p.holes) fn(h);
    }
}

inline bool on_segment(const PlanePoint& a, const PlanePoint& b, const PlanePoint& p) {
    const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    if (cross != 0.0) return false;
    return p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x) && p.y >= std::min(a.y, b.y) &&
           p.y <= std::max(a.y, b.y);
}

inline bool on_boundary(const MultiPolygon& m, const PlanePoint& p) {
    bool hit = false;
    for_each_ring(m, [&](const Ring& r) {
        const std::size_t n = r.vertices.size();
        for (std::size_t i = 0; i < n && !hit; ++i) {
            if (on_segment(r.vertices[i], r.vertices[(i + 1) % n], p)) hit = true;
        }
    });
    return hit;
}

}  // namespace detail

/// Even-odd (crossing parity) membership. Boundary points count as inside.
inline bool contains_even_odd(const MultiPolygon& m, const PlanePoint& p) {
    if (detail::on_boundary(m, p)) return true;
    bool inside = false;
    detail::for_each_ring(m, [&](const Ring& r) {
        const std::size_t n = r.vertices.size();
        for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
            const PlanePoint& a = r.vertices[i];
            const PlanePoint& b = r.vertices[j];
            if ((a.y > p.y) != (b.y > p.y)) {
                const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if (p.x < x) inside = !inside;
            }
        }
    });
    return inside;
}

/// Nonzero winding membership. Boundary points count as inside.
inline bool contains_winding(const MultiPolygon& m, const PlanePoint& p) {
    if (detail::on_boundary(m, p)) return true;
    long winding = 0;
    detail::for_each_ring(m, [&](const Ring& r) {
        const std::size_t n = r.vertices.size();
        for (std::size_t i = 0; i < n; ++i) {
            const PlanePoint& a = r.vertices[i];
            const PlanePoint& b = r.vertices[(i + 1) % n];
            const double side = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
            if (a.y <= p.y) {
                if (b.y > p.y && side > 0.0) ++winding;
            } else if (b.y <= p.y && side < 0.0) {
                --winding;
            }
        }
    });
    return winding != 0;
}

inline bool contains(const MultiPolygon& m, const PlanePoint& p) { return contains_winding(m, p); }

/// Vertex-radius scale that makes a regular n-gon's area equal to the disc's.
inline double disc_area_correction(int segments) {
    const double n = static_cast<double>(segments);
    return std::sqrt(2.0 * std::numbers::pi / (n * std::sin(2.0 * std::numbers::pi / n)));
}

/// Regular counterclockwise `segments`-gon approximating the disc. With
/// `area_correction` the polygon's area equals pi r^2.
inline Polygon buffer_disc(const PlanePoint& center, double radius, int segments, bool area_correction = true) {
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw GeometryError(GeometryError::Kind::bad_radius, "disc radius must be positive and finite");
    }
    if (segments < 3) {
        throw GeometryError(GeometryError::Kind::bad_radius, "disc needs at least 3 segments");
    }
    const double rv = area_correction ? radius * disc_area_correction(segments) : radius;
    Polygon disc;
    disc.exterior.vertices.reserve(static_cast<std::size_t>(segments));
    for (int k = 0; k < segments; ++k) {
        const double theta = 2.0 * std::numbers::pi * k / segments;
        disc.exterior.vertices.push_back({center.x + rv * std::cos(theta), center.y + rv * std::sin(theta)});
    }
    return disc;
}

}  // namespace flood_exposure

#endif
