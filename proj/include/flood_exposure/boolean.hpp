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

#ifndef FLOOD_EXPOSURE_BOOLEAN_HPP
#define FLOOD_EXPOSURE_BOOLEAN_HPP

// Boolean operations on multipolygons.
//
// The kernel works on integer coordinates quantized to a SnapGrid and runs in
// three phases:
//
//   1. Noding. Every input edge is split at every point where it meets another
//      edge. Crossing points are rounded to the grid; because rounding can
//      bend a segment across a neighbour, noding repeats until a pass finds no
//      new split point. Afterwards edges meet only at shared endpoints and
//      overlapping edges are identical, so they are merged into one segment
//      carrying the summed winding contribution of each operand.
//   2. Sweep. Segments are swept left to right in lexicographic (x, y) order,
//      which behaves like a sweep line tilted infinitesimally so that vertical
//      segments need no special case. The status holds the active segments
//      ordered bottom to top. A segment's winding numbers below it are those
//      above its predecessor, and above it they change by the segment's own
//      contribution. A segment belongs to the result boundary iff the result
//      predicate differs on its two sides.
//   3. Assembly. Result edges are directed with the result interior on their
//      left and chained into cycles, turning as far left as possible at shared
//      vertices. Cycles are split at repeated vertices so every ring is simple,
//      then counterclockwise rings become shells and clockwise rings become
//      holes of the smallest shell containing them.
//
// All predicates are exact (128-bit integer arithmetic).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "flood_exposure/errors.hpp"
#include "flood_exposure/geometry.hpp"

namespace flood_exposure {

enum class BoolOp { union_, intersection, difference };

namespace detail {

using i128 = __int128;

// Keeps every cross product well inside 128 bits.
inline constexpr std::int64_t kMaxGridCoordinate = std::int64_t{1} << 46;

struct GridPoint {
    std::int64_t x = 0;
    std::int64_t y = 0;

    friend bool operator==(const GridPoint&, const GridPoint&) = default;
    friend bool operator<(const GridPoint& a, const GridPoint& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }
};

struct GridPointHash {
    std::size_t operator()(const GridPoint& p) const noexcept {
        const std::uint64_t h = static_cast<std::uint64_t>(p.x) * 0x9E3779B97F4A7C15ull;
        return static_cast<std::size_t>(h ^ (static_cast<std::uint64_t>(p.y) + 0x632BE59BD9B4E019ull + (h << 6) + (h >> 2)));
    }
};

inline std::int64_t snap_coordinate(double v, double resolution) {
    const double q = std::round(v / resolution);
    if (!std::isfinite(q) || std::abs(q) > static_cast<double>(kMaxGridCoordinate)) {
        throw GeometryError(GeometryError::Kind::out_of_domain, "coordinate outside the snap grid range");
    }
    return static_cast<std::int64_t>(q);
}

inline GridPoint snap(const PlanePoint& p, const SnapGrid& grid) {
    return {snap_coordinate(p.x - grid.origin.x, grid.resolution), snap_coordinate(p.y - grid.origin.y, grid.resolution)};
}

inline PlanePoint unsnap(const GridPoint& p, const SnapGrid& grid) {
    return {grid.origin.x + static_cast<double>(p.x) * grid.resolution,
            grid.origin.y + static_cast<double>(p.y) * grid.resolution};
}

inline int sign(i128 v) { return (v > 0) - (v < 0); }

inline i128 cross(const GridPoint& a, const GridPoint& b, const GridPoint& c) {
    return i128(b.x - a.x) * i128(c.y - a.y) - i128(b.y - a.y) * i128(c.x - a.x);
}

inline int orient(const GridPoint& a, const GridPoint& b, const GridPoint& c) { return sign(cross(a, b, c)); }

// Nearest-integer quotient, ties away from zero.
inline i128 round_div(i128 num, i128 den) {
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const i128 q = num / den;
    const i128 r = num % den;
    if (2 * (r < 0 ? -r : r) >= den) return num < 0 ? q - 1 : q + 1;
    return q;
}

// An undirected segment with lexicographically ordered endpoints and the
// winding contribution of each operand when crossing it from below to above.
struct Segment {
    GridPoint left;
    GridPoint right;
    int wind[2] = {0, 0};
};

inline void add_ring_edges(std::span<const PlanePoint> ring, int operand, const SnapGrid& grid,
                           std::vector<Segment>& out) {
    const std::size_t n = ring.size();
    if (n < 2) return;
    GridPoint first = snap(ring[0], grid);
    GridPoint prev = first;
    for (std::size_t i = 1; i <= n; ++i) {
        const GridPoint cur = i < n ? snap(ring[i], grid) : first;
        if (!(cur == prev)) {
            Segment s;
            if (prev < cur) {
                s.left = prev;
                s.right = cur;
                s.wind[operand] = 1;
            } else {
                s.left = cur;
                s.right = prev;
                s.wind[operand] = -1;
            }
            out.push_back(s);
        }
        prev = cur;
    }
}

inline void add_multipolygon_edges(const MultiPolygon& m, int operand, const SnapGrid& grid,
                                   std::vector<Segment>& out) {
    for (const Polygon& p : m.parts) {
        add_ring_edges(p.exterior.vertices, operand, grid, out);
        for (const Ring& h : p.holes) add_ring_edges(h.vertices, operand, grid, out);
    }
}

inline bool strictly_inside_collinear(const Segment& s, const GridPoint& p) {
    return s.left < p && p < s.right;
}

// Calls `fn(i, j)` for every pair of segments whose bounding boxes overlap.
template <typename Fn>
void for_each_candidate_pair(const std::vector<Segment>& segs, Fn&& fn) {
    std::vector<std::size_t> order(segs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (segs[a].left.x != segs[b].left.x) return segs[a].left.x < segs[b].left.x;
        return a < b;
    });
    std::vector<std::size_t> active;
    for (std::size_t i : order) {
        const Segment& s = segs[i];
        const std::int64_t x0 = s.left.x;
        std::size_t keep = 0;
        for (std::size_t k = 0; k < active.size(); ++k) {
            if (segs[active[k]].right.x >= x0) active[keep++] = active[k];
        }
        active.resize(keep);
        const std::int64_t sy0 = std::min(s.left.y, s.right.y);
        const std::int64_t sy1 = std::max(s.left.y, s.right.y);
        for (std::size_t j : active) {
            const Segment& t = segs[j];
            const std::int64_t ty0 = std::min(t.left.y, t.right.y);
            const std::int64_t ty1 = std::max(t.left.y, t.right.y);
            if (ty0 <= sy1 && sy0 <= ty1) fn(j, i);
        }
        active.push_back(i);
    }
}

enum class Contact { none, endpoint, touch, cross, overlap };

// Classifies how two segments meet and reports the split points each one
// needs. Crossing points are rounded to the grid.
inline Contact classify_pair(const Segment& a, const Segment& b, std::vector<GridPoint>* split_a,
                             std::vector<GridPoint>* split_b) {
    const int o1 = orient(a.left, a.right, b.left);
    const int o2 = orient(a.left, a.right, b.right);
    const int o3 = orient(b.left, b.right, a.left);
    const int o4 = orient(b.left, b.right, a.right);
    if (o1 == 0 && o2 == 0) {
        // Collinear: overlapping iff the lexicographic ranges overlap in more than a point.
        const bool overlap = a.left < b.right && b.left < a.right;
        if (!overlap) return (a.left == b.right || b.left == a.right) ? Contact::endpoint : Contact::none;
        if (split_a) {
            if (strictly_inside_collinear(a, b.left)) split_a->push_back(b.left);
            if (strictly_inside_collinear(a, b.right)) split_a->push_back(b.right);
        }
        if (split_b) {
            if (strictly_inside_collinear(b, a.left)) split_b->push_back(a.left);
            if (strictly_inside_collinear(b, a.right)) split_b->push_back(a.right);
        }
        return Contact::overlap;
    }
    if (o1 * o2 > 0 || o3 * o4 > 0) return Contact::none;
    GridPoint x;
    bool exact = true;
    if (o1 == 0) {
        x = b.left;
    } else if (o2 == 0) {
        x = b.right;
    } else if (o3 == 0) {
        x = a.left;
    } else if (o4 == 0) {
        x = a.right;
    } else {
        exact = false;
        // Canonical pair order so the rounded point does not depend on which
        // operand a segment came from.
        const bool swap = b.left < a.left || (b.left == a.left && b.right < a.right);
        const Segment& p = swap ? b : a;
        const Segment& q = swap ? a : b;
        const i128 dax = p.right.x - p.left.x;
        const i128 day = p.right.y - p.left.y;
        const i128 dbx = q.right.x - q.left.x;
        const i128 dby = q.right.y - q.left.y;
        const i128 den = dax * dby - day * dbx;
        const i128 num = i128(q.left.x - p.left.x) * dby - i128(q.left.y - p.left.y) * dbx;
        x.x = p.left.x + static_cast<std::int64_t>(round_div(dax * num, den));
        x.y = p.left.y + static_cast<std::int64_t>(round_div(day * num, den));
    }
    const bool end_a = x == a.left || x == a.right;
    const bool end_b = x == b.left || x == b.right;
    if (split_a && !end_a) split_a->push_back(x);
    if (split_b && !end_b) split_b->push_back(x);
    if (exact && end_a && end_b) return Contact::endpoint;
    return exact ? Contact::touch : Contact::cross;
}

inline void split_segment(const Segment& s, std::vector<GridPoint>& pts, std::vector<Segment>& out) {
    const i128 dx = s.right.x - s.left.x;
    const i128 dy = s.right.y - s.left.y;
    auto key = [&](const GridPoint& p) { return i128(p.x - s.left.x) * dx + i128(p.y - s.left.y) * dy; };
    std::sort(pts.begin(), pts.end(), [&](const GridPoint& a, const GridPoint& b) {
        const i128 ka = key(a);
        const i128 kb = key(b);
        return ka < kb || (ka == kb && a < b);
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    GridPoint prev = s.left;
    auto emit = [&](const GridPoint& a, const GridPoint& b) {
        if (a == b) return;
        Segment piece;
        if (a < b) {
            piece.left = a;
            piece.right = b;
            piece.wind[0] = s.wind[0];
            piece.wind[1] = s.wind[1];
        } else {
            piece.left = b;
            piece.right = a;
            piece.wind[0] = -s.wind[0];
            piece.wind[1] = -s.wind[1];
        }
        out.push_back(piece);
    };
    for (const GridPoint& p : pts) {
        emit(prev, p);
        prev = p;
    }
    emit(prev, s.right);
}

inline constexpr int kMaxNodingPasses = 64;

// Splits segments until they meet only at endpoints, then merges identical
// segments and drops those whose contributions cancel.
inline std::vector<Segment> node_segments(std::vector<Segment> segs) {
    for (int pass = 0;; ++pass) {
        if (pass == kMaxNodingPasses) {
            throw GeometryError(GeometryError::Kind::topology, "segment noding did not converge on the snap grid");
        }
        std::vector<std::vector<GridPoint>> splits(segs.size());
        bool any = false;
        for_each_candidate_pair(segs, [&](std::size_t i, std::size_t j) {
            const std::size_t before_i = splits[i].size();
            const std::size_t before_j = splits[j].size();
            classify_pair(segs[i], segs[j], &splits[i], &splits[j]);
            if (splits[i].size() != before_i || splits[j].size() != before_j) any = true;
        });
        if (!any) break;
        std::vector<Segment> next;
        next.reserve(segs.size() * 2);
        for (std::size_t i = 0; i < segs.size(); ++i) {
            if (splits[i].empty()) {
                next.push_back(segs[i]);
            } else {
                split_segment(segs[i], splits[i], next);
            }
        }
        segs = std::move(next);
    }
    std::sort(segs.begin(), segs.end(), [](const Segment& a, const Segment& b) {
        return a.left < b.left || (a.left == b.left && a.right < b.right);
    });
    std::vector<Segment> merged;
    merged.reserve(segs.size());
    for (const Segment& s : segs) {
        if (!merged.empty() && merged.back().left == s.left && merged.back().right == s.right) {
            merged.back().wind[0] += s.wind[0];
            merged.back().wind[1] += s.wind[1];
        } else {
            merged.push_back(s);
        }
    }
    std::erase_if(merged, [](const Segment& s) { return s.wind[0] == 0 && s.wind[1] == 0; });
    return merged;
}

// True iff segment `a` lies below segment `b` on the sweep line. Both must be
// active at the current event and must not cross.
inline bool segment_below(const Segment& a, const Segment& b) {
    if (a.left == b.left) return orient(a.left, a.right, b.right) > 0;
    if (b.left < a.left) return orient(b.left, b.right, a.left) < 0;
    return orient(a.left, a.right, b.left) > 0;
}

inline bool in_result(BoolOp op, int wa, int wb) {
    const bool ia = wa != 0;
    const bool ib = wb != 0;
    switch (op) {
        case BoolOp::union_: return ia || ib;
        case BoolOp::intersection: return ia && ib;
        case BoolOp::difference: return ia && !ib;
    }
    return false;
}

struct DirectedEdge {
    GridPoint from;
    GridPoint to;
};

inline std::vector<DirectedEdge> select_edges(const std::vector<Segment>& segs, BoolOp op) {
    struct Event {
        GridPoint at;
        bool insert;
        std::size_t seg;
    };
    std::vector<Event> events;
    events.reserve(segs.size() * 2);
    for (std::size_t i = 0; i < segs.size(); ++i) {
        events.push_back({segs[i].left, true, i});
        events.push_back({segs[i].right, false, i});
    }
    std::sort(events.begin(), events.end(), [&](const Event& a, const Event& b) {
        if (!(a.at == b.at)) return a.at < b.at;
        if (a.insert != b.insert) return !a.insert;
        if (a.insert) return segment_below(segs[a.seg], segs[b.seg]);
        return a.seg < b.seg;
    });

    auto less = [&](std::size_t a, std::size_t b) { return segment_below(segs[a], segs[b]); };
    std::set<std::size_t, decltype(less)> status(less);
    std::vector<std::set<std::size_t, decltype(less)>::iterator> where(segs.size(), status.end());
    std::vector<std::pair<int, int>> above(segs.size());
    std::vector<DirectedEdge> out;

    for (const Event& e : events) {
        if (!e.insert) {
            status.erase(where[e.seg]);
            continue;
        }
        auto [it, inserted] = status.insert(e.seg);
        if (!inserted) {
            throw GeometryError(GeometryError::Kind::topology, "coincident segments survived noding");
        }
        where[e.seg] = it;
        std::pair<int, int> below{0, 0};
        if (it != status.begin()) below = above[*std::prev(it)];
        const Segment& s = segs[e.seg];
        const std::pair<int, int> up{below.first + s.wind[0], below.second + s.wind[1]};
        above[e.seg] = up;
        const bool in_below = in_result(op, below.first, below.second);
        const bool in_above = in_result(op, up.first, up.second);
        if (in_below != in_above) {
            // Interior on the left: rightward when the interior is above.
            out.push_back(in_above ? DirectedEdge{s.left, s.right} : DirectedEdge{s.right, s.left});
        }
    }
    return out;
}

// 0 for directions in [0, pi), 1 for [pi, 2 pi).
inline int half_plane(std::int64_t dx, std::int64_t dy) { return (dy < 0 || (dy == 0 && dx < 0)) ? 1 : 0; }

inline bool angle_less(std::int64_t ax, std::int64_t ay, std::int64_t bx, std::int64_t by) {
    const int ha = half_plane(ax, ay);
    const int hb = half_plane(bx, by);
    if (ha != hb) return ha < hb;
    return i128(ax) * i128(by) - i128(ay) * i128(bx) > 0;
}

inline i128 twice_area(const std::vector<GridPoint>& ring) {
    i128 acc = 0;
    const GridPoint o = ring.front();
    for (std::size_t i = 1; i + 1 < ring.size(); ++i) acc += cross(o, ring[i], ring[i + 1]);
    return acc;
}

// Winding number of `p` (given in doubled coordinates) about `ring`.
inline int winding_doubled(const std::vector<GridPoint>& ring, const GridPoint& p) {
    int w = 0;
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
        const GridPoint a{ring[i].x * 2, ring[i].y * 2};
        const GridPoint b{ring[(i + 1) % n].x * 2, ring[(i + 1) % n].y * 2};
        if (a.y <= p.y) {
            if (b.y > p.y && orient(a, b, p) > 0) ++w;
        } else if (b.y <= p.y && orient(a, b, p) < 0) {
            --w;
        }
    }
    return w;
}

inline void rotate_to_min(std::vector<GridPoint>& ring) {
    std::rotate(ring.begin(), std::min_element(ring.begin(), ring.end()), ring.end());
}

inline MultiPolygon assemble(std::vector<DirectedEdge> edges, const SnapGrid& grid) {
    std::sort(edges.begin(), edges.end(), [](const DirectedEdge& a, const DirectedEdge& b) {
        if (!(a.from == b.from)) return a.from < b.from;
        return angle_less(a.to.x - a.from.x, a.to.y - a.from.y, b.to.x - b.from.x, b.to.y - b.from.y);
    });
    auto outgoing = [&](const GridPoint& v) {
        return std::equal_range(edges.begin(), edges.end(), DirectedEdge{v, v},
                                [](const DirectedEdge& a, const DirectedEdge& b) { return a.from < b.from; });
    };
    // Leftmost turn: the first outgoing edge clockwise from the reversed
    // incoming direction.
    auto next_edge = [&](std::size_t in) -> std::size_t {
        const GridPoint v = edges[in].to;
        const std::int64_t bx = edges[in].from.x - v.x;
        const std::int64_t by = edges[in].from.y - v.y;
        auto [lo, hi] = outgoing(v);
        if (lo == hi) throw GeometryError(GeometryError::Kind::topology, "result boundary is not closed");
        auto it = hi;
        while (it != lo) {
            auto cand = std::prev(it);
            if (angle_less(cand->to.x - v.x, cand->to.y - v.y, bx, by)) return static_cast<std::size_t>(cand - edges.begin());
            it = cand;
        }
        return static_cast<std::size_t>(std::prev(hi) - edges.begin());
    };

    std::vector<bool> used(edges.size(), false);
    std::vector<std::vector<GridPoint>> rings;
    std::vector<GridPoint> walk;
    std::unordered_map<GridPoint, std::size_t, GridPointHash> seen;
    for (std::size_t start = 0; start < edges.size(); ++start) {
        if (used[start]) continue;
        walk.clear();
        seen.clear();
        std::size_t e = start;
        while (!used[e]) {
            used[e] = true;
            const GridPoint v = edges[e].from;
            auto found = seen.find(v);
            if (found != seen.end()) {
                // Close the sub-cycle that revisits v.
                std::vector<GridPoint> sub(walk.begin() + static_cast<std::ptrdiff_t>(found->second), walk.end());
                for (const GridPoint& p : sub) seen.erase(p);
                walk.resize(found->second);
                rings.push_back(std::move(sub));
            }
            seen[v] = walk.size();
            walk.push_back(v);
            e = next_edge(e);
        }
        if (e != start || walk.empty()) {
            throw GeometryError(GeometryError::Kind::topology, "result boundary walk did not close");
        }
        rings.push_back(walk);
    }

    struct Shell {
        std::vector<GridPoint> ring;
        i128 area2;
        std::int64_t min_x, min_y, max_x, max_y;
        std::vector<std::vector<GridPoint>> holes;
    };
    std::vector<Shell> shells;
    std::vector<std::vector<GridPoint>> holes;
    for (auto& r : rings) {
        if (r.size() < 3) continue;
        const i128 a2 = twice_area(r);
        if (a2 == 0) continue;
        rotate_to_min(r);
        if (a2 > 0) {
            Shell s{std::move(r), a2, INT64_MAX, INT64_MAX, INT64_MIN, INT64_MIN, {}};
            for (const GridPoint& p : s.ring) {
                s.min_x = std::min(s.min_x, p.x);
                s.min_y = std::min(s.min_y, p.y);
                s.max_x = std::max(s.max_x, p.x);
                s.max_y = std::max(s.max_y, p.y);
            }
            shells.push_back(std::move(s));
        } else {
            holes.push_back(std::move(r));
        }
    }
    for (auto& h : holes) {
        // An edge midpoint of a hole never lies on another result edge.
        const GridPoint probe{h[0].x + h[1].x, h[0].y + h[1].y};
        Shell* best = nullptr;
        for (Shell& s : shells) {
            if (probe.x < 2 * s.min_x || probe.x > 2 * s.max_x || probe.y < 2 * s.min_y || probe.y > 2 * s.max_y) continue;
            if (best && s.area2 >= best->area2) continue;
            if (winding_doubled(s.ring, probe) != 0) best = &s;
        }
        if (!best) throw GeometryError(GeometryError::Kind::topology, "hole ring has no enclosing shell");
        best->holes.push_back(std::move(h));
    }
    std::sort(shells.begin(), shells.end(), [](const Shell& a, const Shell& b) { return a.ring.front() < b.ring.front(); });

    auto to_ring = [&](const std::vector<GridPoint>& pts) {
        Ring r;
        r.vertices.reserve(pts.size());
        for (const GridPoint& p : pts) r.vertices.push_back(unsnap(p, grid));
        return r;
    };
    MultiPolygon result;
    result.parts.reserve(shells.size());
    for (Shell& s : shells) {
        std::sort(s.holes.begin(), s.holes.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
        Polygon poly;
        poly.exterior = to_ring(s.ring);
        for (const auto& h : s.holes) poly.holes.push_back(to_ring(h));
        result.parts.push_back(std::move(poly));
    }
    return result;
}

inline MultiPolygon overlay(std::vector<Segment> segs, BoolOp op, const SnapGrid& grid) {
    if (!(grid.resolution > 0.0) || !std::isfinite(grid.resolution)) {
        throw GeometryError(GeometryError::Kind::out_of_domain, "snap grid resolution must be positive");
    }
    return assemble(select_edges(node_segments(std::move(segs)), op), grid);
}

}  // namespace detail

/// Boolean operation on two multipolygons. Coordinates are snapped to `grid`
/// first; the result's vertices lie on the grid.
inline MultiPolygon boolean_op(const MultiPolygon& a, const MultiPolygon& b, BoolOp op, const SnapGrid& grid = {}) {
    std::vector<detail::Segment> segs;
    segs.reserve(vertex_count(a) + vertex_count(b));
    detail::add_multipolygon_edges(a, 0, grid, segs);
    detail::add_multipolygon_edges(b, 1, grid, segs);
    return detail::overlay(std::move(segs), op, grid);
}

/// Snaps a multipolygon to the grid and resolves it into valid form (the
/// nonzero-winding region of its rings).
inline MultiPolygon snap_to_grid(const MultiPolygon& a, const SnapGrid& grid = {}) {
    return boolean_op(a, MultiPolygon{}, BoolOp::union_, grid);
}

/// Union of many polygons by a balanced pairwise merge tree. Inputs are put
/// in a canonical order first: snap rounding at intermediate levels depends
/// on which pairs meet, so this is what makes the result order-insensitive.
inline MultiPolygon union_all(std::span<const Polygon> discs, const SnapGrid& grid = {}) {
    if (discs.empty()) return {};
    std::vector<std::pair<std::vector<std::int64_t>, std::size_t>> keyed;
    keyed.reserve(discs.size());
    for (std::size_t i = 0; i < discs.size(); ++i) {
        std::vector<std::int64_t> key;
        auto add = [&](const Ring& r) {
            key.push_back(static_cast<std::int64_t>(r.vertices.size()));
            for (const PlanePoint& v : r.vertices) {
                const detail::GridPoint g = detail::snap(v, grid);
                key.push_back(g.x);
                key.push_back(g.y);
            }
        };
        add(discs[i].exterior);
        for (const Ring& h : discs[i].holes) add(h);
        keyed.emplace_back(std::move(key), i);
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<MultiPolygon> level;
    level.reserve(discs.size());
    for (const auto& k : keyed) level.push_back(MultiPolygon{{discs[k.second]}});
    if (level.size() == 1) return snap_to_grid(level.front(), grid);
    while (level.size() > 1) {
        std::vector<MultiPolygon> next;
        next.reserve((level.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
            next.push_back(boolean_op(level[i], level[i + 1], BoolOp::union_, grid));
        }
        if (level.size() % 2 == 1) next.push_back(std::move(level.back()));
        level = std::move(next);
    }
    return std::move(level.front());
}

inline MultiPolygon union_all(const std::vector<Polygon>& discs, const SnapGrid& grid = {}) {
    return union_all(std::span<const Polygon>(discs), grid);
}

/// Exact area of a grid-snapped multipolygon, in square meters.
inline double snapped_area(const MultiPolygon& m, const SnapGrid& grid = {}) {
    detail::i128 total = 0;
    auto ring_twice = [&](const Ring& r) {
        std::vector<detail::GridPoint> pts;
        pts.reserve(r.vertices.size());
        for (const PlanePoint& p : r.vertices) pts.push_back(detail::snap(p, grid));
        if (pts.size() < 3) return detail::i128{0};
        const detail::i128 a = detail::twice_area(pts);
        return a < 0 ? -a : a;
    };
    for (const Polygon& p : m.parts) {
        total += ring_twice(p.exterior);
        for (const Ring& h : p.holes) total -= ring_twice(h);
    }
    return 0.5 * static_cast<double>(total) * grid.resolution * grid.resolution;
}

/// Describes the first defect found when a multipolygon is checked on the
/// grid: an empty string means the rings are free of crossings and overlaps.
inline std::string find_ring_defect(const MultiPolygon& m, const SnapGrid& grid = {}) {
    std::vector<detail::Segment> segs;
    std::string defect;
    detail::for_each_ring(m, [&](const Ring& r) {
        if (!defect.empty()) return;
        std::vector<detail::GridPoint> pts;
        for (const PlanePoint& p : r.vertices) {
            const detail::GridPoint g = detail::snap(p, grid);
            if (pts.empty() || !(pts.back() == g)) pts.push_back(g);
        }
        while (pts.size() > 1 && pts.front() == pts.back()) pts.pop_back();
        if (pts.size() < 3 || detail::twice_area(pts) == 0) {
            defect = "degenerate ring after snapping";
            return;
        }
        detail::add_ring_edges(std::vector<PlanePoint>(r.vertices), 0, grid, segs);
    });
    if (!defect.empty()) return defect;
    detail::for_each_candidate_pair(segs, [&](std::size_t i, std::size_t j) {
        if (!defect.empty()) return;
        const detail::Contact c = detail::classify_pair(segs[i], segs[j], nullptr, nullptr);
        if (c == detail::Contact::cross) defect = "ring edges cross";
        if (c == detail::Contact::overlap) defect = "ring edges overlap";
    });
    return defect;
}

}  // namespace flood_exposure

#endif
