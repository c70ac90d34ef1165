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

// Deterministic adaptive-quadtree area estimator. Independent of the
// boolean kernel: it only needs point containment and segment/box tests.

#ifndef FLOOD_EXPOSURE_AREA_ESTIMATE_HPP
#define FLOOD_EXPOSURE_AREA_ESTIMATE_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <vector>

#include "flood_exposure/boolean.hpp"
#include "flood_exposure/geometry.hpp"

namespace flood_exposure {

namespace detail {

struct QtEdge {
    PlanePoint a, b;
};

inline std::vector<QtEdge> qt_edges(const MultiPolygon& m) {
    std::vector<QtEdge> out;
    for_each_ring(m, [&](const Ring& r) {
        const std::size_t n = r.vertices.size();
        for (std::size_t i = 0; i < n; ++i) out.push_back({r.vertices[i], r.vertices[(i + 1) % n]});
    });
    return out;
}

inline bool edge_touches_box(const QtEdge& e, const Rect& c) {
    if (std::max(e.a.x, e.b.x) < c.min_x || std::min(e.a.x, e.b.x) > c.max_x || std::max(e.a.y, e.b.y) < c.min_y ||
        std::min(e.a.y, e.b.y) > c.max_y) {
        return false;
    }
    const double dx = e.b.x - e.a.x, dy = e.b.y - e.a.y;
    int pos = 0, neg = 0;
    for (const PlanePoint& q : {PlanePoint{c.min_x, c.min_y}, PlanePoint{c.max_x, c.min_y}, PlanePoint{c.min_x, c.max_y},
                                PlanePoint{c.max_x, c.max_y}}) {
        const double s = dx * (q.y - e.a.y) - dy * (q.x - e.a.x);
        if (s >= 0) ++pos;
        if (s <= 0) ++neg;
    }
    return pos > 0 && neg > 0;
}

enum class Cover { out, in, mixed };

struct QuadtreeState {
    const MultiPolygon* ops[2];
    std::vector<QtEdge> edges[2];
    int count;
    BoolOp op;
    double min_cell_area;
    double area = 0.0;

    bool combine(const bool in[2]) const {
        if (count == 1) return in[0];
        switch (op) {
            case BoolOp::union_: return in[0] || in[1];
            case BoolOp::intersection: return in[0] && in[1];
            case BoolOp::difference: return in[0] && !in[1];
        }
        return false;
    }

    void visit(const Rect& cell, const std::array<std::vector<std::uint32_t>, 2>& live) {
        std::array<std::vector<std::uint32_t>, 2> sub;
        Cover cover[2] = {Cover::out, Cover::out};
        const PlanePoint mid{0.5 * (cell.min_x + cell.max_x), 0.5 * (cell.min_y + cell.max_y)};
        for (int k = 0; k < count; ++k) {
            for (std::uint32_t i : live[k]) {
                if (edge_touches_box(edges[k][i], cell)) sub[k].push_back(i);
            }
            cover[k] = sub[k].empty() ? (contains(*ops[k], mid) ? Cover::in : Cover::out) : Cover::mixed;
        }
        // Decide if the cell is uniform regardless of the mixed operands.
        bool all_fixed = true;
        bool outcomes[2] = {false, false};
        int seen = 0;
        for (int m0 = 0; m0 < 2; ++m0) {
            for (int m1 = 0; m1 < 2; ++m1) {
                bool in[2] = {cover[0] == Cover::mixed ? m0 == 1 : cover[0] == Cover::in,
                              cover[1] == Cover::mixed ? m1 == 1 : cover[1] == Cover::in};
                const bool r = combine(in);
                if (seen > 0 && r != outcomes[0]) all_fixed = false;
                outcomes[seen > 0 ? 1 : 0] = r;
                ++seen;
            }
        }
        const double a = (cell.max_x - cell.min_x) * (cell.max_y - cell.min_y);
        if (all_fixed) {
            if (outcomes[0]) area += a;
            return;
        }
        if (a <= min_cell_area) {
            bool in[2] = {false, false};
            for (int k = 0; k < count; ++k) in[k] = contains(*ops[k], mid);
            if (combine(in)) area += a;
            return;
        }
        const Rect quads[4] = {{cell.min_x, cell.min_y, mid.x, mid.y},
                               {mid.x, cell.min_y, cell.max_x, mid.y},
                               {cell.min_x, mid.y, mid.x, cell.max_y},
                               {mid.x, mid.y, cell.max_x, cell.max_y}};
        for (const Rect& q : quads) visit(q, sub);
    }
};

inline double quadtree_run(QuadtreeState& st, Rect box) {
    const double side = std::max(box.max_x - box.min_x, box.max_y - box.min_y);
    box.max_x = box.min_x + side;
    box.max_y = box.min_y + side;
    std::array<std::vector<std::uint32_t>, 2> live;
    for (int k = 0; k < st.count; ++k) {
        st.edges[k] = qt_edges(*st.ops[k]);
        for (std::uint32_t i = 0; i < st.edges[k].size(); ++i) live[k].push_back(i);
    }
    if (side > 0.0) st.visit(box, live);
    return st.area;
}

}  // namespace detail

/// Area of `m` by adaptive quadtree: cells wholly inside or outside are
/// counted directly, boundary cells split until their area is at most
/// `min_cell_area`, then classified by their center.
inline double quadtree_area(const MultiPolygon& m, double min_cell_area = 0.01) {
    if (m.parts.empty()) return 0.0;
    detail::QuadtreeState st{{&m, nullptr}, {}, 1, BoolOp::union_, min_cell_area};
    return detail::quadtree_run(st, bounds(m));
}

/// Area of `a op b` estimated the same way, without building the result.
inline double quadtree_boolean_area(const MultiPolygon& a, const MultiPolygon& b, BoolOp op,
                                    double min_cell_area = 0.01) {
    if (a.parts.empty() && b.parts.empty()) return 0.0;
    if (a.parts.empty()) return op == BoolOp::union_ ? quadtree_area(b, min_cell_area) : 0.0;
    if (b.parts.empty()) return op == BoolOp::intersection ? 0.0 : quadtree_area(a, min_cell_area);
    const Rect ba = bounds(a), bb = bounds(b);
    const Rect box{std::min(ba.min_x, bb.min_x), std::min(ba.min_y, bb.min_y), std::max(ba.max_x, bb.max_x),
                   std::max(ba.max_y, bb.max_y)};
    detail::QuadtreeState st{{&a, &b}, {}, 2, op, min_cell_area};
    return detail::quadtree_run(st, box);
}

}  // namespace flood_exposure

#endif
