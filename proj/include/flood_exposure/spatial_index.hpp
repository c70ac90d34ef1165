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

#ifndef FLOOD_EXPOSURE_SPATIAL_INDEX_HPP
#define FLOOD_EXPOSURE_SPATIAL_INDEX_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "flood_exposure/geometry.hpp"

namespace flood_exposure {

struct IndexedRect {
    Rect rect;
    std::size_t id = 0;
};

// Static R-tree packed with Sort-Tile-Recursive. Immutable after
// construction, so concurrent queries need no synchronization. Query results
// are sorted by id.
//
// Distance thresholds are inclusive: an item at exactly distance d matches.
class RTree {
public:
    static constexpr std::size_t kDefaultFanout = 16;

    RTree() = default;

    static RTree bulk_build(std::span<const IndexedRect> items, std::size_t fanout = kDefaultFanout) {
        RTree t;
        t.fanout_ = std::max<std::size_t>(2, fanout);
        if (items.empty()) return t;
        std::vector<Entry> level;
        level.reserve(items.size());
        for (const IndexedRect& it : items) level.push_back({it.rect, it.id});
        level = pack(std::move(level), t.fanout_, t.nodes_, true);
        t.depth_ = 1;
        while (level.size() > 1) {
            level = pack(std::move(level), t.fanout_, t.nodes_, false);
            ++t.depth_;
        }
        t.root_ = level.front().child;
        return t;
    }

    static RTree bulk_build(const std::vector<IndexedRect>& items, std::size_t fanout = kDefaultFanout) {
        return bulk_build(std::span<const IndexedRect>(items), fanout);
    }

    bool empty() const noexcept { return nodes_.empty(); }
    // Number of node levels; 0 when empty.
    std::size_t depth() const noexcept { return depth_; }
    std::size_t fanout() const noexcept { return fanout_; }

    /// Ids whose rectangles intersect `r` (touching counts).
    std::vector<std::size_t> query_range(const Rect& r) const {
        std::vector<std::size_t> out;
        visit(r, [&](const Entry& e) {
            if (e.rect.intersects(r)) out.push_back(e.child);
        });
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Ids whose rectangles lie within planar distance `d` of `p` (inclusive).
    std::vector<std::size_t> within_distance(const PlanePoint& p, double d) const {
        std::vector<std::size_t> out;
        if (!(d >= 0.0)) return out;
        const Rect window{p.x - d, p.y - d, p.x + d, p.y + d};
        visit(window, [&](const Entry& e) {
            if (distance_squared(e.rect, p) <= d * d) out.push_back(e.child);
        });
        std::sort(out.begin(), out.end());
        return out;
    }

    // Checks structural invariants: child rects within parents and all leaves
    // at the same depth.
    bool check_invariants() const {
        if (nodes_.empty()) return depth_ == 0;
        std::size_t leaf_depth = 0;
        return check(root_, 1, leaf_depth) && leaf_depth == depth_;
    }

private:
    struct Entry {
        Rect rect;
        std::size_t child = 0;  // node index, or item id in leaves
    };
    struct Node {
        bool leaf = true;
        Rect bounds;
        std::vector<Entry> entries;
    };

    static Rect cover(std::span<const Entry> es) {
        Rect b = es.front().rect;
        for (const Entry& e : es) {
            b.min_x = std::min(b.min_x, e.rect.min_x);
            b.min_y = std::min(b.min_y, e.rect.min_y);
            b.max_x = std::max(b.max_x, e.rect.max_x);
            b.max_y = std::max(b.max_y, e.rect.max_y);
        }
        return b;
    }

    static double center_x(const Rect& r) { return 0.5 * (r.min_x + r.max_x); }
    static double center_y(const Rect& r) { return 0.5 * (r.min_y + r.max_y); }

    // Packs one level and returns the entries pointing at the new nodes.
    static std::vector<Entry> pack(std::vector<Entry> es, std::size_t fanout, std::vector<Node>& nodes, bool leaf) {
        const std::size_t n = es.size();
        const std::size_t node_count = (n + fanout - 1) / fanout;
        const auto slices = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(node_count))));
        const std::size_t per_slice = slices * fanout;
        auto by_x = [](const Entry& a, const Entry& b) {
            const double ax = center_x(a.rect), bx = center_x(b.rect);
            return ax < bx || (ax == bx && a.child < b.child);
        };
        auto by_y = [](const Entry& a, const Entry& b) {
            const double ay = center_y(a.rect), by = center_y(b.rect);
            return ay < by || (ay == by && a.child < b.child);
        };
        std::sort(es.begin(), es.end(), by_x);
        std::vector<Entry> parents;
        parents.reserve(node_count);
        for (std::size_t s = 0; s < n; s += per_slice) {
            const auto first = es.begin() + static_cast<std::ptrdiff_t>(s);
            const auto last = es.begin() + static_cast<std::ptrdiff_t>(std::min(n, s + per_slice));
            std::sort(first, last, by_y);
            for (auto it = first; it < last; it += static_cast<std::ptrdiff_t>(std::min<std::size_t>(fanout, static_cast<std::size_t>(last - it)))) {
                const auto end = it + static_cast<std::ptrdiff_t>(std::min<std::size_t>(fanout, static_cast<std::size_t>(last - it)));
                Node node;
                node.leaf = leaf;
                node.entries.assign(it, end);
                node.bounds = cover(node.entries);
                parents.push_back({node.bounds, nodes.size()});
                nodes.push_back(std::move(node));
            }
        }
        return parents;
    }

    template <typename Fn>
    void visit(const Rect& window, Fn&& on_leaf_entry) const {
        if (nodes_.empty()) return;
        std::vector<std::size_t> stack{root_};
        while (!stack.empty()) {
            const Node& node = nodes_[stack.back()];
            stack.pop_back();
            if (!node.bounds.intersects(window)) continue;
            for (const Entry& e : node.entries) {
                if (node.leaf) {
                    on_leaf_entry(e);
                } else if (e.rect.intersects(window)) {
                    stack.push_back(e.child);
                }
            }
        }
    }

    static double distance_squared(const Rect& r, const PlanePoint& p) {
        const double dx = std::max({r.min_x - p.x, 0.0, p.x - r.max_x});
        const double dy = std::max({r.min_y - p.y, 0.0, p.y - r.max_y});
        return dx * dx + dy * dy;
    }

    static bool within(const Rect& inner, const Rect& outer) {
        return inner.min_x >= outer.min_x && inner.min_y >= outer.min_y && inner.max_x <= outer.max_x &&
               inner.max_y <= outer.max_y;
    }

    bool check(std::size_t idx, std::size_t depth, std::size_t& leaf_depth) const {
        const Node& node = nodes_[idx];
        for (const Entry& e : node.entries) {
            if (!within(e.rect, node.bounds)) return false;
        }
        if (node.leaf) {
            if (leaf_depth == 0) leaf_depth = depth;
            return leaf_depth == depth;
        }
        for (const Entry& e : node.entries) {
            if (!within(nodes_[e.child].bounds, e.rect) || !check(e.child, depth + 1, leaf_depth)) return false;
        }
        return true;
    }

    std::size_t fanout_ = kDefaultFanout;
    std::size_t depth_ = 0;
    std::size_t root_ = 0;
    std::vector<Node> nodes_;
};

}  // namespace flood_exposure

#endif
