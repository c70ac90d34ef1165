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

#include <algorithm>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "flood_exposure/spatial_index.hpp"

namespace fe = flood_exposure;

namespace {

std::vector<std::size_t> brute_range(const std::vector<fe::IndexedRect>& items, const fe::Rect& q) {
    std::vector<std::size_t> out;
    for (const auto& it : items) {
        const auto& r = it.rect;
        if (r.min_x <= q.max_x && q.min_x <= r.max_x && r.min_y <= q.max_y && q.min_y <= r.max_y) out.push_back(it.id);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::size_t> brute_distance(const std::vector<fe::IndexedRect>& items, fe::PlanePoint p, double d) {
    std::vector<std::size_t> out;
    for (const auto& it : items) {
        const double dx = p.x < it.rect.min_x ? it.rect.min_x - p.x : (p.x > it.rect.max_x ? p.x - it.rect.max_x : 0.0);
        const double dy = p.y < it.rect.min_y ? it.rect.min_y - p.y : (p.y > it.rect.max_y ? p.y - it.rect.max_y : 0.0);
        if (dx * dx + dy * dy <= d * d) out.push_back(it.id);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<fe::IndexedRect> random_points(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0, 10000);
    std::vector<fe::IndexedRect> items;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = u(rng), y = u(rng);
        items.push_back({{x, y, x, y}, i});
    }
    return items;
}

}  // namespace

TEST(RTree, EmptyTree) {
    const auto t = fe::RTree::bulk_build(std::vector<fe::IndexedRect>{});
    EXPECT_TRUE(t.empty());
    EXPECT_TRUE(t.query_range({-1e9, -1e9, 1e9, 1e9}).empty());
    EXPECT_TRUE(t.within_distance({0, 0}, 1e9).empty());
}

TEST(RTree, SingleItemHasDepthOne) {
    const auto t = fe::RTree::bulk_build(std::vector<fe::IndexedRect>{{{1, 1, 2, 2}, 7}});
    EXPECT_EQ(t.depth(), 1u);
    EXPECT_EQ(t.query_range({0, 0, 3, 3}), std::vector<std::size_t>{7});
    EXPECT_TRUE(t.check_invariants());
}

TEST(RTree, DegenerateQueryAtStoredPoint) {
    const auto items = random_points(500, 41);
    const auto t = fe::RTree::bulk_build(items);
    const auto& p = items[123].rect;
    EXPECT_EQ(t.query_range(p), std::vector<std::size_t>{123});
    EXPECT_EQ(t.within_distance({p.min_x, p.min_y}, 0.0), std::vector<std::size_t>{123});
}

TEST(RTree, DisjointQueryIsEmpty) {
    const auto t = fe::RTree::bulk_build(random_points(500, 42));
    EXPECT_TRUE(t.query_range({20000, 20000, 30000, 30000}).empty());
}

TEST(RTree, TouchingRectanglesIntersect) {
    const auto t = fe::RTree::bulk_build(std::vector<fe::IndexedRect>{{{0, 0, 1, 1}, 0}, {{2, 0, 3, 1}, 1}});
    EXPECT_EQ(t.query_range({1, 0, 2, 0}), (std::vector<std::size_t>{0, 1}));
}

TEST(RTree, InclusiveDistanceBoundary) {
    const auto t = fe::RTree::bulk_build(std::vector<fe::IndexedRect>{{{3, 4, 3, 4}, 0}, {{3, 4.000001, 3, 4.000001}, 1}});
    EXPECT_EQ(t.within_distance({0, 0}, 5.0), std::vector<std::size_t>{0});
}

TEST(RTree, NegativeDistanceIsEmpty) {
    const auto t = fe::RTree::bulk_build(random_points(10, 43));
    EXPECT_TRUE(t.within_distance({0, 0}, -1.0).empty());
}

TEST(RTree, RandomPointsMatchBruteForce) {
    const auto items = random_points(10000, 44);
    const auto t = fe::RTree::bulk_build(items);
    EXPECT_TRUE(t.check_invariants());
    EXPECT_GT(t.depth(), 1u);
    std::mt19937_64 rng(45);
    std::uniform_real_distribution<double> u(-500, 10500), s(0, 1500);
    for (int q = 0; q < 100; ++q) {
        const double x = u(rng), y = u(rng);
        const fe::Rect r{x, y, x + s(rng), y + s(rng)};
        EXPECT_EQ(t.query_range(r), brute_range(items, r));
        const double d = s(rng);
        EXPECT_EQ(t.within_distance({x, y}, d), brute_distance(items, {x, y}, d));
    }
}

TEST(RTree, RandomRectanglesMatchBruteForce) {
    std::mt19937_64 rng(46);
    std::uniform_real_distribution<double> u(0, 10000), s(0, 200);
    std::vector<fe::IndexedRect> items;
    for (std::size_t i = 0; i < 10000; ++i) {
        const double x = u(rng), y = u(rng);
        items.push_back({{x, y, x + s(rng), y + s(rng)}, i});
    }
    for (std::size_t fanout : {2u, 4u, 16u, 64u}) {
        const auto t = fe::RTree::bulk_build(items, fanout);
        EXPECT_TRUE(t.check_invariants());
        for (int q = 0; q < 25; ++q) {
            const double x = u(rng), y = u(rng);
            const fe::Rect r{x, y, x + 5 * s(rng), y + 5 * s(rng)};
            EXPECT_EQ(t.query_range(r), brute_range(items, r)) << "fanout " << fanout;
            const double d = 2 * s(rng);
            EXPECT_EQ(t.within_distance({x, y}, d), brute_distance(items, {x, y}, d)) << "fanout " << fanout;
        }
    }
}

TEST(RTree, DuplicatePointsAllReturned) {
    std::vector<fe::IndexedRect> items;
    for (std::size_t i = 0; i < 100; ++i) items.push_back({{5, 5, 5, 5}, i});
    const auto t = fe::RTree::bulk_build(items);
    EXPECT_EQ(t.within_distance({5, 5}, 0.0).size(), 100u);
}
