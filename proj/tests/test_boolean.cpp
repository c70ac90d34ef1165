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
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "flood_exposure/area_estimate.hpp"
#include "flood_exposure/boolean.hpp"
#include "support/cases.hpp"
#include "support/oracles.hpp"

namespace fe = flood_exposure;
using cases::mp;
using cases::rect;

namespace {

fe::MultiPolygon square(double x0, double y0, double s) { return mp({fe::Polygon{rect(x0, y0, x0 + s, y0 + s), {}}}); }

bool combine(fe::BoolOp op, bool a, bool b) {
    switch (op) {
        case fe::BoolOp::union_: return a || b;
        case fe::BoolOp::intersection: return a && b;
        case fe::BoolOp::difference: return a && !b;
    }
    return false;
}

}  // namespace

TEST(BooleanOp, OffsetUnitSquares) {
    const auto a = square(0, 0, 1), b = square(0.5, 0, 1);
    EXPECT_EQ(fe::snapped_area(fe::boolean_op(a, b, fe::BoolOp::intersection)), 0.5);
    EXPECT_EQ(fe::snapped_area(fe::boolean_op(a, b, fe::BoolOp::union_)), 1.5);
    EXPECT_EQ(fe::snapped_area(fe::boolean_op(a, b, fe::BoolOp::difference)), 0.5);
}

TEST(BooleanOp, DisjointSquares) {
    const auto a = square(0, 0, 1), b = square(3, 3, 2);
    EXPECT_TRUE(fe::boolean_op(a, b, fe::BoolOp::intersection).parts.empty());
    const auto u = fe::boolean_op(a, b, fe::BoolOp::union_);
    EXPECT_EQ(u.parts.size(), 2u);
    EXPECT_EQ(fe::snapped_area(u), 5.0);
}

TEST(BooleanOp, EmptyOperands) {
    const auto a = square(0, 0, 1);
    const fe::MultiPolygon none;
    EXPECT_EQ(fe::snapped_area(fe::boolean_op(a, none, fe::BoolOp::union_)), 1.0);
    EXPECT_TRUE(fe::boolean_op(a, none, fe::BoolOp::intersection).parts.empty());
    EXPECT_EQ(fe::snapped_area(fe::boolean_op(a, none, fe::BoolOp::difference)), 1.0);
    EXPECT_TRUE(fe::boolean_op(none, a, fe::BoolOp::difference).parts.empty());
}

TEST(BooleanOp, OutputRingsAreOriented) {
    const auto a = mp({fe::Polygon{rect(0, 0, 30, 30), {cases::cw(rect(10, 10, 20, 20))}}});
    const auto u = fe::boolean_op(a, square(25, 25, 10), fe::BoolOp::union_);
    ASSERT_EQ(u.parts.size(), 1u);
    ASSERT_EQ(u.parts[0].holes.size(), 1u);
    EXPECT_GT(fe::ring_area(u.parts[0].exterior), 0.0);
    EXPECT_LT(fe::ring_area(u.parts[0].holes[0]), 0.0);
}

class DegenerateFixtureTest : public ::testing::TestWithParam<cases::DegenerateFixture> {};

TEST_P(DegenerateFixtureTest, ExactAreasAndValidRings) { EXPECT_EQ(cases::check_fixture(GetParam()), ""); }

TEST_P(DegenerateFixtureTest, SwappedOperands) {
    const auto& f = GetParam();
    EXPECT_EQ(cases::area(fe::boolean_op(f.b, f.a, fe::BoolOp::union_)), f.union_area);
    EXPECT_EQ(cases::area(fe::boolean_op(f.b, f.a, fe::BoolOp::intersection)), f.intersection_area);
}

INSTANTIATE_TEST_SUITE_P(Fixtures, DegenerateFixtureTest, ::testing::ValuesIn(cases::degenerate_fixtures()),
                         [](const auto& info) { return info.param.name; });

TEST(BooleanOp, HoleTouchingShellSnapsToOnePart) {
    const fe::Ring hole = cases::cw(fe::Ring{{{20, 0}, {30, 20}, {10, 20}}});
    const auto a = mp({fe::Polygon{rect(0, 0, 40, 40), {hole}}});
    const auto s = fe::snap_to_grid(a);
    EXPECT_EQ(fe::snapped_area(s), 1400.0);
    EXPECT_TRUE(oracle::rings_valid(s));
    EXPECT_EQ(fe::find_ring_defect(a), "");
}

TEST(BooleanOp, RandomCasesSatisfyProperties) {
    std::mt19937_64 rng(31);
    for (int k = 0; k < 150; ++k) {
        const auto c = cases::random_case(rng);
        EXPECT_EQ(cases::check_properties(c), "") << "case " << k;
    }
}

TEST(BooleanOp, RandomPairsMatchMonteCarlo) {
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> pos(-150, 150), rad(80, 300);
    std::uniform_int_distribution<int> segs(8, 64);
    const fe::BoolOp ops[] = {fe::BoolOp::union_, fe::BoolOp::intersection, fe::BoolOp::difference};
    for (int k = 0; k < 200; ++k) {
        const auto a = mp({fe::buffer_disc({pos(rng), pos(rng)}, rad(rng), segs(rng))});
        const auto b = mp({oracle::random_polygon(rng, {pos(rng), pos(rng)}, rad(rng), k % 2 == 0)});
        const fe::BoolOp op = ops[k % 3];
        const auto ea = oracle::edges_of(a), eb = oracle::edges_of(b);
        const auto ba = oracle::bbox(ea), bb = oracle::bbox(eb);
        const auto box = oracle::merge(ba, bb);
        auto in = [](const auto& es, const auto& b, double x, double y) {
            return b.contains(fe::PlanePoint{x, y}) && oracle::inside(es, x, y);
        };
        const auto est = oracle::monte_carlo_area(
            box, [&](double x, double y) { return combine(op, in(ea, ba, x, y), in(eb, bb, x, y)); }, 1000, 1000 + k);
        EXPECT_NEAR(fe::snapped_area(fe::boolean_op(a, b, op)), est.area, 3.0 * est.sigma) << "case " << k;
    }
}

TEST(BooleanOp, AgreesWithQuadtreeEstimator) {
    std::mt19937_64 rng(33);
    const fe::BoolOp ops[] = {fe::BoolOp::union_, fe::BoolOp::intersection, fe::BoolOp::difference};
    for (int k = 0; k < 6; ++k) {
        const auto a = mp({fe::buffer_disc({0, 0}, 120, 32)});
        const auto b = mp({oracle::random_polygon(rng, {60, 20}, 100, true)});
        const fe::BoolOp op = ops[k % 3];
        const double exact = fe::snapped_area(fe::boolean_op(a, b, op));
        EXPECT_NEAR(fe::quadtree_boolean_area(a, b, op), exact, 1e-4 * exact + 1.0) << "case " << k;
    }
}

TEST(UnionAll, SingleDiscIsItself) {
    const fe::Polygon d = fe::buffer_disc({5, 5}, 100, 64);
    const auto u = fe::union_all(std::vector<fe::Polygon>{d});
    EXPECT_EQ(u.parts.size(), 1u);
    EXPECT_EQ(fe::snapped_area(u), fe::snapped_area(mp({d})));
}

TEST(UnionAll, IdenticalDiscsAreIdempotent) {
    const fe::Polygon d = fe::buffer_disc({5, 5}, 100, 64);
    EXPECT_EQ(fe::snapped_area(fe::union_all(std::vector<fe::Polygon>{d, d})), fe::snapped_area(mp({d})));
}

TEST(UnionAll, EmptyInputIsEmpty) { EXPECT_TRUE(fe::union_all(std::vector<fe::Polygon>{}).parts.empty()); }

TEST(UnionAll, FiftyDiscsMatchMonteCarloAndAreOrderInsensitive) {
    std::mt19937_64 rng(34);
    std::uniform_real_distribution<double> pos(-1000, 1000), rad(100, 400);
    std::vector<fe::Polygon> discs;
    std::vector<std::vector<oracle::Edge>> edges;
    double sum = 0.0, biggest = 0.0;
    for (int k = 0; k < 50; ++k) {
        discs.push_back(fe::buffer_disc({pos(rng), pos(rng)}, rad(rng), 64));
        edges.push_back(oracle::edges_of(mp({discs.back()})));
        const double a = fe::snapped_area(mp({discs.back()}));
        sum += a;
        biggest = std::max(biggest, a);
    }
    const auto u = fe::union_all(discs);
    const double area = fe::snapped_area(u);
    EXPECT_TRUE(oracle::rings_valid(u));
    EXPECT_LE(area, sum);
    EXPECT_GE(area, biggest);

    oracle::Rect box = oracle::bbox(edges[0]);
    for (const auto& e : edges) box = oracle::merge(box, oracle::bbox(e));
    const auto est = oracle::monte_carlo_area(
        box,
        [&](double x, double y) {
            return std::any_of(edges.begin(), edges.end(), [&](const auto& e) { return oracle::inside(e, x, y); });
        },
        1000, 35);
    EXPECT_NEAR(area, est.area, 3.0 * est.sigma);

    for (int k = 0; k < 3; ++k) {
        std::shuffle(discs.begin(), discs.end(), rng);
        EXPECT_NEAR(fe::snapped_area(fe::union_all(discs)), area, 1e-9 * area);
    }
}

TEST(UnionAll, NestedRadiiAreMonotone) {
    std::mt19937_64 rng(36);
    std::uniform_real_distribution<double> pos(-800, 800);
    for (int k = 0; k < 20; ++k) {
        std::vector<fe::PlanePoint> centers;
        for (int j = 0; j < 3; ++j) centers.push_back({pos(rng), pos(rng)});
        const auto tract = mp({oracle::random_polygon(rng, {pos(rng), pos(rng)}, 600, k % 2 == 0)});
        double prev = 0.0;
        for (double r : {100.0, 250.0, 500.0, 900.0}) {
            std::vector<fe::Polygon> discs;
            for (const auto& c : centers) discs.push_back(fe::buffer_disc(c, r, 64));
            const double a = fe::snapped_area(fe::boolean_op(tract, fe::union_all(discs), fe::BoolOp::intersection));
            EXPECT_GE(a, prev * (1.0 - 1e-9)) << "case " << k << " r " << r;
            prev = a;
        }
    }
}

TEST(BooleanOp, TranslationByGridMultiplesIsExact) {
    std::mt19937_64 rng(37);
    for (int k = 0; k < 20; ++k) {
        const auto c = cases::random_case(rng);
        const double dx = 1234.567, dy = -7654.321;
        auto shift = [&](fe::MultiPolygon m) {
            // Snap first so the shifted copy lands on the same lattice points.
            m = fe::snap_to_grid(m);
            for (auto& p : m.parts) {
                for (auto& v : p.exterior.vertices) v = {v.x + dx, v.y + dy};
                for (auto& h : p.holes) {
                    for (auto& v : h.vertices) v = {v.x + dx, v.y + dy};
                }
            }
            return m;
        };
        const double base = fe::snapped_area(fe::boolean_op(c.a, c.b, fe::BoolOp::intersection));
        const double moved = fe::snapped_area(fe::boolean_op(shift(c.a), shift(c.b), fe::BoolOp::intersection));
        EXPECT_NEAR(moved, base, 1e-9 * std::max(base, 1.0)) << "case " << k;
    }
}

TEST(FindRingDefect, ReportsSelfCrossing) {
    const auto bowtie = mp({fe::Polygon{fe::Ring{{{0, 0}, {10, 10}, {10, 0}, {0, 10}}}, {}}});
    EXPECT_NE(fe::find_ring_defect(bowtie), "");
    EXPECT_EQ(fe::find_ring_defect(square(0, 0, 10)), "");
}
