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

// Randomized and hand-built boolean cases shared by the unit and
// acceptance suites.

#ifndef FLOOD_EXPOSURE_TESTS_CASES_HPP
#define FLOOD_EXPOSURE_TESTS_CASES_HPP

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "flood_exposure/boolean.hpp"
#include "flood_exposure/geometry.hpp"
#include "support/oracles.hpp"

namespace cases {

namespace fe = flood_exposure;

inline fe::Ring rect(double x0, double y0, double x1, double y1) {
    return fe::Ring{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
}

inline fe::Ring cw(fe::Ring r) {
    std::reverse(r.vertices.begin(), r.vertices.end());
    return r;
}

inline fe::MultiPolygon mp(std::vector<fe::Polygon> parts) { return fe::MultiPolygon{std::move(parts)}; }

struct BoolCase {
    std::string kind;
    fe::MultiPolygon a, b;
};

// Sizes are tract and buffer scale (hundreds of meters to kilometers); the
// 1 mm snap grid perturbs areas by roughly grid / size per crossing.
inline fe::MultiPolygon random_shape(std::mt19937_64& rng, double spread) {
    std::uniform_int_distribution<int> pick(0, 4);
    std::uniform_real_distribution<double> pos(-spread, spread), size(500.0, 4000.0);
    std::uniform_int_distribution<int> segs(8, 64);
    std::uniform_int_distribution<int> cell(-4, 4), extent(1, 5);
    switch (pick(rng)) {
        case 0: return mp({fe::buffer_disc({pos(rng), pos(rng)}, size(rng), segs(rng))});
        case 1: return mp({oracle::random_polygon(rng, {pos(rng), pos(rng)}, size(rng), false)});
        case 2: return mp({oracle::random_polygon(rng, {pos(rng), pos(rng)}, size(rng), true)});
        case 3: {
            // Axis-aligned blocks on a coarse lattice: shared and collinear edges are common.
            const double u = 500.0;
            const int x = cell(rng), y = cell(rng);
            return mp({fe::Polygon{rect(x * u, y * u, (x + extent(rng)) * u, (y + extent(rng)) * u), {}}});
        }
        default: {
            const double s = size(rng);
            const fe::PlanePoint c{pos(rng), pos(rng)};
            return mp({oracle::random_polygon(rng, c, s, false),
                       oracle::random_polygon(rng, {c.x + 2.5 * s, c.y}, 0.8 * s, true)});
        }
    }
}

inline BoolCase random_case(std::mt19937_64& rng) {
    BoolCase c;
    c.kind = "random";
    c.a = random_shape(rng, 2000.0);
    c.b = random_shape(rng, 2000.0);
    return c;
}

// Hand-built degenerate configurations with exact expected areas. Every
// coordinate is a whole meter, so snapping is lossless.
struct DegenerateFixture {
    std::string name;
    fe::MultiPolygon a, b;
    double union_area, intersection_area, difference_area;
    int union_parts;  // -1 when not asserted
};

inline std::vector<DegenerateFixture> degenerate_fixtures() {
    using P = fe::Polygon;
    std::vector<DegenerateFixture> f;
    f.push_back({"shared_edge", mp({P{rect(0, 0, 10, 10), {}}}), mp({P{rect(10, 0, 20, 10), {}}}), 200, 0, 100, 1});
    f.push_back({"shared_partial_edge", mp({P{rect(0, 0, 20, 10), {}}}), mp({P{rect(10, 10, 30, 20), {}}}), 400, 0,
                 200, 1});
    f.push_back({"touching_vertex", mp({P{rect(0, 0, 10, 10), {}}}), mp({P{rect(10, 10, 20, 20), {}}}), 200, 0, 100, 2});
    f.push_back({"vertex_on_edge", mp({P{rect(0, 0, 20, 20), {}}}),
                 mp({P{fe::Ring{{{10, 20}, {20, 30}, {0, 30}}}, {}}}), 500, 0, 400, 2});
    f.push_back({"collinear_overlap", mp({P{rect(0, 0, 20, 10), {}}}), mp({P{rect(10, 0, 30, 10), {}}}), 300, 100,
                 100, 1});
    f.push_back({"contained_shared_boundary", mp({P{rect(0, 0, 20, 20), {}}}), mp({P{rect(0, 0, 10, 10), {}}}), 400,
                 100, 300, 1});
    f.push_back({"identical", mp({P{rect(0, 0, 10, 10), {}}}), mp({P{rect(0, 0, 10, 10), {}}}), 100, 100, 0, 1});
    f.push_back({"hole_filled_exactly", mp({P{rect(0, 0, 30, 30), {cw(rect(10, 10, 20, 20))}}}),
                 mp({P{rect(10, 10, 20, 20), {}}}), 900, 0, 800, 1});
    // Triangular hole touching the shell's bottom edge at (20, 0).
    const fe::Ring hole = cw(fe::Ring{{{20, 0}, {30, 20}, {10, 20}}});
    f.push_back({"hole_touching_shell", mp({P{rect(0, 0, 40, 40), {hole}}}), mp({P{rect(10, 10, 30, 30), {}}}), 1550,
                 250, 1150, 1});
    f.push_back({"hole_touching_shell_disjoint", mp({P{rect(0, 0, 40, 40), {hole}}}),
                 mp({P{rect(50, 0, 60, 10), {}}}), 1500, 0, 1400, 2});
    return f;
}

inline double area(const fe::MultiPolygon& m) { return fe::snapped_area(m); }

// Checks the boolean-op properties on one case; returns an empty string on
// success, otherwise a description of the first violation.
inline std::string check_properties(const BoolCase& c) {
    std::ostringstream why;
    const double aa = area(fe::snap_to_grid(c.a)), ab = area(fe::snap_to_grid(c.b));
    const auto u = fe::boolean_op(c.a, c.b, fe::BoolOp::union_);
    const auto i = fe::boolean_op(c.a, c.b, fe::BoolOp::intersection);
    const auto d = fe::boolean_op(c.a, c.b, fe::BoolOp::difference);
    const auto u2 = fe::boolean_op(c.b, c.a, fe::BoolOp::union_);
    const auto i2 = fe::boolean_op(c.b, c.a, fe::BoolOp::intersection);
    const double au = area(u), ai = area(i), ad = area(d);
    const double scale = aa + ab;
    if (std::abs(ai + au - scale) > 1e-6 * scale) why << "inclusion-exclusion " << ai + au << " vs " << scale << "; ";
    if (std::abs(ad - (aa - ai)) > 1e-6 * scale) why << "difference " << ad << " vs " << aa - ai << "; ";
    if (ai > std::min(aa, ab) + 1e-9 * scale) why << "intersection above min; ";
    if (au < std::max(aa, ab) - 1e-9 * scale) why << "union below max; ";
    if (au > scale + 1e-9 * scale) why << "union above sum; ";
    if (area(u2) != au || area(i2) != ai) why << "commutativity areas; ";
    const double sym = area(fe::boolean_op(u, u2, fe::BoolOp::difference)) +
                       area(fe::boolean_op(u2, u, fe::BoolOp::difference)) +
                       area(fe::boolean_op(i, i2, fe::BoolOp::difference)) +
                       area(fe::boolean_op(i2, i, fe::BoolOp::difference));
    if (sym != 0.0) why << "commutativity symmetric difference " << sym << "; ";
    for (const auto* m : {&u, &i, &d, &u2, &i2}) {
        if (!oracle::rings_valid(*m)) {
            why << "invalid output rings; ";
            break;
        }
    }
    std::vector<fe::Polygon> parts = c.a.parts;
    parts.insert(parts.end(), c.b.parts.begin(), c.b.parts.end());
    const double all = area(fe::union_all(parts));
    std::reverse(parts.begin(), parts.end());
    const double all_rev = area(fe::union_all(parts));
    if (std::abs(all - all_rev) > 1e-9 * all) why << "union_all order " << all << " vs " << all_rev << "; ";
    if (std::abs(all - au) > 1e-6 * scale) why << "union_all vs union; ";
    return why.str();
}

inline std::string check_fixture(const DegenerateFixture& f) {
    std::ostringstream why;
    const auto u = fe::boolean_op(f.a, f.b, fe::BoolOp::union_);
    const auto i = fe::boolean_op(f.a, f.b, fe::BoolOp::intersection);
    const auto d = fe::boolean_op(f.a, f.b, fe::BoolOp::difference);
    if (area(u) != f.union_area) why << "union " << area(u) << " != " << f.union_area << "; ";
    if (area(i) != f.intersection_area) why << "intersection " << area(i) << " != " << f.intersection_area << "; ";
    if (area(d) != f.difference_area) why << "difference " << area(d) << " != " << f.difference_area << "; ";
    if (f.union_parts >= 0 && static_cast<int>(u.parts.size()) != f.union_parts) {
        why << "union parts " << u.parts.size() << " != " << f.union_parts << "; ";
    }
    if (f.intersection_area == 0.0 && !i.parts.empty()) why << "intersection not empty; ";
    if (f.difference_area == 0.0 && !d.parts.empty()) why << "difference not empty; ";
    for (const auto* m : {&u, &i, &d}) {
        if (!oracle::rings_valid(*m)) {
            why << "invalid output rings; ";
            break;
        }
    }
    return why.str().empty() ? std::string() : f.name + ": " + why.str();
}

}  // namespace cases

#endif
