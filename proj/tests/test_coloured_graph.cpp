#include "doctest.h"

#include <algorithm>
#include <set>

#include "rainbow/coloured_graph.hpp"
#include "rainbow/factorgen.hpp"
#include "rainbow/rng.hpp"

using namespace rainbow;

TEST_CASE("from_edges rejects improper input") {
    std::vector<int> cols = {0, 1};
    CHECK_THROWS(ColouredGraph::from_edges(4, cols, {{0, 0, 0}}));
    CHECK_THROWS(ColouredGraph::from_edges(4, cols, {{0, 1, 0}, {0, 2, 0}}));   // colour repeat at 0
    CHECK_THROWS(ColouredGraph::from_edges(4, cols, {{0, 1, 0}, {0, 1, 1}}));   // pair twice
    CHECK_THROWS(ColouredGraph::from_edges(4, cols, {{0, 5, 0}}));
    CHECK_THROWS(ColouredGraph::from_edges(4, cols, {{0, 1, 7}}));
    CHECK_NOTHROW(ColouredGraph::from_edges(4, cols, {{0, 1, 0}, {2, 3, 0}, {0, 2, 1}}));
}

TEST_CASE("c_neighbour basics") {
    auto g = canonical_one_factorization(4);
    // Symmetry: nbr(nbr(v,c),c) == v everywhere.
    for (int v = 0; v < 4; ++v)
        for (int c : g.colours()) {
            int u = *g.c_neighbour(v, c);
            CHECK(*g.c_neighbour(u, c) == v);
            CHECK(u != v);
        }
    int c01 = g.edge_colour(0, 1);
    CHECK(*g.c_neighbour(0, c01) == 1);
    CHECK_THROWS(g.c_neighbour(-1, 0));
    CHECK_THROWS(g.c_neighbour(0, 99));
}

TEST_CASE("c_neighbour absent in partial colouring") {
    // Partial: 4 vertices, one colour class on {0,1},{2,3} and another on
    // only {0,2} is improper as a G_D^col, so use a genuinely partial graph.
    auto g = ColouredGraph::from_edges(4, {0, 1}, {{0, 1, 0}, {2, 3, 0}, {0, 2, 1}});
    CHECK(!g.c_neighbour(1, 1).has_value());
    CHECK(*g.c_neighbour(0, 1) == 2);
    CHECK(!g.is_gdcol());
}

TEST_CASE("walk_end identities") {
    auto g = canonical_one_factorization(6);
    int c0 = g.colours()[0], c1 = g.colours()[1], c2 = g.colours()[2];
    for (int v = 0; v < 6; ++v) {
        // Each colour class is an involution.
        CHECK(*g.walk_end(v, {c0, c0, c0}) == *g.c_neighbour(v, c0));
        CHECK(*g.walk_end(v, {c1, c1, c2}) == *g.c_neighbour(v, c2));
    }
    // Three distinct colours from vertex 0, checked against the table by hand.
    int a = *g.c_neighbour(0, c0);
    int b = *g.c_neighbour(a, c1);
    int c = *g.c_neighbour(b, c2);
    CHECK(*g.walk_end(0, {c0, c1, c2}) == c);
}

TEST_CASE("count_edges_within") {
    auto g = canonical_one_factorization(6);
    CHECK(g.count_edges_within({}, g.colours()) == 0);
    CHECK(g.count_edges_within({0, 1, 2, 3, 4, 5}, {}) == 0);
    std::vector<int> all = {0, 1, 2, 3, 4, 5};
    CHECK(g.count_edges_within(all, g.colours()) == 15); // n(n-1)/2
    int c01 = g.edge_colour(0, 1);
    CHECK(g.count_edges_within({0, 1, 2}, {c01}) == 1);
}

TEST_CASE("crossing_edges") {
    auto g = canonical_one_factorization(6);
    std::vector<int> all = {0, 1, 2, 3, 4, 5};
    CHECK(g.crossing_edges(all, all) == 15);
    // Disjoint pair in K_6: all four cross pairs are edges.
    CHECK(g.crossing_edges({0, 1}, {2, 3}) == 4);
    // Empty side.
    CHECK(g.crossing_edges({}, all) == 0);
}

TEST_CASE("restrict") {
    auto g = canonical_one_factorization(6);
    auto same = g.restrict(g.colours());
    CHECK(same.edge_list() == g.edge_list());
    auto empty = g.restrict({});
    CHECK(empty.edge_count() == 0);

    // Two colours: a 2-regular union of even cycles.
    std::vector<int> two = {g.colours()[0], g.colours()[1]};
    auto r = g.restrict(two);
    CHECK(r.is_gdcol());
    for (int v = 0; v < 6; ++v) {
        int deg = 0;
        for (int c : two)
            if (r.nbr_raw(v, c) != ColouredGraph::absent) ++deg;
        CHECK(deg == 2);
    }
    // Cycle decomposition: walk colour-alternating cycles, all lengths even.
    std::vector<char> seen(6, 0);
    for (int v = 0; v < 6; ++v) {
        if (seen[v]) continue;
        int len = 0, cur = v, colour_idx = 0;
        do {
            seen[cur] = 1;
            cur = r.nbr_raw(cur, two[colour_idx]);
            colour_idx ^= 1;
            ++len;
        } while (cur != v);
        CHECK(len % 2 == 0);
        CHECK(len >= 4);
    }
    CHECK_THROWS(g.restrict({99}));

    // restrict(restrict(g,D1),D2) == restrict(g, D1 cap D2)
    std::vector<int> d1 = {0, 1, 2, 3}, d2 = {2, 3, 4};
    auto lhs = g.restrict(d1).restrict({2, 3});
    auto rhs = g.restrict({2, 3});
    CHECK(lhs.edge_list() == rhs.edge_list());
}

TEST_CASE("rainbow verifiers") {
    auto g = canonical_one_factorization(6);
    CHECK(verify_rainbow_path(g, {0}).ok);
    CHECK(verify_rainbow_path(g, {}).ok);

    // A path repeating a colour fails: walk one colour class twice.
    int c = g.colours()[0];
    int a = g.nbr_raw(0, c);
    // 0 -a (colour c), then from a find b with colour c' then b's c-edge.
    int cp = g.colours()[1];
    int b = g.nbr_raw(a, cp);
    int d = g.nbr_raw(b, c);
    auto res = verify_rainbow_path(g, {0, a, b, d});
    CHECK(!res.ok);
    CHECK(res.reason.find("colour") != std::string::npos);

    // Non-edge failure names the pair.
    auto g2 = ColouredGraph::from_edges(4, {0}, {{0, 1, 0}, {2, 3, 0}});
    auto bad = verify_rainbow_path(g2, {0, 2});
    CHECK(!bad.ok);
    CHECK(bad.reason.find("{0,2}") != std::string::npos);

    // Triangle with three colours: rainbow cycle through all colours.
    auto k3 = ColouredGraph::from_edges(3, {0, 1, 2}, {{0, 1, 0}, {0, 2, 1}, {1, 2, 2}});
    CHECK(verify_rainbow_cycle_all_colours(k3, {0, 1, 2}).ok);
    CHECK(!verify_rainbow_hamilton_path(k3, {0, 1}).ok);
}

TEST_CASE("json round trip") {
    auto g = canonical_one_factorization(8);
    auto text = to_json(g);
    auto h = from_json(text);
    CHECK(h.n() == g.n());
    CHECK(h.colours() == g.colours());
    CHECK(h.edge_list() == g.edge_list());

    CHECK_THROWS(from_json(R"({"n":2,"colours":[0],"edges":[[1,0,0]]})"));
    // Unsorted edge list rejected.
    CHECK_THROWS(from_json(
        R"({"n":4,"colours":[0,1],"edges":[[2,3,0],[0,1,0]]})"));
}

TEST_CASE("perfect matching property over G_D^col") {
    Rng rng(7);
    auto all6 = all_one_factorizations(6);
    for (const auto& g : all6)
        for (int c : g.colours()) {
            // Involution without fixed points over all vertices.
            for (int v = 0; v < g.n(); ++v) {
                int u = g.nbr_raw(v, c);
                CHECK(u != ColouredGraph::absent);
                CHECK(u != v);
                CHECK(g.nbr_raw(u, c) == v);
            }
        }
}

TEST_CASE("colour partition equitable") {
    std::vector<int> ds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    auto p = ColourPartition::equitable(ds);
    CHECK_NOTHROW(p.validate(ds));
    std::size_t mn = 99, mx = 0;
    for (auto& part : p.parts) {
        mn = std::min(mn, part.size());
        mx = std::max(mx, part.size());
    }
    CHECK(mx - mn <= 1);
    CHECK(p.part_of(0) == 0);
    CHECK(p.part_of(9) == 3);
    CHECK(p.part_of(42) == -1);
}
