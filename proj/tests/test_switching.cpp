#include "doctest.h"

#include <algorithm>
#include <map>
#include <set>

#include "rainbow/switching.hpp"
#include "support.hpp"

using namespace rainbow;
using namespace testsupport;

namespace {

std::vector<int> first_k(int k) {
    std::vector<int> v(k);
    for (int i = 0; i < k; ++i) v[i] = i;
    return v;
}

} // namespace

TEST_CASE("spin: validity, count identity, hand-checked instance") {
    Rng rng(5);
    std::vector<int> vprime = first_k(4);
    int checked = 0;
    for (int trial = 0; trial < 40 && checked < 25; ++trial) {
        auto g = random_partial(10, 3, rng);
        auto s = sample_spin(g, vprime, rng);
        if (!s) continue;
        ++checked;
        auto before = g.count_edges_within(vprime, g.colours());
        auto out = apply_spin(g, *s);
        CHECK_NOTHROW(out.validate_gdcol());
        CHECK(out.count_edges_within(vprime, out.colours()) == before + 1);
    }
    CHECK(checked >= 10);

    // Hand-built 8-vertex instance with three colours; the spin trades
    // {vw, xy, zu} for {uv, wx, yz} inside colour 0.
    std::vector<std::array<int, 3>> edges = {
        {0, 4, 0}, {1, 5, 0}, {2, 6, 0}, {3, 7, 0},
        {0, 2, 1}, {1, 3, 1}, {4, 6, 1}, {5, 7, 1},
        {0, 3, 2}, {1, 2, 2}, {4, 5, 2}, {6, 7, 2},
    };
    auto g = ColouredGraph::from_edges(8, {0, 1, 2}, edges);
    SpinSystem s{/*u=*/0, /*v=*/1, /*w=*/5, /*x=*/6, /*y=*/2, /*z=*/4, {0, 1}};
    REQUIRE(validate_spin(g, s));
    auto out = apply_spin(g, s);
    CHECK(out.edge_colour(0, 1) == 0);
    CHECK(out.edge_colour(5, 6) == 0);
    CHECK(out.edge_colour(2, 4) == 0);
    CHECK(out.edge_colour(1, 5) == ColouredGraph::absent);
    CHECK(out.edge_colour(2, 6) == ColouredGraph::absent);
    CHECK(out.edge_colour(0, 4) == ColouredGraph::absent);
    CHECK(out.edge_colour(0, 2) == 1); // untouched class

    SpinSystem bad = s;
    bad.w = 3; // edge vw gone
    CHECK(!validate_spin(g, bad).ok);
}

TEST_CASE("rotation: validity, crossing decrement, involution") {
    Rng rng(6);
    std::vector<int> sa = {0, 1, 2}, sb = {3, 4, 5};
    int checked = 0;
    for (int trial = 0; trial < 60 && checked < 25; ++trial) {
        auto g = random_partial(12, 4, rng);
        auto r = sample_rotation(g, sa, sb, rng);
        if (!r) continue;
        ++checked;
        auto before = g.crossing_edges(sa, sb);
        auto out = apply_rotation(g, *r);
        CHECK_NOTHROW(out.validate_gdcol());
        CHECK(out.crossing_edges(sa, sb) == before - 1);

        // The touched colour class stays a perfect matching.
        int c = g.edge_colour(r->a, r->b);
        for (int v = 0; v < out.n(); ++v) {
            int u = out.nbr_raw(v, c);
            CHECK(u != ColouredGraph::absent);
            CHECK(out.nbr_raw(u, c) == v);
        }

        // The exchange is reversible: undoing the two-for-two swap restores
        // the original graph exactly.
        auto restored = out;
        restored.unset_edge(r->a, r->w, c);
        restored.unset_edge(r->b, r->v, c);
        restored.set_edge(r->a, r->b, c);
        restored.set_edge(r->v, r->w, c);
        CHECK(restored.edge_list() == g.edge_list());
    }
    CHECK(checked >= 10);
}

TEST_CASE("twist: apply preserves membership and reports the canonical gadget") {
    Rng rng(7);
    int found = 0;
    for (int trial = 0; trial < 30 && found < 8; ++trial) {
        int n = 22, k = 8;
        auto g = random_partial(n, k + 1, rng);
        int c = g.colours()[(std::size_t)rng.below(g.colours().size())];
        std::vector<int> d;
        for (int col : g.colours())
            if (col != c) d.push_back(col);
        auto p = ColourPartition::equitable(d);
        int x = (int)rng.below((std::uint64_t)n);
        auto cands = enumerate_twist_candidates(g, x, c, p);
        if (cands.empty()) continue;
        ++found;
        const auto& t = cands[(std::size_t)rng.below(cands.size())];
        auto out = apply_twist(g, t);
        CHECK_NOTHROW(out.validate_gdcol());

        // Exactly 12 edge slots change, all inside the d3 class.
        int d3 = g.edge_colour(t.at(1), t.at(2));
        auto el1 = g.edge_list();
        auto el2 = out.edge_list();
        std::set<std::array<int, 3>> s1(el1.begin(), el1.end()), s2(el2.begin(), el2.end());
        std::vector<std::array<int, 3>> gone, added;
        for (const auto& e : s1)
            if (!s2.count(e)) gone.push_back(e);
        for (const auto& e : s2)
            if (!s1.count(e)) added.push_back(e);
        CHECK(gone.size() == 6);
        CHECK(added.size() == 6);
        for (const auto& e : gone) CHECK(e[2] == d3);
        for (const auto& e : added) CHECK(e[2] == d3);

        // All canonical gadget edges exist in the output.
        for (const auto& e : canonical_twist_gadget_edges(g, t))
            CHECK(out.edge_colour(e[0], e[1]) == e[2]);
    }
    CHECK(found >= 5);
}

TEST_CASE("twist candidates match the label-scan oracle") {
    Rng rng(8);
    // Small instances (often empty) plus a larger one with real candidates.
    int nonzero = 0;
    for (auto [n, trials] : {std::pair{12, 3}, std::pair{14, 2}, std::pair{20, 2}}) {
        for (int trial = 0; trial < trials; ++trial) {
            auto g = random_partial(n, 9, rng);
            int c = g.colours()[0];
            std::vector<int> d;
            for (int col : g.colours())
                if (col != c) d.push_back(col);
            auto p = ColourPartition::equitable(d);
            for (int x = 0; x < 3; ++x) {
                auto mine = enumerate_twist_candidates(g, x, c, p);
                auto oracle = twist_oracle(g, x, c, p);
                std::set<std::vector<int>> a, b;
                for (const auto& t : mine) a.insert(twist_key(t));
                for (const auto& t : oracle) b.insert(twist_key(t));
                CHECK(a.size() == mine.size()); // enumeration never repeats
                CHECK(a == b);
                for (const auto& t : mine) CHECK(validate_twist(g, t));
                if (!mine.empty()) ++nonzero;
            }
        }
    }
    CHECK(nonzero > 0); // the comparison must bite somewhere

    // A non-equitable partition is rejected.
    auto g = random_partial(12, 5, rng);
    int c = g.colours()[0];
    ColourPartition p;
    std::vector<int> d;
    for (int col : g.colours())
        if (col != c) d.push_back(col);
    p.parts[0] = {d[0]};
    p.parts[1] = {d[1]};
    p.parts[2] = {d[2], d[3]};
    p.parts[3] = {};
    TwistSystem t;
    t.x = 0;
    t.c = c;
    t.partition = p;
    t.u = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 1, 2, 3};
    CHECK(!validate_twist(g, t).ok);
}

TEST_CASE("random switch walk") {
    Rng rng(9);
    auto g = random_partial(10, 2, rng);
    WalkContext ctx;
    ctx.vprime = {0, 1, 2, 3};
    ctx.set_a = {0, 1, 2};
    ctx.set_b = {3, 4, 5};

    auto zero = random_switch_walk(g, {MoveKind::Spin, MoveKind::Rotation}, 0, rng, ctx);
    CHECK(zero.graph.edge_list() == g.edge_list());
    CHECK(zero.steps_applied == 0);

    auto res = random_switch_walk(g, {MoveKind::Spin, MoveKind::Rotation}, 100, rng, ctx);
    CHECK_NOTHROW(res.graph.validate_gdcol());
    if (!res.stalled) CHECK(res.steps_applied == 100);

    // Spin raises e_{V',D} while rotation lowers e(A,B), so the mixed chain
    // keeps finding moves; nearly every 100-step run visits several states.
    int multi = 0;
    for (int run = 0; run < 20; ++run) {
        auto start = random_partial(10, 2, rng);
        std::set<std::string> states = {to_json(start)};
        auto cur = start;
        for (int i = 0; i < 100; ++i) {
            auto step = random_switch_walk(cur, {MoveKind::Spin, MoveKind::Rotation}, 1, rng,
                                           ctx, 500);
            if (step.stalled) break;
            cur = step.graph;
            states.insert(to_json(cur));
        }
        if (states.size() > 1) ++multi;
    }
    CHECK(multi >= 15);

    CHECK_THROWS(random_switch_walk(canonical_one_factorization(6), {MoveKind::Spin}, 1, rng,
                                    ctx)); // full mode rejected
}

TEST_CASE("jm square walk: validity and uniformity at n=6") {
    Rng rng(10);
    auto g = canonical_one_factorization(10);
    auto id = jm_square_walk(g, 0, rng);
    CHECK(id.edge_list() == g.edge_list());

    auto mixed = jm_square_walk(g, 10000, rng);
    CHECK_NOTHROW(mixed.validate_full());

    // Chi-square against the enumeration oracle at n=6.
    auto all = all_one_factorizations(6);
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < all.size(); ++i) index[to_json(all[i])] = (int)i;
    std::map<int, int> freq;
    auto cur = canonical_one_factorization(6);
    int samples = 20000;
    for (int i = 0; i < samples; ++i) {
        cur = jm_square_walk(cur, 5, rng);
        auto it = index.find(to_json(canonical_colour_form(cur)));
        REQUIRE(it != index.end());
        freq[it->second]++;
    }
    CHECK(freq.size() == 6);
    double expect = samples / 6.0, chi2 = 0;
    for (auto& [k, v] : freq) chi2 += (v - expect) * (v - expect) / expect;
    // 5 dof; 99.9th percentile is 20.5. Consecutive samples are correlated,
    // so keep the bar loose.
    CHECK(chi2 < 40.0);
}
