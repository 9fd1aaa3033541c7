#include "doctest.h"

#include <map>
#include <set>

#include "rainbow/factorgen.hpp"
#include "rainbow/switching.hpp"

using namespace rainbow;

TEST_CASE("canonical factorization shapes") {
    CHECK_THROWS(canonical_one_factorization(5));
    auto g2 = canonical_one_factorization(2);
    CHECK(g2.num_colours() == 1);
    CHECK(g2.edge_count() == 1);

    auto g4 = canonical_one_factorization(4);
    CHECK(g4.num_colours() == 3);
    for (int c : g4.colours()) {
        int size = 0;
        for (int v = 0; v < 4; ++v)
            if (g4.nbr_raw(v, c) != ColouredGraph::absent) ++size;
        CHECK(size / 2 == 2);
    }

    auto g6 = canonical_one_factorization(6);
    CHECK_NOTHROW(g6.validate_full());
    CHECK(g6.num_colours() == 5);
    CHECK(g6.edge_count() == 15);
}

TEST_CASE("xor factorization") {
    CHECK_THROWS(xor_factorization(6));
    CHECK_THROWS(xor_factorization(2));
    for (int n : {4, 8, 16}) {
        auto g = xor_factorization(n);
        CHECK_NOTHROW(g.validate_full());
        // Colour of xy is determined by x^y, so properness is structural.
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) CHECK(g.edge_colour(u, v) == (u ^ v) - 1);
    }
}

TEST_CASE("odd/even conversion") {
    // K_3 triangle: unique completion to K_4.
    auto k3 = ColouredGraph::from_edges(3, {0, 1, 2}, {{0, 1, 2}, {0, 2, 1}, {1, 2, 0}});
    auto k4 = odd_to_even(k3);
    CHECK_NOTHROW(k4.validate_full());
    CHECK(k4.n() == 4);
    auto back = even_to_odd(k4);
    CHECK(back.edge_list() == k3.edge_list());

    // Cyclic colouring of K_5 extends to a valid K_6 factorization.
    std::vector<std::array<int, 3>> e5;
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j) e5.push_back({i, j, (i + j) % 5});
    auto k5 = ColouredGraph::from_edges(5, {0, 1, 2, 3, 4}, e5);
    auto k6 = odd_to_even(k5);
    CHECK_NOTHROW(k6.validate_full());
    // The missing colour of vertex v under i+j mod 5 is 2v mod 5.
    for (int v = 0; v < 5; ++v) CHECK(k6.edge_colour(v, 5) == (2 * v) % 5);

    // Round trip both ways over chain-randomized inputs.
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        auto even = jm_square_walk(canonical_one_factorization(8), 50, rng);
        auto odd = even_to_odd(even);
        CHECK(odd_to_even(odd).edge_list() == even.edge_list());
    }

    // Class sizes wrong: a 1-factorization of even order is not odd-optimal.
    CHECK_THROWS(odd_to_even(canonical_one_factorization(6)));
}

TEST_CASE("enumeration counts") {
    CHECK(count_one_factorizations(2) == 1);
    CHECK(count_one_factorizations(4) == 1);
    // Pinned after the first oracle run; the two independent strategies agree.
    CHECK(count_one_factorizations(6) == 6);
    CHECK(count_one_factorizations_exact_cover(6) == 6);
    CHECK_THROWS(count_one_factorizations(10));
}

TEST_CASE("enumeration yields valid canonical graphs") {
    auto all = all_one_factorizations(6);
    CHECK(all.size() == 6);
    std::set<std::string> seen;
    for (const auto& g : all) {
        CHECK_NOTHROW(g.validate_full());
        // Canonical colouring: class containing {0,j} is colour j-1.
        for (int j = 1; j < 6; ++j) CHECK(g.edge_colour(0, j) == j - 1);
        seen.insert(to_json(g));
    }
    CHECK(seen.size() == 6);
}

TEST_CASE("uniform sampling") {
    Rng rng(99);
    auto g = uniform_sample_small(4, rng);
    auto h = uniform_sample_small(4, rng);
    CHECK(to_json(g) == to_json(h)); // unique factorization at n=4
    CHECK_NOTHROW(g.validate_full());

    // Chi-square against the exact enumeration at n=6.
    auto all = all_one_factorizations(6);
    std::map<std::string, int> freq;
    int draws = 10000;
    for (int i = 0; i < draws; ++i) freq[to_json(uniform_sample_from(all, rng))]++;
    CHECK(freq.size() == 6);
    double expect = draws / 6.0;
    double chi2 = 0;
    for (auto& [k, v] : freq) chi2 += (v - expect) * (v - expect) / expect;
    // 5 degrees of freedom; 99.9th percentile is 20.5.
    CHECK(chi2 < 20.5);
}
