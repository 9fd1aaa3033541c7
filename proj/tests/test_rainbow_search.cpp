#include "doctest.h"

#include <algorithm>
#include <set>

#include "rainbow/latin.hpp"
#include "rainbow/rainbow_search.hpp"
#include "support.hpp"

using namespace rainbow;
using namespace testsupport;

namespace {

// Naive oracle: tries every permutation of the vertex set.
bool permutation_oracle_has_rainbow_hamilton_path(const ColouredGraph& g) {
    std::vector<int> perm(g.n());
    std::iota(perm.begin(), perm.end(), 0);
    do {
        if (verify_rainbow_hamilton_path(g, perm)) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

} // namespace

TEST_CASE("exact search on tiny graphs") {
    auto k2 = canonical_one_factorization(2);
    auto r = exact_rainbow_hamilton_path(k2);
    REQUIRE(r.outcome == SearchOutcome::Found);
    CHECK(verify_rainbow_hamilton_path(k2, r.path));
}

TEST_CASE("xor factorizations have no rainbow Hamilton path") {
    auto x4 = xor_factorization(4);
    auto r4 = exact_rainbow_hamilton_path(x4);
    CHECK(r4.outcome == SearchOutcome::None);
    CHECK(!permutation_oracle_has_rainbow_hamilton_path(x4));

    auto x8 = xor_factorization(8);
    auto r8 = exact_rainbow_hamilton_path(x8);
    CHECK(r8.outcome == SearchOutcome::None);
}

TEST_CASE("exact search agrees with the permutation oracle on all of K_6") {
    for (const auto& g : all_one_factorizations(6)) {
        auto mine = exact_rainbow_hamilton_path(g);
        bool oracle = permutation_oracle_has_rainbow_hamilton_path(g);
        CHECK((mine.outcome == SearchOutcome::Found) == oracle);
        if (mine.outcome == SearchOutcome::Found)
            CHECK(verify_rainbow_hamilton_path(g, mine.path));
    }
}

TEST_CASE("andersen-length search") {
    auto x4 = xor_factorization(4);
    auto r = exact_andersen_path(x4);
    REQUIRE(r.outcome == SearchOutcome::Found);
    CHECK((int)r.path.size() == 3);
    CHECK(verify_rainbow_path(x4, r.path));

    // Monotone weakening: anything with a Hamilton path has an Andersen path.
    Rng rng(51);
    auto g = random_full(8, rng);
    auto full = exact_rainbow_hamilton_path(g);
    if (full.outcome == SearchOutcome::Found) {
        auto shorter = exact_andersen_path(g);
        CHECK(shorter.outcome == SearchOutcome::Found);
    }

    // Regression value for the xor instance at n=8.
    auto x8 = xor_factorization(8);
    auto r8 = exact_andersen_path(x8);
    CHECK(r8.outcome == SearchOutcome::Found);
}

TEST_CASE("exact all-colour cycle") {
    // Odd optimal colourings: all colours means Hamilton.
    auto k5 = cyclic_odd_colouring(5);
    auto r = exact_all_colour_cycle(k5);
    if (r.outcome == SearchOutcome::Found)
        CHECK(verify_rainbow_cycle_all_colours(k5, r.path));

    // Even orders omit exactly one vertex.
    Rng rng(52);
    auto g = random_full(10, rng);
    auto c = exact_all_colour_cycle(g);
    if (c.outcome == SearchOutcome::Found) {
        CHECK((int)c.path.size() == 9);
        CHECK(verify_rainbow_cycle_all_colours(g, c.path));
    }
}

TEST_CASE("long rainbow path") {
    auto g = canonical_one_factorization(20);
    SliceView all = SliceView::everything(g);
    Rng rng(53);
    auto lp = long_rainbow_path(g, all, 50, rng);
    CHECK(verify_rainbow_path(g, lp.path));
    CHECK(lp.remainder_vertices == 20 - (int)lp.path.size());

    // Single allowed vertex: a zero-length path with no remainder.
    SliceView one = SliceView::everything(g);
    for (int v = 1; v < 20; ++v) one.vertex_ok[v] = 0;
    auto single = long_rainbow_path(g, one, 5, rng);
    CHECK(single.path == std::vector<int>{0});
    CHECK(single.remainder_vertices == 0);

    // Kept-best monotone in the restart budget for a fixed seed.
    auto big = canonical_one_factorization(60);
    SliceView slice = SliceView::everything(big);
    int prev = 1 << 30;
    for (int budget : {5, 20, 80}) {
        Rng r2(99);
        auto res = long_rainbow_path(big, slice, budget, r2);
        CHECK(res.remainder_vertices <= prev);
        prev = res.remainder_vertices;
    }

    // Slice containment: everything stays inside the given sets.
    Rng r3(54);
    auto part_g = canonical_one_factorization(16);
    SliceView half = SliceView::everything(part_g);
    for (int v = 8; v < 16; ++v) half.vertex_ok[v] = 0;
    for (int c = 8; c < 15; ++c) half.colour_ok[c] = 0;
    auto res = long_rainbow_path(part_g, half, 30, r3);
    for (int v : res.path) CHECK(v < 8);
    for (std::size_t i = 0; i + 1 < res.path.size(); ++i)
        CHECK(part_g.edge_colour(res.path[i], res.path[i + 1]) < 8);
}

TEST_CASE("full pipeline on small even orders") {
    Rng rng(55);
    int verified = 0;
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        auto g = uniform_sample_small(8, rng);
        PipelineOptions opts;
        auto rep = full_pipeline(g, opts, seed);
        // The absorber route cannot fit at n=8; the report must say so and
        // the fallback must still verify anything it returns.
        CHECK(!rep.stages.empty());
        if (rep.outcome == "hamilton_path") {
            CHECK(rep.verified);
            CHECK(verify_rainbow_hamilton_path(g, rep.path));
            ++verified;
        }
    }
    CHECK(verified >= 1); // xor-style obstructions are rare among samples

    // Determinism: identical seeds give identical reports.
    auto g = canonical_one_factorization(10);
    PipelineOptions opts;
    auto a = full_pipeline(g, opts, 7);
    auto b = full_pipeline(g, opts, 7);
    CHECK(a.outcome == b.outcome);
    CHECK(a.path == b.path);
}

TEST_CASE("full pipeline on odd orders") {
    Rng rng(56);
    auto odd = even_to_odd(jm_square_walk(canonical_one_factorization(10), 300, rng));
    PipelineOptions opts;
    auto rep = full_pipeline(odd, opts, 3);
    CHECK(rep.odd_input);
    if (rep.outcome == "hamilton_path") {
        CHECK(rep.verified);
        CHECK(verify_rainbow_hamilton_path(odd, rep.path));
    }
    PipelineOptions copts;
    copts.cycle_mode = true;
    auto crep = full_pipeline(odd, copts, 3);
    if (crep.outcome == "all_colour_cycle") {
        CHECK(crep.verified);
        CHECK(verify_rainbow_cycle_all_colours(odd, crep.path));
        CHECK((int)crep.path.size() == 9); // Hamilton cycle of the odd graph
    }
}
