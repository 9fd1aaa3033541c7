#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rainbow/coloured_graph.hpp"
#include "rainbow/rng.hpp"

namespace rainbow {

/// Circle-method 1-factorization of K_n (n even): one vertex sits at the hub,
/// the rest rotate.
ColouredGraph canonical_one_factorization(int n);

/// Vertices are k-bit vectors; edge xy gets the colour indexed by x^y. For
/// every power of two this is a valid 1-factorization; at n=4 and n=8 it has
/// no rainbow Hamilton path. Colour ids are (x^y)-1 so the set is 0..n-2.
ColouredGraph xor_factorization(int n);

/// Extends an optimal colouring of K_n (n odd, n colours, classes of size
/// (n-1)/2) to a 1-factorization of K_{n+1} by giving a new vertex the
/// missing colour at each old vertex. Bijective; even_to_odd inverts it by
/// deleting the top vertex.
ColouredGraph odd_to_even(const ColouredGraph& odd);
ColouredGraph even_to_odd(const ColouredGraph& even);

/// Hard cap for the exact enumeration; cost explodes beyond K_8.
constexpr int kEnumMaxN = 8;

/// Calls fn once per distinct labelled 1-factorization of K_n, where distinct
/// means distinct unordered sets of perfect matchings. Colour ids are
/// canonical: classes ordered by their minimum edge, so the class containing
/// {0,j} gets colour j-1. Deterministic order.
void enumerate_one_factorizations(int n, const std::function<void(const ColouredGraph&)>& fn);

std::uint64_t count_one_factorizations(int n);

/// Independent second counting route: precomputes every perfect matching of
/// K_n and counts exact covers of the edge set by n-1 of them.
std::uint64_t count_one_factorizations_exact_cover(int n);

/// Materializes the full enumeration (small n only).
std::vector<ColouredGraph> all_one_factorizations(int n);

/// Exactly uniform over the enumeration, by index sampling.
ColouredGraph uniform_sample_small(int n, Rng& rng);
ColouredGraph uniform_sample_from(const std::vector<ColouredGraph>& all, Rng& rng);

/// Class-by-class randomized construction: each colour class is a random
/// perfect matching of the uncovered pairs, repaired by augmenting swaps when
/// the greedy pairing sticks. Fast and unstructured, but makes no uniformity
/// claim; the exact sampler above is the uniform one.
ColouredGraph random_one_factorization(int n, Rng& rng);

} // namespace rainbow
