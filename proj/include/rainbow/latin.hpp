#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rainbow/coloured_graph.hpp"
#include "rainbow/rng.hpp"

namespace rainbow {

/// n x n Latin square, symbols stored 0-based; text I/O is 1-based.
struct LatinSquare {
    int n = 0;
    std::vector<int> grid; // row-major

    int at(int r, int c) const { return grid[(std::size_t)r * n + c]; }
    int& at(int r, int c) { return grid[(std::size_t)r * n + c]; }

    void validate() const;           // Latin property
    void validate_symmetric() const; // additionally grid == transpose
    bool is_symmetric() const;

    std::string to_text() const; // n lines of n space-separated 1-based symbols
    static LatinSquare from_text(const std::string& text);
};

/// Positions (i, sigma(i)); Hamilton when sigma is a single n-cycle.
struct Transversal {
    std::vector<int> sigma; // row -> column

    static Transversal diagonal(int n);
};

/// Symbol phi(ij) goes to positions (i,j) and (j,i); the diagonal entry of
/// row i is the one symbol missing from that row. Bijective with optimal
/// colourings of odd complete graphs.
LatinSquare square_from_colouring(const ColouredGraph& odd);
ColouredGraph colouring_from_square(const LatinSquare& l);

bool is_transversal(const LatinSquare& l, const Transversal& t);
bool is_hamilton_transversal(const LatinSquare& l, const Transversal& t);

/// The two orientation-induced transversals of a rainbow Hamilton cycle of
/// the square's colouring. Both are Hamilton, disjoint from each other and
/// from the diagonal. Throws when the cycle does not verify.
std::pair<Transversal, Transversal> transversals_from_cycle(const LatinSquare& l,
                                                            const std::vector<int>& cycle);

/// Chain-randomized symmetric square: cyclic start, lifted to the even
/// 1-factorization, mixed by the symbol-pair walk, mapped back. Uniformity is
/// not claimed.
LatinSquare random_symmetric_square(int n, std::int64_t steps, Rng& rng);

/// Cyclic optimal colouring of odd K_n: edge ij gets colour (i+j) mod n.
ColouredGraph cyclic_odd_colouring(int n);

} // namespace rainbow
