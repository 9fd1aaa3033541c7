#include "rainbow/latin.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "rainbow/factorgen.hpp"
#include "rainbow/switching.hpp"

namespace rainbow {

void LatinSquare::validate() const {
    if ((int)grid.size() != n * n) throw std::invalid_argument("grid size mismatch");
    for (int r = 0; r < n; ++r) {
        std::vector<char> row(n, 0), col(n, 0);
        for (int c = 0; c < n; ++c) {
            int s = at(r, c);
            if (s < 0 || s >= n) throw std::invalid_argument("symbol out of range");
            if (row[s]++)
                throw std::invalid_argument("row " + std::to_string(r) + " repeats symbol " +
                                            std::to_string(s + 1));
            int s2 = at(c, r);
            if (col[s2]++)
                throw std::invalid_argument("column " + std::to_string(r) + " repeats symbol " +
                                            std::to_string(s2 + 1));
        }
    }
}

bool LatinSquare::is_symmetric() const {
    for (int r = 0; r < n; ++r)
        for (int c = r + 1; c < n; ++c)
            if (at(r, c) != at(c, r)) return false;
    return true;
}

void LatinSquare::validate_symmetric() const {
    validate();
    if (!is_symmetric()) throw std::invalid_argument("square is not symmetric");
}

std::string LatinSquare::to_text() const {
    std::ostringstream os;
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) os << (c ? " " : "") << at(r, c) + 1;
        os << "\n";
    }
    return os.str();
}

LatinSquare LatinSquare::from_text(const std::string& text) {
    std::istringstream is(text);
    std::vector<int> vals;
    int x;
    while (is >> x) vals.push_back(x - 1);
    LatinSquare l;
    int n = 0;
    while ((std::size_t)n * n < vals.size()) ++n;
    if ((std::size_t)n * n != vals.size())
        throw std::invalid_argument("square text must hold n*n symbols");
    l.n = n;
    l.grid = vals;
    l.validate();
    return l;
}

Transversal Transversal::diagonal(int n) {
    Transversal t;
    t.sigma.resize(n);
    for (int i = 0; i < n; ++i) t.sigma[i] = i;
    return t;
}

LatinSquare square_from_colouring(const ColouredGraph& odd) {
    odd.validate_odd_optimal();
    int n = odd.n();
    // Colour ids must be usable as symbols 0..n-1.
    for (int c : odd.colours())
        if (c < 0 || c >= n)
            throw std::invalid_argument("colour ids must lie in 0..n-1 for the square image");
    LatinSquare l;
    l.n = n;
    l.grid.assign((std::size_t)n * n, -1);
    for (int i = 0; i < n; ++i) {
        std::vector<char> present(n, 0);
        for (int c : odd.colours()) {
            int j = odd.nbr_raw(i, c);
            if (j != ColouredGraph::absent) {
                l.at(i, j) = c;
                present[c] = 1;
            }
        }
        for (int s = 0; s < n; ++s)
            if (!present[s]) l.at(i, i) = s; // the one missing symbol of row i
    }
    l.validate_symmetric();
    return l;
}

ColouredGraph colouring_from_square(const LatinSquare& l) {
    l.validate_symmetric();
    if (l.n % 2 == 0)
        throw std::invalid_argument("only odd symmetric squares correspond to colourings");
    std::vector<int> colours(l.n);
    for (int c = 0; c < l.n; ++c) colours[c] = c;
    std::vector<std::array<int, 3>> edges;
    for (int i = 0; i < l.n; ++i)
        for (int j = i + 1; j < l.n; ++j) edges.push_back({i, j, l.at(i, j)});
    auto g = ColouredGraph::from_edges(l.n, colours, edges);
    g.validate_odd_optimal();
    return g;
}

bool is_transversal(const LatinSquare& l, const Transversal& t) {
    if ((int)t.sigma.size() != l.n) return false;
    std::vector<char> col_seen(l.n, 0), sym_seen(l.n, 0);
    for (int r = 0; r < l.n; ++r) {
        int c = t.sigma[r];
        if (c < 0 || c >= l.n || col_seen[c]) return false;
        col_seen[c] = 1;
        int s = l.at(r, c);
        if (sym_seen[s]) return false;
        sym_seen[s] = 1;
    }
    return true;
}

bool is_hamilton_transversal(const LatinSquare& l, const Transversal& t) {
    if (!is_transversal(l, t)) return false;
    // The underlying permutation must be one n-cycle.
    int count = 0, cur = 0;
    do {
        cur = t.sigma[cur];
        ++count;
    } while (cur != 0 && count <= l.n);
    return count == l.n;
}

std::pair<Transversal, Transversal> transversals_from_cycle(const LatinSquare& l,
                                                            const std::vector<int>& cycle) {
    auto g = colouring_from_square(l);
    if (auto r = verify_rainbow_cycle_all_colours(g, cycle); !r)
        throw std::invalid_argument("cycle rejected: " + r.reason);
    if ((int)cycle.size() != l.n)
        throw std::invalid_argument("cycle must visit every vertex");
    Transversal fwd, bwd;
    fwd.sigma.assign(l.n, -1);
    bwd.sigma.assign(l.n, -1);
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        int a = cycle[i], b = cycle[(i + 1) % cycle.size()];
        fwd.sigma[a] = b;
        bwd.sigma[b] = a;
    }
    return {fwd, bwd};
}

ColouredGraph cyclic_odd_colouring(int n) {
    if (n < 3 || n % 2 == 0) throw std::invalid_argument("n must be odd and >= 3");
    std::vector<int> colours(n);
    for (int c = 0; c < n; ++c) colours[c] = c;
    std::vector<std::array<int, 3>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.push_back({i, j, (i + j) % n});
    auto g = ColouredGraph::from_edges(n, colours, edges);
    g.validate_odd_optimal();
    return g;
}

LatinSquare random_symmetric_square(int n, std::int64_t steps, Rng& rng) {
    auto odd = cyclic_odd_colouring(n);
    auto even = odd_to_even(odd);
    auto mixed = jm_square_walk(even, steps, rng);
    auto back = even_to_odd(mixed);
    auto l = square_from_colouring(back);
    l.validate_symmetric();
    return l;
}

} // namespace rainbow
