#include "rainbow/factorgen.hpp"

#include <algorithm>
#include <stdexcept>

namespace rainbow {

ColouredGraph canonical_one_factorization(int n) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("n must be even and >= 2");
    std::vector<int> colours(n - 1);
    for (int c = 0; c < n - 1; ++c) colours[c] = c;
    std::vector<std::array<int, 3>> edges;
    int m = n - 1; // rotating vertices 0..m-1, hub is n-1
    for (int r = 0; r < m; ++r) {
        edges.push_back({std::min(r, n - 1), std::max(r, n - 1), r});
        for (int i = 1; i <= (n - 2) / 2; ++i) {
            int u = (r + i) % m, v = (r - i + 2 * m) % m;
            edges.push_back({std::min(u, v), std::max(u, v), r});
        }
    }
    auto g = ColouredGraph::from_edges(n, colours, edges);
    g.validate_full();
    return g;
}

ColouredGraph xor_factorization(int n) {
    if (n < 4 || (n & (n - 1)) != 0)
        throw std::invalid_argument("n must be a power of 2, n >= 4");
    std::vector<int> colours(n - 1);
    for (int c = 0; c < n - 1; ++c) colours[c] = c;
    std::vector<std::array<int, 3>> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) edges.push_back({u, v, (u ^ v) - 1});
    auto g = ColouredGraph::from_edges(n, colours, edges);
    g.validate_full();
    return g;
}

ColouredGraph odd_to_even(const ColouredGraph& odd) {
    odd.validate_odd_optimal();
    int n = odd.n();
    auto edges = odd.edge_list();
    for (int v = 0; v < n; ++v) {
        int missing = ColouredGraph::absent;
        for (int c : odd.colours())
            if (odd.nbr_raw(v, c) == ColouredGraph::absent) {
                if (missing != ColouredGraph::absent)
                    throw std::invalid_argument("vertex " + std::to_string(v) +
                                                " misses more than one colour");
                missing = c;
            }
        edges.push_back({v, n, missing});
    }
    std::sort(edges.begin(), edges.end());
    auto g = ColouredGraph::from_edges(n + 1, odd.colours(), edges);
    g.validate_full();
    return g;
}

ColouredGraph even_to_odd(const ColouredGraph& even) {
    even.validate_full();
    int n = even.n();
    std::vector<std::array<int, 3>> edges;
    for (const auto& e : even.edge_list())
        if (e[1] != n - 1) edges.push_back(e);
    auto g = ColouredGraph::from_edges(n - 1, even.colours(), edges);
    g.validate_odd_optimal();
    return g;
}

namespace {

// Enumeration state over K_n: edges are covered one perfect matching at a
// time, each matching forced to contain the smallest uncovered pair, so every
// unordered set of matchings is produced exactly once.
struct EnumState {
    int n;
    std::vector<char> covered;                    // pair -> already in a chosen matching
    std::vector<std::vector<std::pair<int, int>>> chosen;
    const std::function<void(const ColouredGraph&)>* emit;
    std::uint64_t count = 0;

    int pair_id(int u, int v) const { return u * n + v; }

    void run() {
        chosen.clear();
        recurse();
    }

    void recurse() {
        int fu = -1, fv = -1;
        for (int u = 0; u < n && fu < 0; ++u)
            for (int v = u + 1; v < n; ++v)
                if (!covered[pair_id(u, v)]) {
                    fu = u;
                    fv = v;
                    break;
                }
        if (fu < 0) {
            ++count;
            if (emit) emit_current();
            return;
        }
        std::vector<char> used(n, 0);
        std::vector<std::pair<int, int>> matching;
        used[fu] = used[fv] = 1;
        matching.push_back({fu, fv});
        extend_matching(used, matching);
    }

    // Completes the current matching over the uncovered pairs, pairing the
    // smallest unused vertex each time.
    void extend_matching(std::vector<char>& used, std::vector<std::pair<int, int>>& matching) {
        int u = -1;
        for (int i = 0; i < n; ++i)
            if (!used[i]) {
                u = i;
                break;
            }
        if (u < 0) {
            for (auto [a, b] : matching) covered[pair_id(a, b)] = 1;
            chosen.push_back(matching);
            recurse();
            chosen.pop_back();
            for (auto [a, b] : matching) covered[pair_id(a, b)] = 0;
            return;
        }
        used[u] = 1;
        for (int v = u + 1; v < n; ++v) {
            if (used[v] || covered[pair_id(u, v)]) continue;
            used[v] = 1;
            matching.push_back({u, v});
            extend_matching(used, matching);
            matching.pop_back();
            used[v] = 0;
        }
        used[u] = 0;
    }

    void emit_current() {
        // Matching i was forced to contain {0, x_i}; ordering by that minimum
        // edge is the colour canonicalization.
        std::vector<std::pair<std::pair<int, int>, int>> order;
        for (std::size_t i = 0; i < chosen.size(); ++i) order.push_back({chosen[i][0], (int)i});
        std::sort(order.begin(), order.end());
        std::vector<std::array<int, 3>> edges;
        std::vector<int> colours;
        for (std::size_t c = 0; c < order.size(); ++c) {
            colours.push_back((int)c);
            for (auto [a, b] : chosen[order[c].second]) edges.push_back({a, b, (int)c});
        }
        auto g = ColouredGraph::from_edges(n, colours, edges);
        (*emit)(g);
    }
};

void check_enum_n(int n) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("n must be even and >= 2");
    if (n > kEnumMaxN)
        throw std::invalid_argument("exact enumeration is capped at n = " +
                                    std::to_string(kEnumMaxN) +
                                    "; the search space beyond K_8 is out of reach");
}

} // namespace

void enumerate_one_factorizations(int n, const std::function<void(const ColouredGraph&)>& fn) {
    check_enum_n(n);
    EnumState st;
    st.n = n;
    st.covered.assign((std::size_t)n * n, 0);
    st.emit = &fn;
    st.run();
}

std::uint64_t count_one_factorizations(int n) {
    check_enum_n(n);
    EnumState st;
    st.n = n;
    st.covered.assign((std::size_t)n * n, 0);
    st.emit = nullptr;
    st.run();
    return st.count;
}

std::uint64_t count_one_factorizations_exact_cover(int n) {
    check_enum_n(n);
    // Pair ids in lexicographic order; a perfect matching is a bitmask over
    // the n(n-1)/2 pairs.
    int m = n * (n - 1) / 2;
    if (m > 63) throw std::invalid_argument("edge set too large for mask-based cover");
    std::vector<std::vector<int>> pid(n, std::vector<int>(n, -1));
    int next = 0;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) pid[u][v] = next++;

    std::vector<std::uint64_t> matchings;
    std::vector<int> partner(n, -1);
    std::function<void(int, std::uint64_t)> gen = [&](int depth, std::uint64_t mask) {
        int u = -1;
        for (int i = 0; i < n; ++i)
            if (partner[i] < 0) {
                u = i;
                break;
            }
        if (u < 0) {
            matchings.push_back(mask);
            return;
        }
        for (int v = u + 1; v < n; ++v) {
            if (partner[v] >= 0) continue;
            partner[u] = v;
            partner[v] = u;
            gen(depth + 1, mask | (1ull << pid[u][v]));
            partner[u] = partner[v] = -1;
        }
    };
    gen(0, 0);

    std::uint64_t full = m == 63 ? ~0ull : ((1ull << m) - 1);
    // Exact cover: always branch on the lowest uncovered pair.
    std::function<std::uint64_t(std::uint64_t)> cover = [&](std::uint64_t got) -> std::uint64_t {
        if (got == full) return 1;
        std::uint64_t missing = full & ~got;
        int low = __builtin_ctzll(missing);
        std::uint64_t total = 0;
        for (std::uint64_t pm : matchings)
            if ((pm >> low & 1ull) && (pm & got) == 0) total += cover(got | pm);
        return total;
    };
    return cover(0);
}

std::vector<ColouredGraph> all_one_factorizations(int n) {
    std::vector<ColouredGraph> out;
    enumerate_one_factorizations(n, [&](const ColouredGraph& g) { out.push_back(g); });
    return out;
}

ColouredGraph uniform_sample_from(const std::vector<ColouredGraph>& all, Rng& rng) {
    if (all.empty()) throw std::invalid_argument("empty enumeration");
    return all[(std::size_t)rng.below(all.size())];
}

ColouredGraph uniform_sample_small(int n, Rng& rng) {
    auto all = all_one_factorizations(n);
    return uniform_sample_from(all, rng);
}

ColouredGraph random_one_factorization(int n, Rng& rng) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("n must be even and >= 2");
    if (n == 2) return canonical_one_factorization(2);
    int nc = n - 1;
    // Hill climbing: colour a random uncoloured pair with a colour missing at
    // one end, stealing the conflicting edge at the other end if needed. The
    // coloured count never drops, and the walk completes quickly in practice.
    for (int attempt = 0; attempt < 20; ++attempt) {
        std::vector<int> nbr((std::size_t)n * nc, -1);
        std::vector<std::vector<int>> missing(n);
        for (int v = 0; v < n; ++v) {
            missing[v].resize(nc);
            std::iota(missing[v].begin(), missing[v].end(), 0);
        }
        std::vector<std::pair<int, int>> open;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) open.push_back({u, v});
        auto miss_erase = [&](int v, int c) {
            auto& m = missing[v];
            for (std::size_t i = 0; i < m.size(); ++i)
                if (m[i] == c) {
                    m[i] = m.back();
                    m.pop_back();
                    return;
                }
        };
        auto set_col = [&](int u, int v, int c) {
            nbr[(std::size_t)u * nc + c] = v;
            nbr[(std::size_t)v * nc + c] = u;
            miss_erase(u, c);
            miss_erase(v, c);
        };
        auto unset_col = [&](int u, int v, int c) {
            nbr[(std::size_t)u * nc + c] = -1;
            nbr[(std::size_t)v * nc + c] = -1;
            missing[u].push_back(c);
            missing[v].push_back(c);
        };
        std::int64_t budget = (std::int64_t)n * n * 64 + 200000;
        while (!open.empty() && budget-- > 0) {
            std::size_t i = (std::size_t)rng.below(open.size());
            auto [u, v] = open[i];
            if (rng.below(2)) std::swap(u, v);
            if (missing[u].empty()) continue;
            int c = missing[u][(std::size_t)rng.below(missing[u].size())];
            int b = nbr[(std::size_t)v * nc + c];
            open[i] = open.back();
            open.pop_back();
            if (b < 0) {
                set_col(u, v, c);
            } else {
                unset_col(v, b, c);
                set_col(u, v, c);
                open.push_back({std::min(v, b), std::max(v, b)});
            }
        }
        if (!open.empty()) continue;
        std::vector<std::array<int, 3>> edges;
        for (int u = 0; u < n; ++u)
            for (int c = 0; c < nc; ++c) {
                int v = nbr[(std::size_t)u * nc + c];
                if (v > u) edges.push_back({u, v, c});
            }
        std::vector<int> colours(nc);
        std::iota(colours.begin(), colours.end(), 0);
        std::sort(edges.begin(), edges.end());
        auto g = ColouredGraph::from_edges(n, colours, edges);
        g.validate_full();
        return g;
    }
    throw std::runtime_error("random factorization did not complete; retry with another seed");
}

} // namespace rainbow
