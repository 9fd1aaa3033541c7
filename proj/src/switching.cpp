#include "rainbow/switching.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace rainbow {

namespace {

std::string vname(const char* role, int v) {
    return std::string(role) + "=" + std::to_string(v);
}

VerifyResult need_edge(const ColouredGraph& g, int u, int v, const char* what) {
    if (!g.has_edge(u, v))
        return VerifyResult::fail(std::string("required edge ") + what + " {" +
                                  std::to_string(u) + "," + std::to_string(v) + "} absent");
    return VerifyResult::pass();
}

VerifyResult need_nonedge(const ColouredGraph& g, int u, int v, const char* what) {
    if (u == v || g.has_edge(u, v))
        return VerifyResult::fail(std::string("required non-edge ") + what + " {" +
                                  std::to_string(u) + "," + std::to_string(v) + "} present");
    return VerifyResult::pass();
}

VerifyResult all_distinct(const std::vector<int>& vs, int n) {
    std::set<int> seen;
    for (int v : vs) {
        if (v < 0 || v >= n) return VerifyResult::fail(vname("vertex", v) + " out of range");
        if (!seen.insert(v).second)
            return VerifyResult::fail("label collision at vertex " + std::to_string(v));
    }
    return VerifyResult::pass();
}

} // namespace

VerifyResult validate_spin(const ColouredGraph& g, const SpinSystem& s) {
    if (auto r = all_distinct({s.u, s.v, s.w, s.x, s.y, s.z}, g.n()); !r) return r;
    std::vector<char> in(g.n(), 0);
    for (int t : s.vprime) {
        if (t < 0 || t >= g.n()) return VerifyResult::fail("V' vertex out of range");
        in[t] = 1;
    }
    if (!in[s.u] || !in[s.v]) return VerifyResult::fail("u and v must lie in V'");
    for (int t : {s.w, s.x, s.y, s.z})
        if (in[t]) return VerifyResult::fail(vname("outside vertex", t) + " lies in V'");
    if (auto r = need_edge(g, s.v, s.w, "vw"); !r) return r;
    if (auto r = need_edge(g, s.x, s.y, "xy"); !r) return r;
    if (auto r = need_edge(g, s.z, s.u, "zu"); !r) return r;
    int c = g.edge_colour(s.v, s.w);
    if (g.edge_colour(s.x, s.y) != c || g.edge_colour(s.z, s.u) != c)
        return VerifyResult::fail("edges vw, xy, zu do not share a colour");
    if (auto r = need_nonedge(g, s.u, s.v, "uv"); !r) return r;
    if (auto r = need_nonedge(g, s.w, s.x, "wx"); !r) return r;
    if (auto r = need_nonedge(g, s.y, s.z, "yz"); !r) return r;
    return VerifyResult::pass();
}

ColouredGraph apply_spin(const ColouredGraph& g, const SpinSystem& s) {
    if (auto r = validate_spin(g, s); !r) throw std::invalid_argument("invalid spin: " + r.reason);
    int c = g.edge_colour(s.v, s.w);
    ColouredGraph out = g;
    out.unset_edge(s.v, s.w, c);
    out.unset_edge(s.x, s.y, c);
    out.unset_edge(s.z, s.u, c);
    out.set_edge(s.u, s.v, c);
    out.set_edge(s.w, s.x, c);
    out.set_edge(s.y, s.z, c);
    return out;
}

VerifyResult validate_rotation(const ColouredGraph& g, const RotationSystem& r) {
    if (auto res = all_distinct({r.a, r.b, r.v, r.w}, g.n()); !res) return res;
    std::vector<char> ina(g.n(), 0), inb(g.n(), 0);
    for (int t : r.set_a) {
        if (t < 0 || t >= g.n()) return VerifyResult::fail("A vertex out of range");
        ina[t] = 1;
    }
    for (int t : r.set_b) {
        if (t < 0 || t >= g.n()) return VerifyResult::fail("B vertex out of range");
        inb[t] = 1;
    }
    if (!ina[r.a]) return VerifyResult::fail("a must lie in A");
    if (!inb[r.b]) return VerifyResult::fail("b must lie in B");
    for (int t : {r.v, r.w})
        if (ina[t] || inb[t])
            return VerifyResult::fail(vname("outside vertex", t) + " lies in A u B");
    if (auto res = need_edge(g, r.a, r.b, "ab"); !res) return res;
    if (auto res = need_edge(g, r.v, r.w, "vw"); !res) return res;
    if (g.edge_colour(r.a, r.b) != g.edge_colour(r.v, r.w))
        return VerifyResult::fail("edges ab and vw do not share a colour");
    if (auto res = need_nonedge(g, r.a, r.w, "aw"); !res) return res;
    if (auto res = need_nonedge(g, r.b, r.v, "bv"); !res) return res;
    return VerifyResult::pass();
}

ColouredGraph apply_rotation(const ColouredGraph& g, const RotationSystem& r) {
    if (auto res = validate_rotation(g, r); !res)
        throw std::invalid_argument("invalid rotation: " + res.reason);
    int c = g.edge_colour(r.a, r.b);
    ColouredGraph out = g;
    out.unset_edge(r.a, r.b, c);
    out.unset_edge(r.v, r.w, c);
    out.set_edge(r.a, r.w, c);
    out.set_edge(r.b, r.v, c);
    return out;
}

VerifyResult validate_twist(const ColouredGraph& g, const TwistSystem& t) {
    std::vector<int> labels = {t.x};
    for (int v : t.u) labels.push_back(v);
    if (auto r = all_distinct(labels, g.n()); !r) return r;
    if (!g.has_colour(t.c)) return VerifyResult::fail("colour c not in the colour set");
    std::vector<int> d;
    for (int c : g.colours())
        if (c != t.c) d.push_back(c);
    try {
        t.partition.validate(d);
    } catch (const std::exception& e) {
        return VerifyResult::fail(std::string("bad colour partition: ") + e.what());
    }

    auto colour_in = [&](int a, int b, int part, const char* what) -> VerifyResult {
        if (auto r = need_edge(g, a, b, what); !r) return r;
        int c = g.edge_colour(a, b);
        if (t.partition.part_of(c) != part)
            return VerifyResult::fail(std::string("edge ") + what + " has colour " +
                                      std::to_string(c) + " outside D" + std::to_string(part + 1));
        return VerifyResult::pass();
    };

    // (ii) and (iii): the D1 and D2 pairs agree in colour.
    if (auto r = colour_in(t.at(5), t.at(7), 0, "u5u7"); !r) return r;
    if (auto r = colour_in(t.x, t.at(9), 0, "xu9"); !r) return r;
    if (g.edge_colour(t.at(5), t.at(7)) != g.edge_colour(t.x, t.at(9)))
        return VerifyResult::fail("colours of u5u7 and xu9 differ");
    if (auto r = colour_in(t.at(6), t.at(8), 1, "u6u8"); !r) return r;
    if (auto r = colour_in(t.x, t.at(10), 1, "xu10"); !r) return r;
    if (g.edge_colour(t.at(6), t.at(8)) != g.edge_colour(t.x, t.at(10)))
        return VerifyResult::fail("colours of u6u8 and xu10 differ");

    // (iv): six D3 edges of one colour.
    const std::array<std::pair<int, int>, 6> d3edges = {
        std::pair{t.at(1), t.at(2)},  {t.at(3), t.at(5)},   {t.at(4), t.at(6)},
        {t.at(9), t.at(11)},          {t.at(10), t.at(12)}, {t.at(13), t.at(14)}};
    if (auto r = colour_in(d3edges[0].first, d3edges[0].second, 2, "u1u2"); !r) return r;
    int d3 = g.edge_colour(t.at(1), t.at(2));
    const char* names3[] = {"u1u2", "u3u5", "u4u6", "u9u11", "u10u12", "u13u14"};
    for (int i = 1; i < 6; ++i) {
        if (auto r = need_edge(g, d3edges[i].first, d3edges[i].second, names3[i]); !r) return r;
        if (g.edge_colour(d3edges[i].first, d3edges[i].second) != d3)
            return VerifyResult::fail(std::string("edge ") + names3[i] +
                                      " does not carry the shared D3 colour");
    }

    // (v) and (vi).
    if (auto r = colour_in(t.at(7), t.x, 3, "u7x"); !r) return r;
    if (auto r = need_edge(g, t.at(7), t.at(8), "u7u8"); !r) return r;
    if (g.edge_colour(t.at(7), t.at(8)) != t.c)
        return VerifyResult::fail("edge u7u8 does not carry colour c");

    // (vii): the six pairs the twist will fill must be absent.
    const std::array<std::pair<int, int>, 6> gaps = {
        std::pair{t.at(1), t.at(3)}, {t.at(2), t.at(4)},   {t.at(5), t.at(6)},
        {t.at(9), t.at(10)},         {t.at(11), t.at(13)}, {t.at(12), t.at(14)}};
    const char* gnames[] = {"u1u3", "u2u4", "u5u6", "u9u10", "u11u13", "u12u14"};
    for (int i = 0; i < 6; ++i)
        if (auto r = need_nonedge(g, gaps[i].first, gaps[i].second, gnames[i]); !r) return r;
    return VerifyResult::pass();
}

ColouredGraph apply_twist(const ColouredGraph& g, const TwistSystem& t) {
    if (auto r = validate_twist(g, t); !r)
        throw std::invalid_argument("invalid twist: " + r.reason);
    int d3 = g.edge_colour(t.at(1), t.at(2));
    ColouredGraph out = g;
    out.unset_edge(t.at(1), t.at(2), d3);
    out.unset_edge(t.at(3), t.at(5), d3);
    out.unset_edge(t.at(4), t.at(6), d3);
    out.unset_edge(t.at(9), t.at(11), d3);
    out.unset_edge(t.at(10), t.at(12), d3);
    out.unset_edge(t.at(13), t.at(14), d3);
    out.set_edge(t.at(1), t.at(3), d3);
    out.set_edge(t.at(2), t.at(4), d3);
    out.set_edge(t.at(5), t.at(6), d3);
    out.set_edge(t.at(9), t.at(10), d3);
    out.set_edge(t.at(11), t.at(13), d3);
    out.set_edge(t.at(12), t.at(14), d3);
    return out;
}

std::vector<std::array<int, 3>> canonical_twist_gadget_edges(const ColouredGraph& g,
                                                             const TwistSystem& t) {
    int d1 = g.edge_colour(t.at(5), t.at(7));
    int d2 = g.edge_colour(t.at(6), t.at(8));
    int d3 = g.edge_colour(t.at(1), t.at(2));
    int d4 = g.edge_colour(t.at(7), t.x);
    return {{t.at(5), t.at(6), d3}, {t.at(5), t.at(7), d1}, {t.at(6), t.at(8), d2},
            {t.at(7), t.at(8), t.c}, {t.at(7), t.x, d4},    {t.x, t.at(9), d1},
            {t.x, t.at(10), d2},     {t.at(9), t.at(10), d3}};
}

std::vector<TwistSystem> enumerate_twist_candidates(const ColouredGraph& g, int x, int c,
                                                    const ColourPartition& p) {
    std::vector<TwistSystem> out;
    if (!g.has_colour(c)) throw std::invalid_argument("colour c not in the colour set");
    for (int d4 : p.parts[3]) {
        int u7 = g.nbr_raw(x, d4);
        if (u7 == ColouredGraph::absent) continue;
        int u8 = g.nbr_raw(u7, c);
        if (u8 == ColouredGraph::absent) continue;
        for (int d1 : p.parts[0]) {
            int u5 = g.nbr_raw(u7, d1), u9 = g.nbr_raw(x, d1);
            if (u5 == ColouredGraph::absent || u9 == ColouredGraph::absent) continue;
            for (int d2 : p.parts[1]) {
                int u6 = g.nbr_raw(u8, d2), u10 = g.nbr_raw(x, d2);
                if (u6 == ColouredGraph::absent || u10 == ColouredGraph::absent) continue;
                for (int d3 : p.parts[2]) {
                    int u3 = g.nbr_raw(u5, d3), u4 = g.nbr_raw(u6, d3);
                    int u11 = g.nbr_raw(u9, d3), u12 = g.nbr_raw(u10, d3);
                    if (u3 == ColouredGraph::absent || u4 == ColouredGraph::absent ||
                        u11 == ColouredGraph::absent || u12 == ColouredGraph::absent)
                        continue;
                    for (int u1 = 0; u1 < g.n(); ++u1) {
                        int u2 = g.nbr_raw(u1, d3);
                        if (u2 == ColouredGraph::absent) continue;
                        for (int u13 = 0; u13 < g.n(); ++u13) {
                            if (u13 == u1 || u13 == u2) continue;
                            int u14 = g.nbr_raw(u13, d3);
                            if (u14 == ColouredGraph::absent) continue;
                            TwistSystem t;
                            t.x = x;
                            t.c = c;
                            t.partition = p;
                            t.u = {u1, u2, u3, u4, u5, u6, u7, u8, u9, u10, u11, u12, u13, u14};
                            if (validate_twist(g, t)) out.push_back(t);
                        }
                    }
                }
            }
        }
    }
    return out;
}

namespace {

bool try_random_spin(const ColouredGraph& g, const std::vector<int>& vprime, Rng& rng,
                     SpinSystem& out) {
    if (vprime.size() < 2 || g.num_colours() == 0) return false;
    int u = vprime[(std::size_t)rng.below(vprime.size())];
    int v = vprime[(std::size_t)rng.below(vprime.size())];
    if (u == v) return false;
    int c = g.colours()[(std::size_t)rng.below(g.colours().size())];
    int w = g.nbr_raw(v, c), z = g.nbr_raw(u, c);
    if (w == ColouredGraph::absent || z == ColouredGraph::absent) return false;
    int xx = (int)rng.below((std::uint64_t)g.n());
    int yy = g.nbr_raw(xx, c);
    if (yy == ColouredGraph::absent) return false;
    out = SpinSystem{u, v, w, xx, yy, z, vprime};
    return (bool)validate_spin(g, out);
}

bool try_random_rotation(const ColouredGraph& g, const std::vector<int>& sa,
                         const std::vector<int>& sb, Rng& rng, RotationSystem& out) {
    if (sa.empty() || sb.empty()) return false;
    int a = sa[(std::size_t)rng.below(sa.size())];
    int b = sb[(std::size_t)rng.below(sb.size())];
    int c = g.edge_colour(a, b);
    if (c == ColouredGraph::absent) return false;
    int v = (int)rng.below((std::uint64_t)g.n());
    int w = g.nbr_raw(v, c);
    if (w == ColouredGraph::absent) return false;
    out = RotationSystem{a, b, v, w, sa, sb};
    return (bool)validate_rotation(g, out);
}

} // namespace

WalkResult random_switch_walk(const ColouredGraph& g, const std::vector<MoveKind>& moves,
                              int steps, Rng& rng, const WalkContext& ctx, int retry_budget) {
    g.validate_gdcol();
    if (g.num_colours() >= g.n() - 1)
        throw std::invalid_argument("switch walk requires partial mode (|D| < n-1)");
    if (moves.empty()) throw std::invalid_argument("no move kinds supplied");
    WalkResult res{g, 0, false, -1};
    for (int s = 0; s < steps; ++s) {
        bool moved = false;
        for (int attempt = 0; attempt < retry_budget && !moved; ++attempt) {
            MoveKind kind = moves[(std::size_t)rng.below(moves.size())];
            if (kind == MoveKind::Spin) {
                SpinSystem sys;
                if (try_random_spin(res.graph, ctx.vprime, rng, sys)) {
                    res.graph = apply_spin(res.graph, sys);
                    moved = true;
                }
            } else {
                RotationSystem sys;
                if (try_random_rotation(res.graph, ctx.set_a, ctx.set_b, rng, sys)) {
                    res.graph = apply_rotation(res.graph, sys);
                    moved = true;
                }
            }
        }
        if (!moved) {
            res.stalled = true;
            res.stalled_at_step = s;
            return res;
        }
        ++res.steps_applied;
    }
    return res;
}

namespace {

// Unordered partitions of a q-regular graph's edge set into q perfect
// matchings, forced-edge recursion, bailing out past the budget.
struct RegularFactorizations {
    int n;
    const std::vector<std::vector<int>>& adj;
    std::size_t budget;
    std::vector<std::vector<std::vector<std::pair<int, int>>>> out;
    std::set<std::pair<int, int>> covered;
    std::vector<std::vector<std::pair<int, int>>> chosen;
    bool overflow = false;

    RegularFactorizations(int n_, const std::vector<std::vector<int>>& a, std::size_t b)
        : n(n_), adj(a), budget(b) {}

    bool pair_free(int u, int v) const { return !covered.count(std::minmax(u, v)); }

    void run() { recurse(); }

    void recurse() {
        if (overflow) return;
        // Smallest vertex with an uncovered edge.
        int fu = -1, fv = -1;
        for (int u = 0; u < n && fu < 0; ++u)
            for (int v : adj[u])
                if (v > u && pair_free(u, v)) {
                    fu = u;
                    fv = v;
                    break;
                }
        if (fu < 0) {
            out.push_back(chosen);
            if (out.size() > budget) overflow = true;
            return;
        }
        std::vector<char> used(n, 0);
        std::vector<std::pair<int, int>> matching = {{fu, fv}};
        used[fu] = used[fv] = 1;
        extend(used, matching);
    }

    void extend(std::vector<char>& used, std::vector<std::pair<int, int>>& matching) {
        if (overflow) return;
        int u = -1;
        for (int i = 0; i < n; ++i)
            if (!used[i]) {
                u = i;
                break;
            }
        if (u < 0) {
            for (auto [a, b] : matching) covered.insert(std::minmax(a, b));
            chosen.push_back(matching);
            recurse();
            chosen.pop_back();
            for (auto [a, b] : matching) covered.erase(std::minmax(a, b));
            return;
        }
        used[u] = 1;
        for (int v : adj[u]) {
            if (used[v] || !pair_free(u, v)) continue;
            used[v] = 1;
            matching.push_back({u, v});
            extend(used, matching);
            matching.pop_back();
            used[v] = 0;
            if (overflow) return;
        }
        used[u] = 0;
    }
};

} // namespace

ColouredGraph jm_square_walk(const ColouredGraph& g, std::int64_t steps, Rng& rng) {
    g.validate_full();
    ColouredGraph cur = g;
    int nc = cur.num_colours();
    if (nc < 3) return cur; // K_2 and K_4: a single state
    // Past this order the block unions stop being enumerable within budget,
    // so the walk goes straight to the two-class swaps.
    const int block_move_max_n = 64;
    for (std::int64_t s = 0; s < steps; ++s) {
        if (cur.n() > block_move_max_n) {
            int ia = (int)rng.below((std::uint64_t)nc);
            int ib = (int)rng.below((std::uint64_t)(nc - 1));
            if (ib >= ia) ++ib;
            int a = cur.colours()[ia], b = cur.colours()[ib];
            int v0 = (int)rng.below((std::uint64_t)cur.n());
            std::vector<std::pair<int, int>> ea, eb;
            int v = v0;
            do {
                int w = cur.nbr_raw(v, a);
                ea.push_back({v, w});
                int t = cur.nbr_raw(w, b);
                eb.push_back({w, t});
                v = t;
            } while (v != v0);
            for (auto [p, qq] : ea) cur.unset_edge(p, qq, a);
            for (auto [p, qq] : eb) cur.unset_edge(p, qq, b);
            for (auto [p, qq] : ea) cur.set_edge(p, qq, b);
            for (auto [p, qq] : eb) cur.set_edge(p, qq, a);
            continue;
        }
        // Block of 3 or 4 symbol classes. Size-4 blocks are needed for very
        // small orders, where every 2- and 3-class union factorizes uniquely.
        int q = nc >= 4 ? 3 + (int)rng.below(2) : 3;
        std::vector<int> idx(nc);
        for (int i = 0; i < nc; ++i) idx[i] = i;
        for (int i = 0; i < q; ++i) {
            std::size_t j = i + (std::size_t)rng.below((std::uint64_t)(nc - i));
            std::swap(idx[i], idx[j]);
        }
        std::vector<int> cols(q);
        for (int i = 0; i < q; ++i) cols[i] = cur.colours()[idx[i]];

        std::vector<std::vector<int>> adj(cur.n());
        for (int v = 0; v < cur.n(); ++v)
            for (int c : cols) adj[v].push_back(cur.nbr_raw(v, c));

        RegularFactorizations rf(cur.n(), adj, 20000);
        rf.run();
        if (rf.overflow || rf.out.empty()) {
            // Union too rich to enumerate: fall back to a two-class cycle
            // swap through a random vertex, also uniformity-preserving.
            int a = cols[0], b = cols[1];
            int v0 = (int)rng.below((std::uint64_t)cur.n());
            std::vector<std::pair<int, int>> ea, eb;
            int v = v0;
            do {
                int w = cur.nbr_raw(v, a);
                ea.push_back({v, w});
                int t = cur.nbr_raw(w, b);
                eb.push_back({w, t});
                v = t;
            } while (v != v0);
            for (auto [p, qq] : ea) cur.unset_edge(p, qq, a);
            for (auto [p, qq] : eb) cur.unset_edge(p, qq, b);
            for (auto [p, qq] : ea) cur.set_edge(p, qq, b);
            for (auto [p, qq] : eb) cur.set_edge(p, qq, a);
            continue;
        }
        // Uniform factorization of the union, uniform label assignment: a
        // heat-bath resample of the block.
        const auto& pick = rf.out[(std::size_t)rng.below(rf.out.size())];
        std::vector<int> perm(q);
        for (int i = 0; i < q; ++i) perm[i] = i;
        for (int i = q; i > 1; --i) {
            std::size_t j = (std::size_t)rng.below((std::uint64_t)i);
            std::swap(perm[i - 1], perm[j]);
        }
        for (int c : cols)
            for (int v = 0; v < cur.n(); ++v) {
                int u = cur.nbr_raw(v, c);
                if (u > v) cur.unset_edge(v, u, c);
            }
        for (int j = 0; j < q; ++j)
            for (auto [u, v] : pick[perm[j]]) cur.set_edge(u, v, cols[j]);
    }
    cur.validate_full();
    return cur;
}

ColouredGraph canonical_colour_form(const ColouredGraph& g) {
    g.validate_full();
    std::vector<int> remap(g.colours().back() + 1, -1);
    for (int j = 1; j < g.n(); ++j) remap[g.edge_colour(0, j)] = j - 1;
    std::vector<int> colours(g.num_colours());
    for (int i = 0; i < g.num_colours(); ++i) colours[i] = i;
    std::vector<std::array<int, 3>> edges;
    for (const auto& e : g.edge_list()) edges.push_back({e[0], e[1], remap[e[2]]});
    return ColouredGraph::from_edges(g.n(), colours, edges);
}

} // namespace rainbow
