#include "rainbow/resilience.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>

namespace rainbow {

namespace {

// Binomial with saturation, for budget checks only.
std::uint64_t binom_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        if (r > cap) return cap + 1;
        r = r * (n - k + i) / i;
    }
    return r;
}

// Visits every k-subset of {0..n-1} in lexicographic order until fn returns
// false.
void for_each_subset(int n, int k, const std::function<bool(const std::vector<int>&)>& fn) {
    if (k > n || k < 0) return;
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        if (!fn(idx)) return;
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) return;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

std::vector<int> random_subset(Rng& rng, const std::vector<int>& pool, int k) {
    std::vector<int> v = pool;
    for (int i = 0; i < k; ++i) {
        std::size_t j = i + (std::size_t)rng.below(v.size() - i);
        std::swap(v[i], v[j]);
    }
    v.resize(k);
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace

std::array<int, 7> Gadget::canonical_key() const {
    // The (c1,c2)-relabelling maps (t1,t2,qa,qb,qd,qe) to (t2,t1,qe,qd,qb,qa);
    // orient so the c-edge end adjacent to the c1 side is the smaller.
    if (qb <= qd) return {x, t1, t2, qa, qb, qd, qe};
    return {x, t2, t1, qe, qd, qb, qa};
}

VerifyResult validate_gadget(const ColouredGraph& g, const Gadget& a) {
    std::vector<int> vs = {a.x, a.t1, a.t2, a.qa, a.qb, a.qd, a.qe};
    std::vector<char> seen(g.n(), 0);
    for (int v : vs) {
        if (v < 0 || v >= g.n()) return VerifyResult::fail("gadget vertex out of range");
        if (seen[v]) return VerifyResult::fail("gadget vertices not distinct");
        seen[v] = 1;
    }
    if (a.c1 == a.c2 || a.c3 == a.c || a.c1 == a.c || a.c2 == a.c || a.c3 == a.c1 ||
        a.c3 == a.c2)
        return VerifyResult::fail("gadget colours not distinct from each other and c");
    for (const auto& e : a.edges()) {
        if (g.edge_colour(e[0], e[1]) != e[2])
            return VerifyResult::fail("edge {" + std::to_string(e[0]) + "," +
                                      std::to_string(e[1]) + "} missing or miscoloured");
    }
    return VerifyResult::pass();
}

VerifyResult validate_xcp_gadget(const ColouredGraph& g, const XcpGadget& j,
                                 const ColourPartition& p) {
    if (auto r = validate_gadget(g, j.core); !r) return r;
    if (p.part_of(j.core.c1) != 0) return VerifyResult::fail("e1 colour outside D1");
    if (p.part_of(j.core.c2) != 1) return VerifyResult::fail("e2 colour outside D2");
    if (p.part_of(j.core.c3) != 2) return VerifyResult::fail("e3 colour outside D3");
    if (p.part_of(j.f_colour) != 3) return VerifyResult::fail("f colour outside D4");
    if (g.edge_colour(j.core.x, j.core.qb) != j.f_colour)
        return VerifyResult::fail("edge f = x-v missing or miscoloured");
    return VerifyResult::pass();
}

namespace {

// Shared cycle completion: given apex x, colours (c1,c2,c3) and triangle
// (t1,t2), emits every valid 4-cycle through each oriented c-edge.
template <typename Fn>
void complete_cycles(const ColouredGraph& g, int x, int c, int c1, int c2, int c3, int t1,
                     int t2, Fn&& emit) {
    for (int qb = 0; qb < g.n(); ++qb) {
        int qd = g.nbr_raw(qb, c);
        if (qd == ColouredGraph::absent) continue;
        if (qb == x || qd == x || qb == t1 || qb == t2 || qd == t1 || qd == t2) continue;
        int qa = g.nbr_raw(qb, c1);
        int qe = g.nbr_raw(qd, c2);
        if (qa == ColouredGraph::absent || qe == ColouredGraph::absent) continue;
        if (qa == x || qa == t1 || qa == t2 || qe == x || qe == t1 || qe == t2) continue;
        if (qa == qe || qa == qd || qe == qb) continue;
        if (g.nbr_raw(qa, c3) != qe) continue;
        emit(qa, qb, qd, qe);
    }
}

} // namespace

std::vector<Gadget> enumerate_gadgets(const ColouredGraph& g, int x, int c) {
    if (x < 0 || x >= g.n()) throw std::invalid_argument("apex out of range");
    if (!g.has_colour(c)) throw std::invalid_argument("colour c not in colour set");
    std::vector<Gadget> out;
    const auto& cols = g.colours();
    for (std::size_t i = 0; i < cols.size(); ++i) {
        int c1 = cols[i];
        if (c1 == c) continue;
        int t1 = g.nbr_raw(x, c1);
        if (t1 == ColouredGraph::absent) continue;
        for (std::size_t j = i + 1; j < cols.size(); ++j) {
            int c2 = cols[j];
            if (c2 == c) continue;
            int t2 = g.nbr_raw(x, c2);
            if (t2 == ColouredGraph::absent) continue;
            int c3 = g.edge_colour(t1, t2);
            if (c3 == ColouredGraph::absent || c3 == c) continue;
            complete_cycles(g, x, c, c1, c2, c3, t1, t2, [&](int qa, int qb, int qd, int qe) {
                out.push_back(Gadget{x, c, t1, t2, qa, qb, qd, qe, c1, c2, c3});
            });
        }
    }
    return out;
}

std::vector<XcpGadget> enumerate_xcp_gadgets(const ColouredGraph& g, int x, int c,
                                             const ColourPartition& p) {
    if (x < 0 || x >= g.n()) throw std::invalid_argument("apex out of range");
    if (!g.has_colour(c)) throw std::invalid_argument("colour c not in colour set");
    std::vector<int> d;
    for (int col : g.colours())
        if (col != c) d.push_back(col);
    p.validate(d);
    std::vector<XcpGadget> out;
    for (int c1 : p.parts[0]) {
        int t1 = g.nbr_raw(x, c1);
        if (t1 == ColouredGraph::absent) continue;
        for (int c2 : p.parts[1]) {
            int t2 = g.nbr_raw(x, c2);
            if (t2 == ColouredGraph::absent) continue;
            int c3 = g.edge_colour(t1, t2);
            if (c3 == ColouredGraph::absent || p.part_of(c3) != 2) continue;
            complete_cycles(g, x, c, c1, c2, c3, t1, t2, [&](int qa, int qb, int qd, int qe) {
                int f = g.edge_colour(x, qb);
                if (f == ColouredGraph::absent || p.part_of(f) != 3) return;
                out.push_back(XcpGadget{Gadget{x, c, t1, t2, qa, qb, qd, qe, c1, c2, c3}, f});
            });
        }
    }
    return out;
}

ResilienceReport is_locally_edge_resilient(const ColouredGraph& g, double eps,
                                           std::optional<std::uint64_t> sample_k, Rng* rng,
                                           std::uint64_t budget) {
    if (eps <= 0.0 || eps > 1.0) throw std::invalid_argument("eps must lie in (0,1]");
    int n = g.n();
    int s = (int)std::ceil(eps * n);
    ResilienceReport rep;
    rep.threshold = eps * eps * eps * n * n / 100.0;
    if (s > n || s > g.num_colours()) {
        rep.verdict = Verdict::Pass; // no qualifying pair of sets
        return rep;
    }
    std::vector<int> vpool(n), dpool = g.colours();
    std::iota(vpool.begin(), vpool.end(), 0);

    auto check = [&](const std::vector<int>& vs, const std::vector<int>& ds) {
        ++rep.pairs_checked;
        std::size_t cnt = g.count_edges_within(vs, ds);
        if ((double)cnt < rep.threshold) {
            rep.verdict = Verdict::Fail;
            rep.witness_vs = vs;
            rep.witness_ds = ds;
            rep.witness_count = cnt;
            return false;
        }
        return true;
    };

    if (sample_k) {
        if (!rng) throw std::invalid_argument("sampled mode needs an rng");
        rep.sampled = true;
        rep.verdict = Verdict::ProbablePass;
        for (std::uint64_t i = 0; i < *sample_k; ++i)
            if (!check(random_subset(*rng, vpool, s), random_subset(*rng, dpool, s))) break;
        return rep;
    }

    std::uint64_t cost = binom_capped(n, s, budget) * binom_capped(g.num_colours(), s, budget);
    if (binom_capped(n, s, budget) > budget || cost > budget)
        throw std::invalid_argument("exact check needs " + std::to_string(cost) +
                                    " subset pairs, over the budget; use sampled mode");
    rep.verdict = Verdict::Pass;
    bool go = true;
    for_each_subset(n, s, [&](const std::vector<int>& vi) {
        std::vector<int> vs(vi.begin(), vi.end());
        for_each_subset((int)dpool.size(), s, [&](const std::vector<int>& di) {
            std::vector<int> ds(di.size());
            for (std::size_t t = 0; t < di.size(); ++t) ds[t] = dpool[di[t]];
            go = check(vs, ds);
            return go;
        });
        return go;
    });
    return rep;
}

ResilienceReport is_quasirandom(const ColouredGraph& g, std::optional<std::uint64_t> sample_k,
                                Rng* rng, std::uint64_t budget) {
    int n = g.n();
    int s = g.num_colours();
    ResilienceReport rep;
    double d = (double)s;
    rep.threshold = 8.0 * (d - 1) * (d - 1) * (d - 1) / n;
    if (s > n) {
        rep.verdict = Verdict::Pass;
        return rep;
    }
    std::vector<int> vpool(n);
    std::iota(vpool.begin(), vpool.end(), 0);

    auto check = [&](const std::vector<int>& a, const std::vector<int>& b) {
        ++rep.pairs_checked;
        std::size_t cnt = g.crossing_edges(a, b);
        if (!((double)cnt < rep.threshold)) {
            rep.verdict = Verdict::Fail;
            rep.witness_vs = a;
            rep.witness_ds = b; // second vertex set, reusing the slot
            rep.witness_count = cnt;
            return false;
        }
        return true;
    };

    if (sample_k) {
        if (!rng) throw std::invalid_argument("sampled mode needs an rng");
        rep.sampled = true;
        rep.verdict = Verdict::ProbablePass;
        for (std::uint64_t i = 0; i < *sample_k; ++i)
            if (!check(random_subset(*rng, vpool, s), random_subset(*rng, vpool, s))) break;
        return rep;
    }

    std::uint64_t half = binom_capped(n, s, budget);
    if (half > budget || half * half > budget)
        throw std::invalid_argument("exact check needs " + std::to_string(half * half) +
                                    " subset pairs, over the budget; use sampled mode");
    rep.verdict = Verdict::Pass;
    std::vector<std::vector<int>> subsets;
    for_each_subset(n, s, [&](const std::vector<int>& vi) {
        subsets.push_back(vi);
        return true;
    });
    for (std::size_t i = 0; i < subsets.size() && rep.verdict != Verdict::Fail; ++i)
        for (std::size_t j = i; j < subsets.size(); ++j)
            if (!check(subsets[i], subsets[j])) break;
    return rep;
}

namespace {

struct UsageCounters {
    std::vector<int> vertex;
    std::map<int, int> colour;
    std::map<std::pair<int, int>, int> edge;

    explicit UsageCounters(int n) : vertex(n, 0) {}

    // Returns a description of the first resource already at the cap, or
    // empty when the gadget fits.
    std::string binding(const Gadget& a, int t) const {
        for (int v : a.used_vertices())
            if (vertex[v] >= t) return "vertex " + std::to_string(v);
        for (const auto& e : a.edges()) {
            auto key = std::minmax(e[0], e[1]);
            auto it = edge.find(key);
            if (it != edge.end() && it->second >= t)
                return "edge {" + std::to_string(key.first) + "," + std::to_string(key.second) +
                       "}";
        }
        for (int c : a.used_colours()) {
            auto it = colour.find(c);
            if (it != colour.end() && it->second >= t) return "colour " + std::to_string(c);
        }
        return {};
    }

    void add(const Gadget& a) {
        for (int v : a.used_vertices()) ++vertex[v];
        for (const auto& e : a.edges()) ++edge[std::minmax(e[0], e[1])];
        for (int c : a.used_colours()) ++colour[c];
    }
};

} // namespace

SpreadReport greedy_well_spread(const std::vector<Gadget>& gadgets, int t, int n) {
    if (t < 1) throw std::invalid_argument("spread bound t must be >= 1");
    SpreadReport rep;
    UsageCounters use(n);
    for (const auto& a : gadgets) {
        std::string bind = use.binding(a, t);
        if (!bind.empty()) {
            rep.rejections.push_back(bind);
            continue;
        }
        use.add(a);
        rep.kept.push_back(a);
    }
    return rep;
}

VerifyResult is_well_spread(const std::vector<Gadget>& gadgets, int t, int n) {
    UsageCounters use(n);
    for (const auto& a : gadgets) use.add(a);
    for (int v = 0; v < n; ++v)
        if (use.vertex[v] > t)
            return VerifyResult::fail("vertex " + std::to_string(v) + " used " +
                                      std::to_string(use.vertex[v]) + " > t times");
    for (const auto& [c, k] : use.colour)
        if (k > t) return VerifyResult::fail("colour " + std::to_string(c) + " overused");
    for (const auto& [e, k] : use.edge)
        if (k > t)
            return VerifyResult::fail("edge {" + std::to_string(e.first) + "," +
                                      std::to_string(e.second) + "} overused");
    return VerifyResult::pass();
}

GadgetResilienceReport is_robustly_gadget_resilient(const ColouredGraph& g, double mu) {
    g.validate_full();
    GadgetResilienceReport rep;
    double n = g.n();
    rep.t = (int)std::floor(5.0 * mu * n / 4.0);
    rep.required = (std::uint64_t)std::ceil(mu * mu * mu * mu * n * n / 8388608.0);
    if (rep.required == 0) {
        rep.certified = true;
        return rep;
    }
    if (rep.t < 1) {
        rep.certified = false;
        rep.deficits.push_back({-1, -1, (std::int64_t)rep.required});
        return rep;
    }
    rep.certified = true;
    for (int x = 0; x < g.n(); ++x)
        for (int c : g.colours()) {
            auto spread = greedy_well_spread(enumerate_gadgets(g, x, c), rep.t, g.n());
            if (spread.kept.size() < rep.required) {
                rep.certified = false;
                rep.deficits.push_back(
                    {x, c, (std::int64_t)rep.required - (std::int64_t)spread.kept.size()});
            }
        }
    return rep;
}

SaturationReport saturation_profile(const ColouredGraph& g, int x, int c,
                                    const ColourPartition& p) {
    auto all = enumerate_xcp_gadgets(g, x, c, p);
    // A D3-edge carried by two or more gadgets disqualifies every gadget
    // containing it.
    std::map<std::array<int, 2>, int> d3count;
    for (const auto& j : all)
        for (const auto& e : j.d3_edges()) ++d3count[e];
    SaturationReport rep;
    for (const auto& j : all) {
        auto es = j.d3_edges();
        if (d3count[es[0]] == 1 && d3count[es[1]] == 1) rep.distinguishable.push_back(j);
    }
    std::map<std::array<int, 2>, int> sat;
    for (int v = 0; v < g.n(); ++v) {
        int u = g.nbr_raw(v, c);
        if (u != ColouredGraph::absent && u > v) sat[{v, u}] = 0;
    }
    for (const auto& j : rep.distinguishable) ++sat[j.c_edge()];
    rep.sat.assign(sat.begin(), sat.end());
    return rep;
}

int saturation(const ColouredGraph& g, int x, int c, const ColourPartition& p,
               std::array<int, 2> e) {
    if (g.edge_colour(e[0], e[1]) != c)
        throw std::invalid_argument("edge {" + std::to_string(e[0]) + "," +
                                    std::to_string(e[1]) + "} is not a c-edge");
    auto key = std::minmax(e[0], e[1]);
    auto rep = saturation_profile(g, x, c, p);
    for (const auto& [edge, s] : rep.sat)
        if (edge == std::array<int, 2>{key.first, key.second}) return s;
    return 0;
}

SaturationClass classify_saturation(int sat, int d_size) {
    if (sat >= d_size + 6) return SaturationClass::Supersaturated;
    if (sat >= d_size) return SaturationClass::Saturated;
    return SaturationClass::Unsaturated;
}

RValue r_value(const ColouredGraph& g, int x, int c, const ColourPartition& p) {
    int d_size = g.num_colours() - 1;
    auto rep = saturation_profile(g, x, c, p);
    RValue rv;
    for (const auto& [edge, s] : rep.sat) {
        if (s >= d_size) {
            rv.saturated_edges.push_back(edge);
            rv.r += d_size;
        } else {
            rv.unsaturated_edges.push_back(edge);
            rv.r += s;
        }
    }
    return rv;
}

} // namespace rainbow
