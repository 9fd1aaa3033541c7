#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rainbow/coloured_graph.hpp"
#include "rainbow/rng.hpp"

namespace rainbow {

/// K_3 + C_4 absorbing gadget for apex x and target colour c. Triangle is
/// x,t1,t2 with x-edges coloured c1 (to t1) and c2 (to t2) and t1t2 coloured
/// c3. Cycle is qa-qb-qd-qe with edges qa-qb (c1), qb-qd (c), qd-qe (c2),
/// qe-qa (c3). The gadget uses 6 vertices (all but x), 3 colours (all but c)
/// and its 7 edges.
struct Gadget {
    int x, c;
    int t1, t2;
    int qa, qb, qd, qe;
    int c1, c2, c3;

    std::vector<int> used_vertices() const { return {t1, t2, qa, qb, qd, qe}; }
    std::vector<int> used_colours() const { return {c1, c2, c3}; }
    std::vector<std::array<int, 3>> edges() const {
        return {{x, t1, c1},  {x, t2, c2},  {t1, t2, c3}, {qa, qb, c1},
                {qb, qd, c},  {qd, qe, c2}, {qe, qa, c3}};
    }
    /// Canonical key identifying the underlying subgraph, independent of the
    /// (c1,c2) labelling order.
    std::array<int, 7> canonical_key() const;
};

VerifyResult validate_gadget(const ColouredGraph& g, const Gadget& a);

/// A gadget refined by colour-class membership (c1 in D1, c2 in D2, c3 in D3)
/// plus the extra edge f = x-qb whose colour lies in D4; qb is the one gadget
/// vertex whose incident gadget colours are {c, c1}.
struct XcpGadget {
    Gadget core;
    int f_colour;

    int v() const { return core.qb; }
    /// The two D3-coloured edges, the handles for distinguishability.
    std::array<std::array<int, 2>, 2> d3_edges() const {
        return {std::array<int, 2>{std::min(core.t1, core.t2), std::max(core.t1, core.t2)},
                std::array<int, 2>{std::min(core.qe, core.qa), std::max(core.qe, core.qa)}};
    }
    std::array<int, 2> c_edge() const {
        return {std::min(core.qb, core.qd), std::max(core.qb, core.qd)};
    }
};

VerifyResult validate_xcp_gadget(const ColouredGraph& g, const XcpGadget& j,
                                 const ColourPartition& p);

/// Every (x,c)-absorbing gadget of g, each underlying subgraph exactly once
/// (colour pair enumerated with c1 < c2). Deterministic order.
std::vector<Gadget> enumerate_gadgets(const ColouredGraph& g, int x, int c);

/// Every (x,c,P)-gadget exactly once; here c1 in D1 and c2 in D2 fixes the
/// labelling, so no ordering dedup applies.
std::vector<XcpGadget> enumerate_xcp_gadgets(const ColouredGraph& g, int x, int c,
                                             const ColourPartition& p);

enum class Verdict { Pass, ProbablePass, Fail };

struct ResilienceReport {
    Verdict verdict;
    // Exact witness when verdict == Fail.
    std::vector<int> witness_vs, witness_ds;
    std::size_t witness_count = 0;
    double threshold = 0.0;
    std::uint64_t pairs_checked = 0;
    bool sampled = false;
};

inline constexpr std::uint64_t kSubsetBudget = 10'000'000;

/// e_{V',D'} >= eps^3 n^2 / 100 over all V', D' of size ceil(eps*n); checking
/// that size suffices since the count is monotone in both sets. Exact mode
/// refuses when the subset count exceeds the budget.
ResilienceReport is_locally_edge_resilient(const ColouredGraph& g, double eps,
                                           std::optional<std::uint64_t> sample_k = std::nullopt,
                                           Rng* rng = nullptr,
                                           std::uint64_t budget = kSubsetBudget);

/// e(A,B) < 8(|D|-1)^3/n over all A,B of size |D|.
ResilienceReport is_quasirandom(const ColouredGraph& g,
                                std::optional<std::uint64_t> sample_k = std::nullopt,
                                Rng* rng = nullptr, std::uint64_t budget = kSubsetBudget);

struct SpreadReport {
    std::vector<Gadget> kept;
    // Index of the binding resource per rejected gadget: "vertex v", ...
    std::vector<std::string> rejections;
};

/// Keeps a gadget iff no used vertex, edge or colour counter would exceed t.
SpreadReport greedy_well_spread(const std::vector<Gadget>& gadgets, int t, int n);

/// Independent checker for the t-well-spread property.
VerifyResult is_well_spread(const std::vector<Gadget>& gadgets, int t, int n);

struct GadgetResilienceReport {
    bool certified = false;
    std::uint64_t required = 0;
    int t = 0;
    // Deficit per (x,c) that fell short; empty when certified.
    std::vector<std::array<std::int64_t, 3>> deficits; // {x, c, shortfall}
};

/// One-sided certificate: for every (x,c) the greedy well-spread collection
/// with t = floor(5*mu*n/4) must reach ceil(mu^4 n^2 / 2^23) gadgets. A
/// non-pass is not a disproof.
GadgetResilienceReport is_robustly_gadget_resilient(const ColouredGraph& g, double mu);

struct SaturationReport {
    std::vector<XcpGadget> distinguishable;
    // Per c-edge saturation values keyed by the edge.
    std::vector<std::pair<std::array<int, 2>, int>> sat;
};

SaturationReport saturation_profile(const ColouredGraph& g, int x, int c,
                                    const ColourPartition& p);

/// Number of distinguishable (x,c,P)-gadgets containing the c-edge e.
int saturation(const ColouredGraph& g, int x, int c, const ColourPartition& p,
               std::array<int, 2> e);

enum class SaturationClass { Unsaturated, Saturated, Supersaturated };

/// Boundaries: unsaturated iff sat <= |D|-1, saturated iff sat >= |D|,
/// supersaturated iff sat >= |D|+6.
SaturationClass classify_saturation(int sat, int d_size);

struct RValue {
    std::int64_t r = 0;
    std::vector<std::array<int, 2>> saturated_edges;
    std::vector<std::array<int, 2>> unsaturated_edges;
};

/// r(G) = |D| |Sat(G)| + sum over unsaturated c-edges of sat(e).
RValue r_value(const ColouredGraph& g, int x, int c, const ColourPartition& p);

} // namespace rainbow
