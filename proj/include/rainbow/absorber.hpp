#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rainbow/coloured_graph.hpp"
#include "rainbow/rational.hpp"
#include "rainbow/resilience.hpp"
#include "rainbow/rmbg.hpp"
#include "rainbow/rng.hpp"

namespace rainbow {

/// Slice probabilities for the absorber partition. In paper-faithful mode the
/// template size is coupled to n through 2m = (eta - 2 eps) n, which fixes
/// |E(H)|/n = 1792 (eta/2 - eps) for the 256-regular template, and the spare
/// reserves use mu itself. Relaxed mode takes |E(H)|/n as an input and scales
/// the spare reserves by gamma instead, since the asymptotic mu-sized
/// reserves overflow probability one at desk-scale constants. All arithmetic
/// is exact.
struct AbsorberConfig {
    Rational eps, gamma, eta, mu;
    bool paper_faithful = true;
    Rational edges_over_n;
    Rational reserve; // mu in paper mode, gamma-sized in relaxed mode

    static AbsorberConfig paper(Rational eps, Rational gamma, Rational eta, Rational mu);
    static AbsorberConfig relaxed(Rational eps, Rational gamma, Rational eta, Rational mu,
                                  Rational edges_over_n);

    Rational p_flex() const { return eta; }
    Rational p_buff() const { return Rational(5, 2) * eta; }
    Rational p_abs() const { return Rational(6) * edges_over_n + Rational(2) * reserve; }
    Rational p_link() const { return Rational(9) * edges_over_n + Rational(3) * reserve; }
    Rational p_link_res() const { return gamma / Rational(3); }
    Rational q_flex() const { return eta; }
    Rational q_buff() const { return Rational(5, 2) * eta; }
    Rational q_abs() const { return Rational(3) * edges_over_n + reserve; }
    Rational q_link() const { return Rational(12) * edges_over_n + Rational(4) * reserve; }
    Rational q_link_res() const { return gamma / Rational(3); }
    Rational p_main() const {
        return Rational(1) - p_flex() - p_buff() - p_abs() - p_link() - p_link_res();
    }
    Rational q_main() const {
        return Rational(1) - q_flex() - q_buff() - q_abs() - q_link() - q_link_res();
    }
    Rational beta() const { return Rational(1) - p_main(); }

    /// Hierarchy eps < gamma < eta < mu < 1 and every slice probability in
    /// [0,1]. Throws on violation.
    void validate() const;
    /// Weaker check used by the partition sampler: probabilities in range.
    void validate_probabilities() const;
};

enum class Slice { Main = 0, Flex, Buff, Abs, Link, LinkRes };

const char* slice_name(Slice s);

/// Independent per-element classification of vertices and colours plus a
/// beta-random edge subgraph. Reproducible from the recorded seed.
struct AbsorberPartition {
    int n = 0;
    std::vector<Slice> vertex_slice;          // by vertex id
    std::vector<Slice> colour_slice;          // by colour id
    std::vector<int> colour_ids;              // the colour universe
    EdgeSet gprime;
    std::uint64_t seed = 0;

    std::vector<int> vertices_in(Slice s) const;
    std::vector<int> colours_in(Slice s) const;
    bool vertex_in(int v, Slice s) const { return vertex_slice[v] == s; }
    bool colour_in(int c, Slice s) const { return colour_slice[c] == s; }
};

AbsorberPartition partition_random(const ColouredGraph& g, const AbsorberConfig& cfg, Rng& rng);

/// Vertex and colour exclusion masks threaded through the greedy searches.
struct Exclusions {
    std::vector<char> vertex;
    std::vector<char> colour;
    static Exclusions none(const ColouredGraph& g);
    void block_vertex(int v) { vertex[v] = 1; }
    void block_colour(int c) { colour[c] = 1; }
};

/// Rainbow path u - u' - w - v' - v with u', w, v' flexible, the three outer
/// colours flexible and the middle colour exactly c; all edges inside gflex
/// (null means every edge). First hit in lexicographic (u', v') order; w is
/// forced as the c-neighbour of u'.
std::optional<std::vector<int>> find_cover(const ColouredGraph& g, int u, int v, int c,
                                           const std::vector<int>& flex_vs,
                                           const std::vector<char>& flex_colour_mask,
                                           const EdgeSet* gflex, const Exclusions& excl);

/// Template injected onto reserved host vertices (side A) and colours (side B).
struct EmbeddedTemplate {
    BipartiteTemplate t;
    std::vector<int> vertex_of_a;
    std::vector<int> colour_of_b;
    int flex_v_remainder = 0, flex_c_remainder = 0;
    int buff_v_remainder = 0, buff_c_remainder = 0;

    std::vector<int> flexible_host_vertices() const;
    std::vector<int> flexible_host_colours() const;
    int a_index_of_vertex(int v) const;
    int b_index_of_colour(int c) const;
};

/// Maps the template's flexible A side into V_flex and its buffer into
/// V_buff, likewise for colours; throws a sizing error naming the deficits
/// when a reserve is too small.
EmbeddedTemplate embed_template(const AbsorberPartition& part, const BipartiteTemplate& t);
EmbeddedTemplate embed_template(const AbsorberPartition& part, int m,
                                TemplateStrategy strategy = TemplateStrategy::Complete,
                                Rng* rng = nullptr);

enum class LinkKind { Main, Reserve };

/// Rainbow path of length 4; ends in V_abs, internals and colours in the
/// linking slices, all edges in G'.
struct Link {
    std::array<int, 5> v;
    LinkKind kind = LinkKind::Main;
};

VerifyResult check_link(const ColouredGraph& g, const AbsorberPartition& part, const Link& l,
                        bool ends_must_be_abs = true);

struct GadgetSelection {
    bool ok = false;
    std::string failure;           // names the stuck template edge
    std::vector<Gadget> gadgets;   // aligned with h_edges
    std::vector<std::pair<int, int>> h_edges;
};

/// One gadget per template edge, greedily, each fully inside
/// (V_abs, C_abs, G') and disjoint in used vertices/colours/edges from all
/// previously chosen gadgets. Deterministic first-fit order.
GadgetSelection greedy_gadgets(const ColouredGraph& g, const AbsorberPartition& part,
                               const EmbeddedTemplate& emb);

/// Independent checker for the pairwise disjoint-usage condition.
VerifyResult check_satisfies_template(const std::vector<Gadget>& gadgets);

/// Greedy rainbow matching inside (vs, cs, G'); maximal under lexicographic
/// edge scan.
std::vector<std::pair<int, int>> greedy_rainbow_matching(const ColouredGraph& g,
                                                         const std::vector<int>& vs,
                                                         const std::vector<int>& cs,
                                                         const EdgeSet* gprime,
                                                         int max_edges = -1);

/// The four planned matchings the links must realize. Pairs are ordered as
/// the link search will traverse them.
struct LinkPlan {
    std::vector<std::pair<int, int>> m1; // (qb_i, qe_i)
    std::vector<std::pair<int, int>> m2; // (t2_i, qa_i)
    std::vector<std::pair<int, int>> m3; // (t1_i, qd_{i+1})
    std::vector<std::pair<int, int>> m4; // (anchor, a_1), (b_i, a_{i+1})
    int anchor = -1;
    int free_end = -1;
};

/// Anchor defaults to the lower-id endpoint of the two gadget-degree-2
/// candidates; pass tail_anchor to override.
LinkPlan plan_link_matchings(const std::vector<Gadget>& gadgets,
                             const std::vector<std::pair<int, int>>& tail_matching,
                             std::optional<int> tail_anchor = std::nullopt);

enum class LinkMode { Greedy, SpreadGreedy };

struct LinkSearchResult {
    bool ok = false;
    std::string failure; // names the unlinked target edge
    std::vector<Link> links;
    int main_failures = 0; // targets that needed the reserve pool
};

/// Finds one link per target edge, in order; the union of all links is
/// rainbow and internally vertex-disjoint. SpreadGreedy runs a main-only
/// pass first and mops up failures from the reserve pool.
LinkSearchResult find_links(const ColouredGraph& g,
                            const std::vector<std::pair<int, int>>& targets,
                            const AbsorberPartition& part, LinkMode mode, double gamma);

/// Assembled absorbing structure: gadgets indexed by template edges, the
/// completing/connecting links, and the tail.
struct HAbsorber {
    EmbeddedTemplate emb;
    std::vector<Gadget> gadgets;
    std::vector<std::pair<int, int>> h_edges;
    std::vector<Link> links_p1, links_p2; // per gadget
    std::vector<Link> links_p3;           // size k-1
    std::vector<std::pair<int, int>> tail_matching;
    std::vector<Link> tail_links;         // size = |tail_matching|
    int anchor = -1, free_end = -1;

    std::vector<int> body_vertices() const; // every vertex of the structure
    std::vector<int> body_colours() const;
    int tail_end() const; // b_l, or anchor when the tail is empty
};

/// Validates every structural condition (gadget disjointness, link purity,
/// rainbow union, degree <= 3 connectivity, link-count minimality, tail
/// separation) and returns the assembled value; throws naming the violated
/// condition otherwise.
HAbsorber assemble(const ColouredGraph& g, const AbsorberPartition& part,
                   const EmbeddedTemplate& emb, const GadgetSelection& sel,
                   const LinkPlan& plan, const std::vector<Link>& links_p,
                   const std::vector<Link>& links_t,
                   const std::vector<std::pair<int, int>>& tail_matching);

struct BuildAbsorberResult {
    bool ok = false;
    std::string stage;  // failing stage when not ok
    std::string detail;
    std::optional<HAbsorber> absorber;
};

/// Full greedy pipeline: gadgets, tail matching, link plan, links, assembly.
/// max_tail < 0 keeps the matching maximal.
BuildAbsorberResult build_h_absorber(const ColouredGraph& g, const AbsorberPartition& part,
                                     const EmbeddedTemplate& emb, double gamma,
                                     LinkMode mode = LinkMode::SpreadGreedy, int max_tail = -1);

/// The rainbow path through the whole structure that takes the absorbing
/// branch exactly at the matched template edges. Endpoints are the non-anchor
/// free end and the tail end.
std::vector<int> absorbing_path(const ColouredGraph& g, const HAbsorber& ab,
                                const std::vector<std::pair<int, int>>& tmpl_matching);

struct AbsorbResult {
    bool ok = false;
    std::string failure;
    std::vector<int> path;
    bool is_cycle = false;
    int omitted_vertex = -1;
    std::vector<int> cover_vertices_used; // X, host ids
    std::vector<int> cover_colours_used;  // Y, host ids
};

/// Covering step then absorbing step. Path mode returns a rainbow Hamilton
/// path containing pprime; cycle mode returns a rainbow cycle through every
/// colour that omits exactly one leftover vertex (forbidden_vertex when
/// given).
AbsorbResult absorb(const ColouredGraph& g, const AbsorberPartition& part, const HAbsorber& ab,
                    const std::vector<int>& pprime, bool cycle_mode,
                    int forbidden_vertex = -1);

} // namespace rainbow
