#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rainbow/coloured_graph.hpp"
#include "rainbow/resilience.hpp"
#include "rainbow/rng.hpp"

namespace rainbow {

/// Bipartite template with designated flexible subsets on each side. The
/// robustness contract: deleting any balanced pair of flexible subsets up to
/// half the flexible size leaves a perfect matching.
struct BipartiteTemplate {
    int a_size = 0;
    int b_size = 0;
    std::vector<std::vector<int>> adj; // a -> sorted list of b
    std::vector<int> flex_a, flex_b;   // sorted

    bool has_edge(int a, int b) const;
    std::size_t edge_count() const;
    std::vector<std::pair<int, int>> edge_list() const;
    void add_edge(int a, int b);
    void validate_shape() const;

    /// K_{size,size} with the first flex sides flexible; trivially robust.
    static BipartiteTemplate complete(int size, int flex);
    /// 2RMBG shape: sides 7m, flexible sets 2m.
    static BipartiteTemplate complete_2rmbg(int m);
};

/// Maximum matching by augmenting paths, deterministic scan order. Returns
/// match_a (a -> b or -1).
std::vector<int> max_bipartite_matching(const BipartiteTemplate& t,
                                        const std::vector<char>& dead_a,
                                        const std::vector<char>& dead_b);

enum class RobustMode {
    TwoSided,   // X within flex_a, Y within flex_b, |X| = |Y| <= |flex_a|/2
    OneSidedB,  // B' within flex_b of size exactly |flex_b|/2, one-sided
};

struct RobustReport {
    Verdict verdict;
    std::vector<int> witness_x, witness_y;
    std::uint64_t pairs_checked = 0;
    bool sampled = false;
};

inline constexpr std::uint64_t kRobustBudget = 1'000'000;

RobustReport verify_robust(const BipartiteTemplate& t, RobustMode mode,
                           std::optional<std::uint64_t> sample_k = std::nullopt,
                           Rng* rng = nullptr, std::uint64_t budget = kRobustBudget);

/// Union construction: two one-sided robust pieces glued by a bipartite
/// graph between their B sides whose restriction to the two flexible halves
/// contains a perfect matching. Output sides: (A u B1' u B2') vs (B1 u B2 u A'),
/// flexible B1' and B1. When the pieces are (256,192)-regular and the glue is
/// 64-regular the union is 256-regular.
struct Rmbg3Piece {
    BipartiteTemplate t; // a_size = 3m, b_size = 4m, flex_b = B1 (size 2m)
    int m = 0;
};

BipartiteTemplate compose_2rmbg(const Rmbg3Piece& h, const Rmbg3Piece& hp,
                                const std::vector<std::vector<int>>& glue_adj);

/// One-sided complete piece: A = 3m vs B = 4m, flexible B1 = first 2m.
Rmbg3Piece complete_rmbg3(int m);

/// Glue where b_i joins b'_{(i+j) mod 4m} for j < degree; j = 0 supplies the
/// flexible-flexible perfect matching.
std::vector<std::vector<int>> circulant_glue(int m, int degree);

enum class TemplateStrategy { Complete, RandomRegular };

struct BuildReport {
    BipartiteTemplate result;
    int attempts = 0;
    bool verified = false;
};

/// `complete` returns the dense trivially-robust template. `random-regular`
/// samples d-regular bipartite templates and keeps the first that passes a
/// sampled robustness check; throws after max_attempts failures.
BuildReport build_template(int m, TemplateStrategy strategy, int degree = 64,
                           Rng* rng = nullptr, int max_attempts = 50,
                           std::uint64_t verify_samples = 10'000);

/// d-regular simple bipartite graph on (size,size) as d conflict-free random
/// permutations.
BipartiteTemplate random_regular_bipartite(int size, int degree, int flex, Rng& rng);

/// Perfect matching of t - (X u Y); throws when none exists (the template was
/// not robust) or when the deletion is out of contract.
std::vector<std::pair<int, int>> robust_match(const BipartiteTemplate& t,
                                              const std::vector<int>& del_x,
                                              const std::vector<int>& del_y);

std::string template_to_json(const BipartiteTemplate& t);
BipartiteTemplate template_from_json(const std::string& text);

} // namespace rainbow
