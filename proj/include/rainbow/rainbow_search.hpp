#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rainbow/absorber.hpp"
#include "rainbow/coloured_graph.hpp"
#include "rainbow/rng.hpp"

namespace rainbow {

enum class SearchOutcome { Found, None, BudgetExhausted };

struct SearchResult {
    SearchOutcome outcome;
    std::vector<int> path;
    std::uint64_t nodes = 0;
};

inline constexpr std::uint64_t kDefaultSearchBudget = 2'000'000'000ull;

/// Complete backtracking over vertex sequences with colour feasibility and
/// degree pruning; None is a proof of non-existence. Deterministic.
SearchResult exact_rainbow_hamilton_path(const ColouredGraph& g,
                                         std::uint64_t budget = kDefaultSearchBudget);

/// Same machinery, target length n-2 (all vertices but one).
SearchResult exact_andersen_path(const ColouredGraph& g,
                                 std::uint64_t budget = kDefaultSearchBudget);

/// Rainbow cycle using every colour. For an optimal odd colouring this is a
/// Hamilton cycle; for a 1-factorization the cycle spans all but one vertex,
/// chosen by `omit` (omit < 0 tries every choice).
SearchResult exact_all_colour_cycle(const ColouredGraph& g, int omit = -1,
                                    std::uint64_t budget = kDefaultSearchBudget);

struct SliceView {
    std::vector<char> vertex_ok; // by vertex id
    std::vector<char> colour_ok; // by colour id
    const EdgeSet* edges = nullptr;

    static SliceView everything(const ColouredGraph& g);
    static SliceView of_partition(const ColouredGraph& g, const AbsorberPartition& part,
                                  Slice vslice, Slice cslice, const EdgeSet* edges);
};

struct LongPathResult {
    std::vector<int> path;
    int remainder_vertices = 0;
    int remainder_colours = 0;
    int restarts_used = 0;
};

/// Greedy extension with rotation and insertion restarts inside the slice;
/// reports how much of the slice the best path missed. Kept-best is monotone
/// in the restart budget for a fixed seed. Stops early once the vertex
/// remainder reaches stop_at_remainder.
LongPathResult long_rainbow_path(const ColouredGraph& g, const SliceView& slice, int restarts,
                                 Rng& rng, int rotations_per_restart = 200,
                                 int stop_at_remainder = 0);

struct StageReport {
    std::string name;
    bool ok = false;
    std::string detail;
};

struct PipelineOptions {
    AbsorberConfig cfg = AbsorberConfig::relaxed(Rational(1, 100), Rational(3, 100),
                                                 Rational(1, 10), Rational(1, 4), Rational(0));
    bool paper_faithful = false;   // echoed into the report
    int m_override = -1;           // template size; <= 0 derives from cfg
    TemplateStrategy strategy = TemplateStrategy::Complete;
    bool cycle_mode = false;
    int long_path_restarts = 64;
    std::uint64_t exact_budget = 50'000'000;
    bool allow_exact_fallback = true;
};

struct PipelineReport {
    int n = 0;
    bool odd_input = false;
    std::uint64_t seed = 0;
    std::vector<StageReport> stages;
    std::string outcome; // hamilton_path | all_colour_cycle | not_found
    std::vector<int> path;
    bool is_cycle = false;
    int omitted_vertex = -1;
    bool verified = false;
};

/// Absorber route first (partition, template, gadgets, links, long path,
/// absorb), falling back to heuristic search and then exact search. Every
/// claimed path or cycle re-verifies before the report is returned. Odd
/// inputs run through the even lift and map back.
PipelineReport full_pipeline(const ColouredGraph& g, const PipelineOptions& opts,
                             std::uint64_t seed);

} // namespace rainbow
