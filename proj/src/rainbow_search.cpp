#include "rainbow/rainbow_search.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <stdexcept>

#include "rainbow/factorgen.hpp"

namespace rainbow {

namespace {

// Backtracking over paths grown at both ends from a pivot vertex. Every
// target path contains the pivot, so a pivot sweep is a complete search.
struct PathSearch {
    const ColouredGraph& g;
    std::uint64_t budget;
    std::uint64_t nodes = 0;
    bool out_of_budget = false;
    int target_len; // vertices in a complete path
    std::vector<char> visited;
    std::vector<char> colour_used; // by colour id
    std::deque<int> path;

    PathSearch(const ColouredGraph& g_, std::uint64_t b, int t)
        : g(g_), budget(b), target_len(t), visited(g_.n(), 0) {
        int maxc = g.colours().empty() ? -1 : g.colours().back();
        colour_used.assign(maxc + 1, 0);
    }

    std::vector<std::pair<int, int>> extensions(int end) const {
        std::vector<std::pair<int, int>> out; // (vertex, colour)
        for (int c : g.colours()) {
            if (colour_used[c]) continue;
            int u = g.nbr_raw(end, c);
            if (u != ColouredGraph::absent && !visited[u]) out.push_back({u, c});
        }
        return out;
    }

    // Every unvisited vertex needs a feasible edge into the remaining
    // universe; at most two may have exactly one (they can only be final
    // endpoints). Feasibility only shrinks, so pruning on it is safe.
    bool degree_prune() const {
        int ones = 0;
        int front = path.front(), back = path.back();
        for (int v = 0; v < g.n(); ++v) {
            if (visited[v]) continue;
            int deg = 0;
            for (int c : g.colours()) {
                if (colour_used[c]) continue;
                int u = g.nbr_raw(v, c);
                if (u == ColouredGraph::absent) continue;
                if (!visited[u] || u == front || u == back) {
                    if (++deg >= 2) break;
                }
            }
            if (deg == 0) return true;
            if (deg == 1 && ++ones > 2) return true;
        }
        return false;
    }

    bool dfs(std::vector<int>& found) {
        if ((int)path.size() == target_len) {
            found.assign(path.begin(), path.end());
            return true;
        }
        if (++nodes > budget) {
            out_of_budget = true;
            return false;
        }
        auto front_ext = extensions(path.front());
        auto back_ext = extensions(path.back());
        bool use_front = front_ext.size() < back_ext.size(); // fail-first
        const auto& ext = use_front ? front_ext : back_ext;
        if (ext.empty() && (use_front ? back_ext : front_ext).empty()) return false;
        if ((int)path.size() + 1 < target_len && degree_prune()) return false;
        for (auto [u, c] : ext) {
            visited[u] = 1;
            colour_used[c] = 1;
            if (use_front)
                path.push_front(u);
            else
                path.push_back(u);
            if (dfs(found)) return true;
            if (use_front)
                path.pop_front();
            else
                path.pop_back();
            visited[u] = 0;
            colour_used[c] = 0;
            if (out_of_budget) return false;
        }
        return false;
    }

    bool run_from(int pivot, std::vector<int>& found) {
        std::fill(visited.begin(), visited.end(), 0);
        std::fill(colour_used.begin(), colour_used.end(), 0);
        path.clear();
        path.push_back(pivot);
        visited[pivot] = 1;
        return dfs(found);
    }
};

} // namespace

SearchResult exact_rainbow_hamilton_path(const ColouredGraph& g, std::uint64_t budget) {
    SearchResult res;
    if (g.n() == 0) {
        res.outcome = SearchOutcome::None;
        return res;
    }
    PathSearch s(g, budget, g.n());
    std::vector<int> found;
    // Any Hamilton path contains vertex 0.
    if (s.run_from(0, found)) {
        res.outcome = SearchOutcome::Found;
        res.path = found;
    } else {
        res.outcome = s.out_of_budget ? SearchOutcome::BudgetExhausted : SearchOutcome::None;
    }
    res.nodes = s.nodes;
    return res;
}

SearchResult exact_andersen_path(const ColouredGraph& g, std::uint64_t budget) {
    SearchResult res;
    if (g.n() <= 1) {
        res.outcome = SearchOutcome::None;
        return res;
    }
    // A path on n-1 vertices omits one vertex, so it contains 0 or 1.
    PathSearch s(g, budget, g.n() - 1);
    std::vector<int> found;
    for (int pivot : {0, 1}) {
        if (s.run_from(pivot, found)) {
            res.outcome = SearchOutcome::Found;
            res.path = found;
            res.nodes = s.nodes;
            return res;
        }
        if (s.out_of_budget) break;
    }
    res.outcome = s.out_of_budget ? SearchOutcome::BudgetExhausted : SearchOutcome::None;
    res.nodes = s.nodes;
    return res;
}

namespace {

// Cycle search: grow a path over the allowed vertices and close it when
// complete. The cycle must use every colour of g.
struct CycleSearch {
    const ColouredGraph& g;
    std::uint64_t budget;
    std::uint64_t nodes = 0;
    bool out_of_budget = false;

    explicit CycleSearch(const ColouredGraph& g_, std::uint64_t b) : g(g_), budget(b) {}

    bool search(int omit, std::vector<int>& found) {
        int m = g.n() - (omit >= 0 ? 1 : 0);
        if (m != g.num_colours()) return false; // cycle length must equal colour count
        int start = omit == 0 ? 1 : 0;
        std::vector<char> visited(g.n(), 0);
        int maxc = g.colours().back();
        std::vector<char> used(maxc + 1, 0);
        std::vector<int> path = {start};
        visited[start] = 1;
        if (omit >= 0) visited[omit] = 1;
        std::function<bool()> dfs = [&]() -> bool {
            if (++nodes > budget) {
                out_of_budget = true;
                return false;
            }
            if ((int)path.size() == m) {
                int c = g.edge_colour(path.back(), path.front());
                if (c != ColouredGraph::absent && !used[c]) {
                    found = path;
                    return true;
                }
                return false;
            }
            int end = path.back();
            for (int c : g.colours()) {
                if (used[c]) continue;
                int u = g.nbr_raw(end, c);
                if (u == ColouredGraph::absent || visited[u]) continue;
                visited[u] = 1;
                used[c] = 1;
                path.push_back(u);
                if (dfs()) return true;
                path.pop_back();
                visited[u] = 0;
                used[c] = 0;
                if (out_of_budget) return false;
            }
            return false;
        };
        return dfs();
    }
};

} // namespace

SearchResult exact_all_colour_cycle(const ColouredGraph& g, int omit, std::uint64_t budget) {
    SearchResult res;
    CycleSearch s(g, budget);
    std::vector<int> found;
    if (g.num_colours() == g.n() - 1) {
        // Full factorization: the cycle misses exactly one vertex.
        if (omit >= 0) {
            if (s.search(omit, found)) {
                res.outcome = SearchOutcome::Found;
                res.path = found;
                res.nodes = s.nodes;
                return res;
            }
        } else {
            for (int w = 0; w < g.n() && !s.out_of_budget; ++w)
                if (s.search(w, found)) {
                    res.outcome = SearchOutcome::Found;
                    res.path = found;
                    res.nodes = s.nodes;
                    return res;
                }
        }
    } else {
        if (s.search(-1, found)) {
            res.outcome = SearchOutcome::Found;
            res.path = found;
            res.nodes = s.nodes;
            return res;
        }
    }
    res.outcome = s.out_of_budget ? SearchOutcome::BudgetExhausted : SearchOutcome::None;
    res.nodes = s.nodes;
    return res;
}

SliceView SliceView::everything(const ColouredGraph& g) {
    SliceView s;
    s.vertex_ok.assign(g.n(), 1);
    int maxc = g.colours().empty() ? -1 : g.colours().back();
    s.colour_ok.assign(maxc + 1, 0);
    for (int c : g.colours()) s.colour_ok[c] = 1;
    return s;
}

SliceView SliceView::of_partition(const ColouredGraph& g, const AbsorberPartition& part,
                                  Slice vslice, Slice cslice, const EdgeSet* edges) {
    SliceView s;
    s.vertex_ok.assign(g.n(), 0);
    for (int v : part.vertices_in(vslice)) s.vertex_ok[v] = 1;
    int maxc = g.colours().empty() ? -1 : g.colours().back();
    s.colour_ok.assign(maxc + 1, 0);
    for (int c : part.colours_in(cslice)) s.colour_ok[c] = 1;
    s.edges = edges;
    return s;
}

namespace {

struct GreedyPathState {
    std::deque<int> path;
    std::vector<char> visited;
    std::vector<char> colour_used;

    std::vector<int> as_vector() const { return {path.begin(), path.end()}; }
};

int slice_vertex_count(const SliceView& s) {
    int n = 0;
    for (char c : s.vertex_ok) n += c;
    return n;
}

int slice_colour_count(const SliceView& s) {
    int n = 0;
    for (char c : s.colour_ok) n += c;
    return n;
}

} // namespace

LongPathResult long_rainbow_path(const ColouredGraph& g, const SliceView& slice, int restarts,
                                 Rng& rng, int rotations_per_restart, int stop_at_remainder) {
    int total_v = slice_vertex_count(slice);
    int total_c = slice_colour_count(slice);
    LongPathResult best;
    best.remainder_vertices = total_v;
    best.remainder_colours = total_c;
    if (total_v == 0) return best;

    std::vector<int> allowed;
    for (int v = 0; v < g.n(); ++v)
        if (slice.vertex_ok[v]) allowed.push_back(v);

    auto edge_ok = [&](int u, int v) { return slice.edges == nullptr || slice.edges->has(u, v); };

    auto feasible = [&](const GreedyPathState& st, int end, std::vector<std::pair<int, int>>& out) {
        out.clear();
        for (int c : g.colours()) {
            if (!slice.colour_ok[c] || st.colour_used[c]) continue;
            int u = g.nbr_raw(end, c);
            if (u == ColouredGraph::absent || !slice.vertex_ok[u] || st.visited[u]) continue;
            if (!edge_ok(end, u)) continue;
            out.push_back({u, c});
        }
    };

    for (int r = 0; r < std::max(1, restarts); ++r) {
        GreedyPathState st;
        st.visited.assign(g.n(), 0);
        st.colour_used.assign(slice.colour_ok.size(), 0);
        int start = allowed[(std::size_t)rng.below(allowed.size())];
        st.path.push_back(start);
        st.visited[start] = 1;

        int rotations_left = rotations_per_restart;
        int perturbations_left = 1 + rotations_per_restart / 8;
        std::vector<std::pair<int, int>> fx, bx;
        while (true) {
            feasible(st, st.path.front(), fx);
            feasible(st, st.path.back(), bx);
            if (fx.empty() && bx.empty()) {
                if (st.path.size() < 4) break;
                if (rotations_left-- <= 0) {
                    // Ruin and recreate: drop a chunk off one end, freeing
                    // its colours, and grow again from there. Keeps the bulk
                    // of a long path instead of restarting cold.
                    if (perturbations_left-- <= 0) break;
                    rotations_left = rotations_per_restart / 4;
                    std::size_t chunk =
                        2 + (std::size_t)rng.below(std::min<std::uint64_t>(
                                40, (std::uint64_t)st.path.size() / 4));
                    bool from_back = rng.below(2) == 0;
                    for (std::size_t t = 0; t < chunk && st.path.size() > 2; ++t) {
                        int gone;
                        int nb;
                        if (from_back) {
                            gone = st.path.back();
                            st.path.pop_back();
                            nb = st.path.back();
                        } else {
                            gone = st.path.front();
                            st.path.pop_front();
                            nb = st.path.front();
                        }
                        st.visited[gone] = 0;
                        st.colour_used[g.edge_colour(gone, nb)] = 0;
                    }
                    continue;
                }

                // Insertion: splice an unvisited vertex between consecutive
                // path vertices, recycling the colour of the cut edge. This
                // is what closes out the last few stragglers.
                bool moved = false;
                std::vector<int> pv(st.path.begin(), st.path.end());
                std::size_t len = pv.size();
                for (int w : allowed) {
                    if (st.visited[w] || moved) continue;
                    for (std::size_t i = 0; i + 1 < len && !moved; ++i) {
                        int ca = g.edge_colour(pv[i], w), cb = g.edge_colour(w, pv[i + 1]);
                        if (ca == ColouredGraph::absent || cb == ColouredGraph::absent ||
                            ca == cb)
                            continue;
                        if (!slice.colour_ok[ca] || !slice.colour_ok[cb]) continue;
                        if (!edge_ok(pv[i], w) || !edge_ok(w, pv[i + 1])) continue;
                        int freed = g.edge_colour(pv[i], pv[i + 1]);
                        if ((st.colour_used[ca] && ca != freed) ||
                            (st.colour_used[cb] && cb != freed))
                            continue;
                        st.colour_used[freed] = 0;
                        st.colour_used[ca] = 1;
                        st.colour_used[cb] = 1;
                        st.visited[w] = 1;
                        st.path.insert(st.path.begin() + (long)i + 1, w);
                        moved = true;
                    }
                }
                if (moved) continue;

                // Rotation at a random end: re-root the path to expose a new
                // endpoint.
                bool rotated = false;
                bool at_back = rng.below(2) == 0;
                if (!at_back) {
                    std::reverse(pv.begin(), pv.end()); // rotate the front end
                }
                int back = pv.back();
                std::size_t tries = len;
                for (std::size_t t = 0; t < tries && !rotated; ++t) {
                    std::size_t i = (std::size_t)rng.below(len - 3); // interior index
                    int x = pv[i];
                    int cx = g.edge_colour(back, x);
                    if (cx == ColouredGraph::absent || !slice.colour_ok[cx] || !edge_ok(back, x))
                        continue;
                    int removed = g.edge_colour(pv[i], pv[i + 1]);
                    if (st.colour_used[cx] && cx != removed) continue;
                    // Flip the segment after x.
                    st.colour_used[removed] = 0;
                    st.colour_used[cx] = 1;
                    std::vector<int> np(pv.begin(), pv.begin() + i + 1);
                    for (std::size_t j = len; j > i + 1; --j) np.push_back(pv[j - 1]);
                    st.path.assign(np.begin(), np.end());
                    rotated = true;
                }
                if (!rotated) break;
                continue;
            }
            bool use_front = !fx.empty() && (bx.empty() || fx.size() < bx.size());
            auto& ext = use_front ? fx : bx;
            auto [u, c] = ext[(std::size_t)rng.below(ext.size())];
            st.visited[u] = 1;
            st.colour_used[c] = 1;
            if (use_front)
                st.path.push_front(u);
            else
                st.path.push_back(u);
        }

        auto cand = st.as_vector();
        int rv = total_v - (int)cand.size();
        int rc = total_c - ((int)cand.size() - 1);
        bool better = cand.size() > best.path.size() ||
                      (cand.size() == best.path.size() && cand < best.path);
        if (better) {
            best.path = cand;
            best.remainder_vertices = rv;
            best.remainder_colours = rc;
        }
        best.restarts_used = r + 1;
        if (best.remainder_vertices <= stop_at_remainder) break;
    }
    return best;
}

namespace {

void add_stage(PipelineReport& rep, const std::string& name, bool ok, const std::string& detail) {
    rep.stages.push_back({name, ok, detail});
}

// Template size from the paper coupling 2m = (eta - 2 eps) n, rounded down.
int derive_m(const AbsorberConfig& cfg, int n) {
    Rational two_m = (cfg.eta - Rational(2) * cfg.eps) * Rational(n);
    std::int64_t m = two_m.num() / (2 * two_m.den());
    return (int)std::max<std::int64_t>(m, 0);
}

PipelineReport pipeline_even(const ColouredGraph& g, const PipelineOptions& opts,
                             std::uint64_t seed, int forbidden) {
    PipelineReport rep;
    rep.n = g.n();
    rep.seed = seed;
    rep.outcome = "not_found";
    g.validate_full();
    Rng rng(seed);

    auto finish_verify = [&](bool cycle) {
        if (cycle)
            rep.verified = (bool)verify_rainbow_cycle_all_colours(g, rep.path);
        else
            rep.verified = (bool)verify_rainbow_hamilton_path(g, rep.path);
    };

    // Absorber route.
    bool absorber_done = false;
    try {
        AbsorberPartition part = partition_random(g, opts.cfg, rng);
        if (forbidden >= 0) part.vertex_slice[forbidden] = Slice::Main;
        add_stage(rep, "partition", true, "seed " + std::to_string(part.seed));
        int m = opts.m_override > 0 ? opts.m_override : derive_m(opts.cfg, g.n());
        if (m < 1) throw std::invalid_argument("derived template size m < 1");
        EmbeddedTemplate emb = embed_template(part, m, opts.strategy, &rng);
        add_stage(rep, "template", true,
                  "m=" + std::to_string(m) + ", sides " + std::to_string(emb.t.a_size));
        auto built = build_h_absorber(g, part, emb, opts.cfg.gamma.to_double());
        if (!built.ok) throw std::runtime_error(built.stage + ": " + built.detail);
        add_stage(rep, "absorber", true,
                  std::to_string(built.absorber->gadgets.size()) + " gadgets");
        SliceView main = SliceView::of_partition(g, part, Slice::Main, Slice::Main, nullptr);
        if (forbidden >= 0) main.vertex_ok[forbidden] = 0;
        auto lp = long_rainbow_path(g, main, opts.long_path_restarts, rng);
        add_stage(rep, "long_path", true,
                  "len " + std::to_string(lp.path.size()) + ", remainder " +
                      std::to_string(lp.remainder_vertices) + "v/" +
                      std::to_string(lp.remainder_colours) + "c");
        auto ar = absorb(g, part, *built.absorber, lp.path, opts.cycle_mode, forbidden);
        if (!ar.ok) throw std::runtime_error("absorb: " + ar.failure);
        rep.path = ar.path;
        rep.is_cycle = ar.is_cycle;
        rep.omitted_vertex = ar.omitted_vertex;
        rep.outcome = ar.is_cycle ? "all_colour_cycle" : "hamilton_path";
        add_stage(rep, "absorb", true, "");
        finish_verify(ar.is_cycle);
        absorber_done = true;
    } catch (const std::exception& e) {
        add_stage(rep, "absorber_route", false, e.what());
    }
    if (absorber_done) return rep;

    // Heuristic fallback over the whole graph.
    if (!opts.cycle_mode) {
        SliceView all = SliceView::everything(g);
        auto lp = long_rainbow_path(g, all, opts.long_path_restarts * 4, rng);
        if ((int)lp.path.size() == g.n()) {
            rep.path = lp.path;
            rep.outcome = "hamilton_path";
            add_stage(rep, "heuristic", true, "");
            finish_verify(false);
            return rep;
        }
        add_stage(rep, "heuristic", false,
                  "best length " + std::to_string(lp.path.size()));
        if (opts.allow_exact_fallback) {
            auto ex = exact_rainbow_hamilton_path(g, opts.exact_budget);
            if (ex.outcome == SearchOutcome::Found) {
                rep.path = ex.path;
                rep.outcome = "hamilton_path";
                add_stage(rep, "exact", true, "");
                finish_verify(false);
            } else {
                add_stage(rep, "exact", false,
                          ex.outcome == SearchOutcome::None ? "none" : "budget exhausted");
            }
        }
        return rep;
    }

    if (opts.allow_exact_fallback) {
        auto ex = exact_all_colour_cycle(g, forbidden, opts.exact_budget);
        if (ex.outcome == SearchOutcome::Found) {
            rep.path = ex.path;
            rep.is_cycle = true;
            rep.outcome = "all_colour_cycle";
            add_stage(rep, "exact", true, "");
            finish_verify(true);
        } else {
            add_stage(rep, "exact", false,
                      ex.outcome == SearchOutcome::None ? "none" : "budget exhausted");
        }
    }
    return rep;
}

} // namespace

PipelineReport full_pipeline(const ColouredGraph& g, const PipelineOptions& opts,
                             std::uint64_t seed) {
    if (g.n() % 2 == 0) return pipeline_even(g, opts, seed, -1);

    // Odd order: lift to the even 1-factorization, find an all-colour cycle
    // avoiding the lifted vertex, read the result back down.
    PipelineReport rep;
    rep.n = g.n();
    rep.seed = seed;
    rep.odd_input = true;
    rep.outcome = "not_found";
    g.validate_odd_optimal();
    ColouredGraph lifted = odd_to_even(g);
    add_stage(rep, "odd_lift", true, "lifted to n=" + std::to_string(lifted.n()));
    PipelineOptions sub = opts;
    sub.cycle_mode = true;
    PipelineReport inner = pipeline_even(lifted, sub, seed, g.n());
    for (auto& s : inner.stages) rep.stages.push_back(s);
    if (inner.outcome != "all_colour_cycle") return rep;

    // The cycle avoids the lifted vertex, so it is a rainbow Hamilton cycle
    // of the odd graph; dropping its closing edge gives a Hamilton path.
    rep.path = inner.path;
    if (opts.cycle_mode) {
        rep.is_cycle = true;
        rep.outcome = "all_colour_cycle";
        rep.verified = (bool)verify_rainbow_cycle_all_colours(g, rep.path);
    } else {
        rep.is_cycle = false;
        rep.outcome = "hamilton_path";
        rep.verified = (bool)verify_rainbow_hamilton_path(g, rep.path);
    }
    return rep;
}

} // namespace rainbow
