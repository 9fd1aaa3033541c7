#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rainbow {

/// A properly edge-coloured graph on vertices 0..n-1 whose colour classes are
/// (perfect) matchings, stored as the total lookup table vertex x colour ->
/// neighbour. This is the shape every switching and gadget enumeration walks,
/// so c-neighbour lookups are O(1). Values are immutable after construction;
/// mutating operations copy.
///
/// Modes, checked by the is_* predicates rather than carried as state:
///  - full factorization: n even, |D| = n-1, every entry defined;
///  - partial (G_D^col):  every entry defined, so the graph is |D|-regular;
///  - relaxed:            entries may be absent (odd-order optimal colourings).
class ColouredGraph {
public:
    static constexpr int absent = -1;

    ColouredGraph() : n_(0) {}

    /// Builds from an edge list [(u,v,colour)]. Rejects anything that is not
    /// a proper colouring of a simple loopless graph.
    static ColouredGraph from_edges(int n, const std::vector<int>& colours,
                                    const std::vector<std::array<int, 3>>& edges);

    int n() const { return n_; }
    const std::vector<int>& colours() const { return colours_; }
    int num_colours() const { return (int)colours_.size(); }
    bool has_colour(int c) const {
        return c >= 0 && c < (int)colour_pos_.size() && colour_pos_[c] >= 0;
    }

    /// Neighbour of v along colour c, or absent. Throws on out-of-range
    /// vertex or unknown colour id.
    std::optional<int> c_neighbour(int v, int c) const;

    /// End of the c1c2c3-walk starting at v; absent if any hop is missing.
    std::optional<int> walk_end(int v, const std::array<int, 3>& cs) const;

    /// Unchecked table lookup (colour index, not colour id).
    int nbr_by_pos(int v, int cpos) const { return nbr_[(std::size_t)v * colours_.size() + cpos]; }
    /// Unchecked lookup by colour id; caller guarantees has_colour(c).
    int nbr_raw(int v, int c) const { return nbr_by_pos(v, colour_pos_[c]); }

    int colour_pos(int c) const { return colour_pos_[c]; }

    /// Colour of edge uv, or absent if uv is not an edge. O(1).
    int edge_colour(int u, int v) const {
        check_vertex(u);
        check_vertex(v);
        if (u == v) return absent;
        return pair_colour_[(std::size_t)u * n_ + v];
    }
    bool has_edge(int u, int v) const { return edge_colour(u, v) != absent; }

    /// Number of edges with both ends in vs and colour in ds.
    std::size_t count_edges_within(const std::vector<int>& vs, const std::vector<int>& ds) const;

    /// Number of edges with one end in a and the other in b; an edge inside
    /// the intersection counts once.
    std::size_t crossing_edges(const std::vector<int>& a, const std::vector<int>& b) const;

    /// Keeps exactly the edges whose colour lies in ds (which must be a
    /// subset of the colour set).
    ColouredGraph restrict(const std::vector<int>& ds) const;

    std::vector<std::array<int, 3>> edge_list() const;
    std::size_t edge_count() const;

    // Mode predicates. validate_* variants throw with a precise message.
    bool is_gdcol() const;         // every (v,c) entry defined
    bool is_full() const;          // gdcol, n even, |D| = n-1
    bool is_odd_optimal() const;   // n odd, |D| = n, classes of size (n-1)/2
    void validate_gdcol() const;
    void validate_full() const;
    void validate_odd_optimal() const;

    // Raw mutation used by the switching module; callers re-validate.
    void unset_edge(int u, int v, int c);
    void set_edge(int u, int v, int c);

private:
    void check_vertex(int v) const;
    void check_colour(int c) const;

    int n_;
    std::vector<int> colours_;      // sorted colour ids
    std::vector<int> colour_pos_;   // colour id -> index into colours_, -1 if absent
    std::vector<int> nbr_;          // n * |colours|, vertex-major
    std::vector<int> pair_colour_;  // n * n, colour of each pair or absent
};

/// Result of a structural verification; converts to bool, carries the first
/// violated condition when it fails.
struct VerifyResult {
    bool ok = true;
    std::string reason;
    explicit operator bool() const { return ok; }
    static VerifyResult pass() { return {}; }
    static VerifyResult fail(std::string why) { return {false, std::move(why)}; }
};

/// Consecutive pairs must be edges and all edge colours distinct.
VerifyResult verify_rainbow_path(const ColouredGraph& g, const std::vector<int>& vs);
/// Rainbow path visiting every vertex.
VerifyResult verify_rainbow_hamilton_path(const ColouredGraph& g, const std::vector<int>& vs);
/// Closes up vs into a cycle; rainbow, and the colour set equals the whole
/// colour set of g.
VerifyResult verify_rainbow_cycle_all_colours(const ColouredGraph& g, const std::vector<int>& vs);

/// Four disjoint colour sets with union D, part sizes differing by at most 1.
struct ColourPartition {
    std::array<std::vector<int>, 4> parts;

    /// Deals the sorted colour set into four equitable contiguous blocks.
    static ColourPartition equitable(const std::vector<int>& ds);

    void validate(const std::vector<int>& ds) const;
    int part_of(int c) const; // 0..3, or -1
};

// JSON object {"n":..,"colours":[..],"edges":[[u,v,c],..]}, u<v, edges sorted.
std::string to_json(const ColouredGraph& g);
ColouredGraph from_json(const std::string& text, bool require_gdcol = true);
ColouredGraph load_graph_file(const std::string& path, bool require_gdcol = true);
void save_graph_file(const ColouredGraph& g, const std::string& path);

/// Set of unordered vertex pairs with O(1) membership, used for beta-random
/// subgraphs and planted-edge bookkeeping.
class EdgeSet {
public:
    EdgeSet() : n_(0) {}
    explicit EdgeSet(int n, bool all = false) : n_(n), bits_((std::size_t)n * n, all) {}
    int n() const { return n_; }
    bool empty_universe() const { return n_ == 0; }
    bool has(int u, int v) const { return bits_[(std::size_t)u * n_ + v]; }
    void insert(int u, int v) {
        bits_[(std::size_t)u * n_ + v] = true;
        bits_[(std::size_t)v * n_ + u] = true;
    }
    void erase(int u, int v) {
        bits_[(std::size_t)u * n_ + v] = false;
        bits_[(std::size_t)v * n_ + u] = false;
    }
    std::size_t count() const;

private:
    int n_;
    std::vector<bool> bits_;
};

} // namespace rainbow
