#include "rainbow/coloured_graph.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace rainbow {

using nlohmann::json;

namespace {
std::string pair_str(int u, int v) {
    return "{" + std::to_string(u) + "," + std::to_string(v) + "}";
}
} // namespace

ColouredGraph ColouredGraph::from_edges(int n, const std::vector<int>& colours,
                                        const std::vector<std::array<int, 3>>& edges) {
    if (n < 0) throw std::invalid_argument("vertex count must be non-negative");
    ColouredGraph g;
    g.n_ = n;
    g.colours_ = colours;
    std::sort(g.colours_.begin(), g.colours_.end());
    if (std::adjacent_find(g.colours_.begin(), g.colours_.end()) != g.colours_.end())
        throw std::invalid_argument("duplicate colour id");
    for (int c : g.colours_)
        if (c < 0) throw std::invalid_argument("negative colour id");
    int maxc = g.colours_.empty() ? -1 : g.colours_.back();
    g.colour_pos_.assign(maxc + 1, -1);
    for (std::size_t i = 0; i < g.colours_.size(); ++i) g.colour_pos_[g.colours_[i]] = (int)i;
    g.nbr_.assign((std::size_t)n * g.colours_.size(), absent);
    g.pair_colour_.assign((std::size_t)n * n, absent);

    std::set<std::pair<int, int>> seen;
    for (const auto& e : edges) {
        int u = e[0], v = e[1], c = e[2];
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw std::invalid_argument("edge endpoint out of range: " + pair_str(u, v));
        if (u == v) throw std::invalid_argument("loop at vertex " + std::to_string(u));
        if (!g.has_colour(c))
            throw std::invalid_argument("edge colour " + std::to_string(c) + " not in colour set");
        auto key = std::minmax(u, v);
        if (!seen.insert(key).second)
            throw std::invalid_argument("pair " + pair_str(key.first, key.second) +
                                        " covered more than once");
        int cp = g.colour_pos_[c];
        if (g.nbr_by_pos(u, cp) != absent)
            throw std::invalid_argument("colour " + std::to_string(c) +
                                        " repeated at vertex " + std::to_string(u));
        if (g.nbr_by_pos(v, cp) != absent)
            throw std::invalid_argument("colour " + std::to_string(c) +
                                        " repeated at vertex " + std::to_string(v));
        g.nbr_[(std::size_t)u * g.colours_.size() + cp] = v;
        g.nbr_[(std::size_t)v * g.colours_.size() + cp] = u;
        g.pair_colour_[(std::size_t)u * n + v] = c;
        g.pair_colour_[(std::size_t)v * n + u] = c;
    }
    return g;
}

void ColouredGraph::check_vertex(int v) const {
    if (v < 0 || v >= n_)
        throw std::invalid_argument("vertex " + std::to_string(v) + " out of range");
}

void ColouredGraph::check_colour(int c) const {
    if (!has_colour(c))
        throw std::invalid_argument("colour " + std::to_string(c) + " not in colour set");
}

std::optional<int> ColouredGraph::c_neighbour(int v, int c) const {
    check_vertex(v);
    check_colour(c);
    int u = nbr_raw(v, c);
    if (u == absent) return std::nullopt;
    return u;
}

std::optional<int> ColouredGraph::walk_end(int v, const std::array<int, 3>& cs) const {
    check_vertex(v);
    for (int c : cs) check_colour(c);
    int cur = v;
    for (int c : cs) {
        cur = nbr_raw(cur, c);
        if (cur == absent) return std::nullopt;
    }
    return cur;
}

std::size_t ColouredGraph::count_edges_within(const std::vector<int>& vs,
                                              const std::vector<int>& ds) const {
    std::vector<char> in(n_, 0);
    for (int v : vs) { check_vertex(v); in[v] = 1; }
    std::size_t cnt = 0;
    for (int c : ds) {
        check_colour(c);
        int cp = colour_pos_[c];
        for (int v : vs) {
            int u = nbr_by_pos(v, cp);
            if (u != absent && u > v && in[u]) ++cnt;
        }
    }
    return cnt;
}

std::size_t ColouredGraph::crossing_edges(const std::vector<int>& a,
                                          const std::vector<int>& b) const {
    std::vector<char> ina(n_, 0), inb(n_, 0);
    for (int v : a) { check_vertex(v); ina[v] = 1; }
    for (int v : b) { check_vertex(v); inb[v] = 1; }
    std::size_t cnt = 0;
    for (int v = 0; v < n_; ++v)
        for (std::size_t i = 0; i < colours_.size(); ++i) {
            int u = nbr_by_pos(v, (int)i);
            if (u == absent || u <= v) continue;
            if ((ina[v] && inb[u]) || (ina[u] && inb[v])) ++cnt;
        }
    return cnt;
}

ColouredGraph ColouredGraph::restrict(const std::vector<int>& ds) const {
    for (int c : ds) check_colour(c);
    std::vector<std::array<int, 3>> kept;
    std::vector<char> keep(colour_pos_.size(), 0);
    for (int c : ds) keep[c] = 1;
    for (const auto& e : edge_list())
        if (keep[e[2]]) kept.push_back(e);
    return from_edges(n_, ds, kept);
}

std::vector<std::array<int, 3>> ColouredGraph::edge_list() const {
    std::vector<std::array<int, 3>> es;
    for (int v = 0; v < n_; ++v)
        for (std::size_t i = 0; i < colours_.size(); ++i) {
            int u = nbr_by_pos(v, (int)i);
            if (u != absent && u > v) es.push_back({v, u, colours_[i]});
        }
    std::sort(es.begin(), es.end());
    return es;
}

std::size_t ColouredGraph::edge_count() const {
    std::size_t cnt = 0;
    for (int x : nbr_)
        if (x != absent) ++cnt;
    return cnt / 2;
}

bool ColouredGraph::is_gdcol() const {
    return std::find(nbr_.begin(), nbr_.end(), absent) == nbr_.end();
}

bool ColouredGraph::is_full() const {
    return n_ % 2 == 0 && (int)colours_.size() == n_ - 1 && is_gdcol();
}

bool ColouredGraph::is_odd_optimal() const {
    if (n_ % 2 == 0 || (int)colours_.size() != n_) return false;
    for (std::size_t i = 0; i < colours_.size(); ++i) {
        int size = 0;
        for (int v = 0; v < n_; ++v)
            if (nbr_by_pos(v, (int)i) != absent) ++size;
        if (size != n_ - 1) return false; // class covers all but one vertex
    }
    return true;
}

void ColouredGraph::validate_gdcol() const {
    for (int v = 0; v < n_; ++v)
        for (std::size_t i = 0; i < colours_.size(); ++i)
            if (nbr_by_pos(v, (int)i) == absent)
                throw std::invalid_argument("colour " + std::to_string(colours_[i]) +
                                            " is not a perfect matching: vertex " +
                                            std::to_string(v) + " uncovered");
}

void ColouredGraph::validate_full() const {
    if (n_ % 2 != 0) throw std::invalid_argument("full mode requires even n");
    if ((int)colours_.size() != n_ - 1)
        throw std::invalid_argument("full mode requires exactly n-1 colours, got " +
                                    std::to_string(colours_.size()));
    validate_gdcol();
}

void ColouredGraph::validate_odd_optimal() const {
    if (n_ % 2 == 0) throw std::invalid_argument("odd optimal mode requires odd n");
    if ((int)colours_.size() != n_)
        throw std::invalid_argument("odd optimal mode requires exactly n colours");
    for (std::size_t i = 0; i < colours_.size(); ++i) {
        int size = 0;
        for (int v = 0; v < n_; ++v)
            if (nbr_by_pos(v, (int)i) != absent) ++size;
        if (size != n_ - 1)
            throw std::invalid_argument("colour " + std::to_string(colours_[i]) +
                                        " has class size " + std::to_string(size / 2) +
                                        ", expected " + std::to_string((n_ - 1) / 2));
    }
}

void ColouredGraph::unset_edge(int u, int v, int c) {
    int cp = colour_pos_[c];
    if (nbr_by_pos(u, cp) != v)
        throw std::logic_error("unset_edge: " + pair_str(u, v) + " does not carry colour " +
                               std::to_string(c));
    nbr_[(std::size_t)u * colours_.size() + cp] = absent;
    nbr_[(std::size_t)v * colours_.size() + cp] = absent;
    pair_colour_[(std::size_t)u * n_ + v] = absent;
    pair_colour_[(std::size_t)v * n_ + u] = absent;
}

void ColouredGraph::set_edge(int u, int v, int c) {
    int cp = colour_pos_[c];
    if (nbr_by_pos(u, cp) != absent || nbr_by_pos(v, cp) != absent)
        throw std::logic_error("set_edge: colour " + std::to_string(c) +
                               " already present at an endpoint of " + pair_str(u, v));
    if (has_edge(u, v))
        throw std::logic_error("set_edge: pair " + pair_str(u, v) + " already an edge");
    nbr_[(std::size_t)u * colours_.size() + cp] = v;
    nbr_[(std::size_t)v * colours_.size() + cp] = u;
    pair_colour_[(std::size_t)u * n_ + v] = c;
    pair_colour_[(std::size_t)v * n_ + u] = c;
}

VerifyResult verify_rainbow_path(const ColouredGraph& g, const std::vector<int>& vs) {
    std::vector<char> seen_v(g.n(), 0);
    std::set<int> seen_c;
    for (int v : vs) {
        if (v < 0 || v >= g.n()) return VerifyResult::fail("vertex out of range");
        if (seen_v[v]) return VerifyResult::fail("repeated vertex " + std::to_string(v));
        seen_v[v] = 1;
    }
    for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
        int c = g.edge_colour(vs[i], vs[i + 1]);
        if (c == ColouredGraph::absent)
            return VerifyResult::fail("non-edge " + pair_str(vs[i], vs[i + 1]));
        if (!seen_c.insert(c).second)
            return VerifyResult::fail("colour " + std::to_string(c) + " repeated at edge " +
                                      pair_str(vs[i], vs[i + 1]));
    }
    return VerifyResult::pass();
}

VerifyResult verify_rainbow_hamilton_path(const ColouredGraph& g, const std::vector<int>& vs) {
    if ((int)vs.size() != g.n())
        return VerifyResult::fail("path has " + std::to_string(vs.size()) + " vertices, needs " +
                                  std::to_string(g.n()));
    return verify_rainbow_path(g, vs);
}

VerifyResult verify_rainbow_cycle_all_colours(const ColouredGraph& g, const std::vector<int>& vs) {
    if (vs.size() < 3) return VerifyResult::fail("cycle needs at least 3 vertices");
    auto r = verify_rainbow_path(g, vs);
    if (!r) return r;
    int back = g.edge_colour(vs.back(), vs.front());
    if (back == ColouredGraph::absent)
        return VerifyResult::fail("non-edge " + pair_str(vs.back(), vs.front()));
    std::set<int> cols;
    for (std::size_t i = 0; i + 1 < vs.size(); ++i) cols.insert(g.edge_colour(vs[i], vs[i + 1]));
    if (!cols.insert(back).second)
        return VerifyResult::fail("closing edge repeats colour " + std::to_string(back));
    if ((int)cols.size() != g.num_colours())
        return VerifyResult::fail("cycle uses " + std::to_string(cols.size()) + " of " +
                                  std::to_string(g.num_colours()) + " colours");
    return VerifyResult::pass();
}

ColourPartition ColourPartition::equitable(const std::vector<int>& ds) {
    std::vector<int> sorted = ds;
    std::sort(sorted.begin(), sorted.end());
    ColourPartition p;
    std::size_t k = sorted.size(), at = 0;
    for (int i = 0; i < 4; ++i) {
        std::size_t take = k / 4 + ((std::size_t)i < k % 4 ? 1 : 0);
        p.parts[i].assign(sorted.begin() + at, sorted.begin() + at + take);
        at += take;
    }
    return p;
}

void ColourPartition::validate(const std::vector<int>& ds) const {
    std::set<int> all(ds.begin(), ds.end());
    std::set<int> got;
    std::size_t mn = SIZE_MAX, mx = 0;
    for (const auto& part : parts) {
        mn = std::min(mn, part.size());
        mx = std::max(mx, part.size());
        for (int c : part)
            if (!got.insert(c).second)
                throw std::invalid_argument("colour " + std::to_string(c) +
                                            " in two partition parts");
    }
    if (got != all) throw std::invalid_argument("partition does not cover the colour set");
    if (mx > mn + 1) throw std::invalid_argument("partition is not equitable");
}

int ColourPartition::part_of(int c) const {
    for (int i = 0; i < 4; ++i)
        for (int d : parts[i])
            if (d == c) return i;
    return -1;
}

std::string to_json(const ColouredGraph& g) {
    json j;
    j["n"] = g.n();
    j["colours"] = g.colours();
    json es = json::array();
    for (const auto& e : g.edge_list()) es.push_back({e[0], e[1], e[2]});
    j["edges"] = es;
    return j.dump();
}

ColouredGraph from_json(const std::string& text, bool require_gdcol) {
    json j = json::parse(text);
    int n = j.at("n").get<int>();
    std::vector<int> colours = j.at("colours").get<std::vector<int>>();
    std::vector<std::array<int, 3>> edges;
    std::array<int, 3> prev = {-1, -1, -1};
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 3) throw std::invalid_argument("edge must be [u,v,c]");
        std::array<int, 3> t = {e[0].get<int>(), e[1].get<int>(), e[2].get<int>()};
        if (t[0] >= t[1])
            throw std::invalid_argument("edge endpoints must satisfy u < v");
        if (!(prev < t)) throw std::invalid_argument("edges must be sorted lexicographically");
        prev = t;
        edges.push_back(t);
    }
    ColouredGraph g = ColouredGraph::from_edges(n, colours, edges);
    if (require_gdcol) g.validate_gdcol();
    return g;
}

ColouredGraph load_graph_file(const std::string& path, bool require_gdcol) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str(), require_gdcol);
}

void save_graph_file(const ColouredGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << to_json(g) << "\n";
}

std::size_t EdgeSet::count() const {
    std::size_t c = 0;
    for (bool b : bits_)
        if (b) ++c;
    return c / 2;
}

} // namespace rainbow
