#include "rainbow/rmbg.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace rainbow {

using nlohmann::json;

bool BipartiteTemplate::has_edge(int a, int b) const {
    const auto& row = adj[a];
    return std::binary_search(row.begin(), row.end(), b);
}

std::size_t BipartiteTemplate::edge_count() const {
    std::size_t c = 0;
    for (const auto& row : adj) c += row.size();
    return c;
}

std::vector<std::pair<int, int>> BipartiteTemplate::edge_list() const {
    std::vector<std::pair<int, int>> es;
    for (int a = 0; a < a_size; ++a)
        for (int b : adj[a]) es.push_back({a, b});
    return es;
}

void BipartiteTemplate::add_edge(int a, int b) {
    auto& row = adj[a];
    auto it = std::lower_bound(row.begin(), row.end(), b);
    if (it != row.end() && *it == b) throw std::invalid_argument("duplicate template edge");
    row.insert(it, b);
}

void BipartiteTemplate::validate_shape() const {
    if ((int)adj.size() != a_size) throw std::invalid_argument("adjacency size mismatch");
    for (const auto& row : adj)
        for (int b : row)
            if (b < 0 || b >= b_size) throw std::invalid_argument("template edge out of range");
    for (int a : flex_a)
        if (a < 0 || a >= a_size) throw std::invalid_argument("flexible A vertex out of range");
    for (int b : flex_b)
        if (b < 0 || b >= b_size) throw std::invalid_argument("flexible B vertex out of range");
    if (!std::is_sorted(flex_a.begin(), flex_a.end()) ||
        !std::is_sorted(flex_b.begin(), flex_b.end()))
        throw std::invalid_argument("flexible sets must be sorted");
}

BipartiteTemplate BipartiteTemplate::complete(int size, int flex) {
    if (flex > size) throw std::invalid_argument("flexible set larger than side");
    BipartiteTemplate t;
    t.a_size = t.b_size = size;
    t.adj.assign(size, {});
    for (int a = 0; a < size; ++a) {
        t.adj[a].resize(size);
        std::iota(t.adj[a].begin(), t.adj[a].end(), 0);
    }
    t.flex_a.resize(flex);
    t.flex_b.resize(flex);
    std::iota(t.flex_a.begin(), t.flex_a.end(), 0);
    std::iota(t.flex_b.begin(), t.flex_b.end(), 0);
    return t;
}

BipartiteTemplate BipartiteTemplate::complete_2rmbg(int m) {
    return complete(7 * m, 2 * m);
}

std::vector<int> max_bipartite_matching(const BipartiteTemplate& t,
                                        const std::vector<char>& dead_a,
                                        const std::vector<char>& dead_b) {
    std::vector<int> match_a(t.a_size, -1), match_b(t.b_size, -1);
    std::vector<char> seen(t.b_size, 0);
    std::function<bool(int)> augment = [&](int a) -> bool {
        for (int b : t.adj[a]) {
            if (dead_b[b] || seen[b]) continue;
            seen[b] = 1;
            if (match_b[b] < 0 || augment(match_b[b])) {
                match_a[a] = b;
                match_b[b] = a;
                return true;
            }
        }
        return false;
    };
    for (int a = 0; a < t.a_size; ++a) {
        if (dead_a[a]) continue;
        std::fill(seen.begin(), seen.end(), 0);
        augment(a);
    }
    return match_a;
}

namespace {

bool has_perfect_matching_minus(const BipartiteTemplate& t, const std::vector<int>& del_a,
                                const std::vector<int>& del_b, std::vector<int>* out) {
    std::vector<char> dead_a(t.a_size, 0), dead_b(t.b_size, 0);
    for (int a : del_a) dead_a[a] = 1;
    for (int b : del_b) dead_b[b] = 1;
    auto match = max_bipartite_matching(t, dead_a, dead_b);
    int want = t.a_size - (int)del_a.size();
    int got = 0;
    for (int a = 0; a < t.a_size; ++a)
        if (!dead_a[a] && match[a] >= 0) ++got;
    if (got != want) return false;
    if (out) *out = match;
    return true;
}

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

void for_each_subset_of(const std::vector<int>& pool, int k,
                        const std::function<bool(const std::vector<int>&)>& fn) {
    if (k > (int)pool.size() || k < 0) return;
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<int> cur(k);
    int n = (int)pool.size();
    while (true) {
        for (int i = 0; i < k; ++i) cur[i] = pool[idx[i]];
        if (!fn(cur)) return;
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) return;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

std::vector<int> random_subset_of(Rng& rng, const std::vector<int>& pool, int k) {
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

RobustReport verify_robust(const BipartiteTemplate& t, RobustMode mode,
                           std::optional<std::uint64_t> sample_k, Rng* rng,
                           std::uint64_t budget) {
    t.validate_shape();
    RobustReport rep;
    rep.verdict = Verdict::Pass;

    auto check = [&](const std::vector<int>& x, const std::vector<int>& y) {
        ++rep.pairs_checked;
        if (!has_perfect_matching_minus(t, x, y, nullptr)) {
            rep.verdict = Verdict::Fail;
            rep.witness_x = x;
            rep.witness_y = y;
            return false;
        }
        return true;
    };

    if (mode == RobustMode::OneSidedB) {
        int half = (int)t.flex_b.size() / 2;
        if (sample_k) {
            if (!rng) throw std::invalid_argument("sampled mode needs an rng");
            rep.sampled = true;
            rep.verdict = Verdict::ProbablePass;
            for (std::uint64_t i = 0; i < *sample_k; ++i)
                if (!check({}, random_subset_of(*rng, t.flex_b, half))) break;
            return rep;
        }
        if (binom_capped(t.flex_b.size(), half, budget) > budget)
            throw std::invalid_argument("exhaustive robustness check over budget; use sampled");
        for_each_subset_of(t.flex_b, half,
                           [&](const std::vector<int>& y) { return check({}, y); });
        return rep;
    }

    if (t.a_size != t.b_size)
        throw std::invalid_argument("two-sided robustness requires balanced sides");
    if (t.flex_a.size() != t.flex_b.size())
        throw std::invalid_argument("flexible sets must have equal size");
    int half = (int)t.flex_a.size() / 2;

    if (sample_k) {
        if (!rng) throw std::invalid_argument("sampled mode needs an rng");
        rep.sampled = true;
        rep.verdict = Verdict::ProbablePass;
        for (std::uint64_t i = 0; i < *sample_k; ++i) {
            int s = (int)rng->below((std::uint64_t)half + 1);
            if (!check(random_subset_of(*rng, t.flex_a, s), random_subset_of(*rng, t.flex_b, s)))
                break;
        }
        return rep;
    }

    std::uint64_t cost = 0;
    for (int s = 0; s <= half; ++s) {
        std::uint64_t c = binom_capped(t.flex_a.size(), s, budget);
        if (c > budget || cost + c * c < cost) {
            cost = budget + 1;
            break;
        }
        cost += c * c;
        if (cost > budget) break;
    }
    if (cost > budget)
        throw std::invalid_argument("exhaustive robustness check over budget; use sampled");
    for (int s = 0; s <= half && rep.verdict == Verdict::Pass; ++s) {
        bool go = true;
        for_each_subset_of(t.flex_a, s, [&](const std::vector<int>& x) {
            for_each_subset_of(t.flex_b, s, [&](const std::vector<int>& y) {
                go = check(x, y);
                return go;
            });
            return go;
        });
    }
    return rep;
}

Rmbg3Piece complete_rmbg3(int m) {
    Rmbg3Piece p;
    p.m = m;
    p.t.a_size = 3 * m;
    p.t.b_size = 4 * m;
    p.t.adj.assign(3 * m, {});
    for (int a = 0; a < 3 * m; ++a) {
        p.t.adj[a].resize(4 * m);
        std::iota(p.t.adj[a].begin(), p.t.adj[a].end(), 0);
    }
    p.t.flex_b.resize(2 * m);
    std::iota(p.t.flex_b.begin(), p.t.flex_b.end(), 0);
    return p;
}

std::vector<std::vector<int>> circulant_glue(int m, int degree) {
    int size = 4 * m;
    if (degree > size) throw std::invalid_argument("glue degree exceeds side size");
    std::vector<std::vector<int>> adj(size);
    for (int i = 0; i < size; ++i) {
        for (int j = 0; j < degree; ++j) adj[i].push_back((i + j) % size);
        std::sort(adj[i].begin(), adj[i].end());
    }
    return adj;
}

BipartiteTemplate compose_2rmbg(const Rmbg3Piece& h, const Rmbg3Piece& hp,
                                const std::vector<std::vector<int>>& glue_adj) {
    if (h.m != hp.m) throw std::invalid_argument("pieces have mismatched m");
    int m = h.m;
    h.t.validate_shape();
    hp.t.validate_shape();
    if (h.t.a_size != 3 * m || h.t.b_size != 4 * m || (int)h.t.flex_b.size() != 2 * m)
        throw std::invalid_argument("first piece is not RMBG(3m,2m,2m) shaped");
    if (hp.t.a_size != 3 * m || hp.t.b_size != 4 * m || (int)hp.t.flex_b.size() != 2 * m)
        throw std::invalid_argument("second piece is not RMBG(3m,2m,2m) shaped");
    if ((int)glue_adj.size() != 4 * m)
        throw std::invalid_argument("glue must span the 4m B-vertices");

    // Flexible halves must be the first 2m indices on both B sides.
    for (int i = 0; i < 2 * m; ++i)
        if (h.t.flex_b[i] != i || hp.t.flex_b[i] != i)
            throw std::invalid_argument("flexible B sets must be the leading block");

    // The glue restricted to B1 x B1' must contain a perfect matching.
    {
        BipartiteTemplate restr;
        restr.a_size = restr.b_size = 2 * m;
        restr.adj.assign(2 * m, {});
        for (int i = 0; i < 2 * m; ++i)
            for (int j : glue_adj[i])
                if (j < 2 * m) restr.adj[i].push_back(j);
        std::vector<char> dead(2 * m, 0);
        auto match = max_bipartite_matching(restr, dead, dead);
        for (int i = 0; i < 2 * m; ++i)
            if (match[i] < 0)
                throw std::invalid_argument(
                    "glue restricted to the flexible halves has no perfect matching");
    }

    // New A side: A(H) then B1' then B2'. New B side: B1, B2, then A(H').
    BipartiteTemplate out;
    out.a_size = out.b_size = 7 * m;
    out.adj.assign(7 * m, {});
    auto a_of_bp = [&](int bp) { return 3 * m + bp; }; // B' index -> out A index
    auto b_of_b = [&](int b) { return b; };            // B index -> out B index
    auto b_of_ap = [&](int ap) { return 4 * m + ap; }; // A' index -> out B index

    for (int a = 0; a < 3 * m; ++a)
        for (int b : h.t.adj[a]) out.add_edge(a, b_of_b(b));
    for (int ap = 0; ap < 3 * m; ++ap)
        for (int bp : hp.t.adj[ap]) out.add_edge(a_of_bp(bp), b_of_ap(ap));
    std::set<std::pair<int, int>> seen;
    for (int b = 0; b < 4 * m; ++b)
        for (int bp : glue_adj[b])
            if (seen.insert({b, bp}).second) out.add_edge(a_of_bp(bp), b_of_b(b));

    out.flex_a.resize(2 * m);
    std::iota(out.flex_a.begin(), out.flex_a.end(), 3 * m); // B1'
    out.flex_b.resize(2 * m);
    std::iota(out.flex_b.begin(), out.flex_b.end(), 0); // B1
    out.validate_shape();
    return out;
}

BipartiteTemplate random_regular_bipartite(int size, int degree, int flex, Rng& rng) {
    if (degree > size) throw std::invalid_argument("degree exceeds side size");
    // Peel `degree` perfect matchings off the complete bipartite graph. The
    // remainder stays regular, so a matching always exists; randomized scan
    // order makes the sample non-degenerate.
    std::vector<std::set<int>> rows(size);
    std::vector<char> taken((std::size_t)size * size, 0);
    for (int d = 0; d < degree; ++d) {
        std::vector<int> match_a(size, -1), match_b(size, -1);
        std::vector<char> seen(size, 0);
        std::function<bool(int)> augment = [&](int a) -> bool {
            std::vector<int> order(size);
            std::iota(order.begin(), order.end(), 0);
            rng.shuffle(order);
            for (int b : order) {
                if (taken[(std::size_t)a * size + b] || seen[b]) continue;
                seen[b] = 1;
                if (match_b[b] < 0 || augment(match_b[b])) {
                    match_a[a] = b;
                    match_b[b] = a;
                    return true;
                }
            }
            return false;
        };
        std::vector<int> aorder(size);
        std::iota(aorder.begin(), aorder.end(), 0);
        rng.shuffle(aorder);
        for (int a : aorder) {
            std::fill(seen.begin(), seen.end(), 0);
            if (!augment(a))
                throw std::runtime_error("regular bipartite sampling lost a matching");
        }
        for (int a = 0; a < size; ++a) {
            rows[a].insert(match_a[a]);
            taken[(std::size_t)a * size + match_a[a]] = 1;
        }
    }
    BipartiteTemplate t;
    t.a_size = t.b_size = size;
    t.adj.assign(size, {});
    for (int a = 0; a < size; ++a) t.adj[a].assign(rows[a].begin(), rows[a].end());
    t.flex_a.resize(flex);
    t.flex_b.resize(flex);
    std::iota(t.flex_a.begin(), t.flex_a.end(), 0);
    std::iota(t.flex_b.begin(), t.flex_b.end(), 0);
    return t;
}

BuildReport build_template(int m, TemplateStrategy strategy, int degree, Rng* rng,
                           int max_attempts, std::uint64_t verify_samples) {
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    BuildReport rep;
    if (strategy == TemplateStrategy::Complete) {
        rep.result = BipartiteTemplate::complete_2rmbg(m);
        rep.attempts = 1;
        rep.verified = true; // Hall's condition holds outright
        return rep;
    }
    if (!rng) throw std::invalid_argument("random-regular strategy needs an rng");
    for (rep.attempts = 1; rep.attempts <= max_attempts; ++rep.attempts) {
        auto t = random_regular_bipartite(7 * m, degree, 2 * m, *rng);
        auto ver = verify_robust(t, RobustMode::TwoSided, verify_samples, rng);
        if (ver.verdict != Verdict::Fail) {
            rep.result = t;
            rep.verified = true;
            return rep;
        }
    }
    throw std::runtime_error("no verified random-regular template after " +
                             std::to_string(max_attempts) + " attempts");
}

std::vector<std::pair<int, int>> robust_match(const BipartiteTemplate& t,
                                              const std::vector<int>& del_x,
                                              const std::vector<int>& del_y) {
    t.validate_shape();
    if (del_x.size() != del_y.size())
        throw std::invalid_argument("deleted sets must have equal size");
    if (2 * del_x.size() > t.flex_a.size())
        throw std::invalid_argument("deletion exceeds half the flexible set");
    for (int a : del_x)
        if (!std::binary_search(t.flex_a.begin(), t.flex_a.end(), a))
            throw std::invalid_argument("deleted A vertex " + std::to_string(a) +
                                        " is not flexible");
    for (int b : del_y)
        if (!std::binary_search(t.flex_b.begin(), t.flex_b.end(), b))
            throw std::invalid_argument("deleted B vertex " + std::to_string(b) +
                                        " is not flexible");
    std::vector<int> match;
    if (!has_perfect_matching_minus(t, del_x, del_y, &match))
        throw std::runtime_error("template is not robust: no perfect matching after deletion");
    std::vector<char> dead(t.a_size, 0);
    for (int a : del_x) dead[a] = 1;
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < t.a_size; ++a)
        if (!dead[a]) out.push_back({a, match[a]});
    return out;
}

std::string template_to_json(const BipartiteTemplate& t) {
    json j;
    j["a_size"] = t.a_size;
    j["b_size"] = t.b_size;
    j["flex_a"] = t.flex_a;
    j["flex_b"] = t.flex_b;
    json es = json::array();
    for (auto [a, b] : t.edge_list()) es.push_back({a, b});
    j["edges"] = es;
    return j.dump();
}

BipartiteTemplate template_from_json(const std::string& text) {
    json j = json::parse(text);
    BipartiteTemplate t;
    t.a_size = j.at("a_size").get<int>();
    t.b_size = j.at("b_size").get<int>();
    t.flex_a = j.at("flex_a").get<std::vector<int>>();
    t.flex_b = j.at("flex_b").get<std::vector<int>>();
    t.adj.assign(t.a_size, {});
    for (const auto& e : j.at("edges")) t.add_edge(e[0].get<int>(), e[1].get<int>());
    t.validate_shape();
    return t;
}

} // namespace rainbow
