// Command-line front end: generation, validation, switching chains,
// resilience statistics, templates, search, the absorber pipeline, and the
// Latin-square correspondence. Stochastic subcommands require --seed so
// every run is reproducible.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rainbow/absorber.hpp"
#include "rainbow/coloured_graph.hpp"
#include "rainbow/factorgen.hpp"
#include "rainbow/latin.hpp"
#include "rainbow/rainbow_search.hpp"
#include "rainbow/resilience.hpp"
#include "rainbow/rmbg.hpp"
#include "rainbow/rng.hpp"
#include "rainbow/switching.hpp"

using namespace rainbow;
using nlohmann::json;

namespace {

struct Report {
    json j;
    bool as_json = false;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    explicit Report(const std::string& command) { j["command"] = command; }

    void set(const std::string& key, json value) { j[key] = std::move(value); }
    void stage(const std::string& name, bool ok, const std::string& detail) {
        j["stages"].push_back({{"name", name}, {"ok", ok}, {"detail", detail}});
        if (!as_json)
            std::cout << (ok ? "[ok] " : "[fail] ") << name
                      << (detail.empty() ? "" : ": " + detail) << "\n";
    }
    void line(const std::string& text) {
        if (!as_json) std::cout << text << "\n";
    }
    int finish(int code) {
        j["wall_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
        j["exit"] = code;
        if (as_json) std::cout << j.dump(2) << "\n";
        return code;
    }
};

std::vector<int> parse_csv(const std::string& s) {
    std::vector<int> out;
    std::size_t at = 0;
    while (at < s.size()) {
        std::size_t comma = s.find(',', at);
        if (comma == std::string::npos) comma = s.size();
        out.push_back(std::stoi(s.substr(at, comma - at)));
        at = comma + 1;
    }
    return out;
}

json verdict_json(const ResilienceReport& rep) {
    json out;
    out["verdict"] = rep.verdict == Verdict::Pass           ? "pass"
                     : rep.verdict == Verdict::ProbablePass ? "probable-pass"
                                                            : "fail";
    out["pairs_checked"] = rep.pairs_checked;
    out["threshold"] = rep.threshold;
    out["sampled"] = rep.sampled;
    if (rep.verdict == Verdict::Fail) {
        out["witness_vertices"] = rep.witness_vs;
        out["witness_second"] = rep.witness_ds;
        out["witness_count"] = rep.witness_count;
    }
    return out;
}

AbsorberConfig config_from_json(const json& j) {
    auto rat = [&](const char* key, Rational fallback) {
        if (!j.contains(key)) return fallback;
        const auto& v = j.at(key);
        if (v.is_array()) return Rational(v[0].get<std::int64_t>(), v[1].get<std::int64_t>());
        return Rational((std::int64_t)(v.get<double>() * 1'000'000), 1'000'000);
    };
    Rational eps = rat("eps", Rational(1, 100)), gamma = rat("gamma", Rational(3, 100));
    Rational eta = rat("eta", Rational(1, 10)), mu = rat("mu", Rational(1, 4));
    if (j.value("paper_faithful", false)) return AbsorberConfig::paper(eps, gamma, eta, mu);
    return AbsorberConfig::relaxed(eps, gamma, eta, mu, rat("edges_over_n", Rational(1, 50)));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rainbow: 1-factorizations, switchings, absorbers and Latin transversals"};
    app.require_subcommand(1);
    bool as_json = false;
    int threads = 1;
    app.add_flag("--json", as_json, "emit a machine-readable report");
    app.add_option("--threads", threads, "cap on internal parallelism (kernels are serial)");

    auto* gen = app.add_subcommand("gen", "constructors and exact enumeration");
    gen->require_subcommand(1);
    auto* gen_canonical = gen->add_subcommand("canonical", "circle-method 1-factorization");
    auto* gen_xor = gen->add_subcommand("xor", "bitvector colouring with no rainbow Hamilton path");
    auto* gen_sample = gen->add_subcommand("sample", "exactly uniform sample, n <= 8");
    auto* gen_count = gen->add_subcommand("count", "count distinct 1-factorizations, n <= 8");
    int n = 0;
    std::uint64_t seed = 0;
    std::string out_file, in_file;
    for (auto* sc : {gen_canonical, gen_xor, gen_sample, gen_count})
        sc->add_option("--n", n, "vertex count")->required();
    for (auto* sc : {gen_canonical, gen_xor, gen_sample})
        sc->add_option("--out", out_file, "write graph JSON here");
    gen_sample->add_option("--seed", seed, "rng seed")->required();

    auto* validate = app.add_subcommand("validate", "check a graph file against the invariants");
    validate->add_option("in", in_file, "graph JSON")->required();
    bool relaxed_load = false;
    validate->add_flag("--relaxed", relaxed_load, "allow partial colour classes");

    auto* sw = app.add_subcommand("switch", "randomization chains");
    sw->require_subcommand(1);
    auto* sw_walk = sw->add_subcommand("walk", "spin/rotation chain on a partial factorization");
    std::string moves_str = "spin,rot", vprime_str, a_str, b_str;
    std::int64_t steps = 0;
    sw_walk->add_option("--moves", moves_str, "comma list from {spin,rot}");
    sw_walk->add_option("--steps", steps, "chain length")->required();
    sw_walk->add_option("--seed", seed, "rng seed")->required();
    sw_walk->add_option("--in", in_file, "graph JSON")->required();
    sw_walk->add_option("--out", out_file, "output graph JSON");
    sw_walk->add_option("--vprime", vprime_str, "spin context V' as csv");
    sw_walk->add_option("--a", a_str, "rotation context A as csv");
    sw_walk->add_option("--b", b_str, "rotation context B as csv");
    auto* sw_jm = sw->add_subcommand("jm", "symbol-block chain on the square image");
    sw_jm->add_option("--steps", steps, "chain length")->required();
    sw_jm->add_option("--seed", seed, "rng seed")->required();
    sw_jm->add_option("--in", in_file, "graph JSON")->required();
    sw_jm->add_option("--out", out_file, "output graph JSON");

    auto* check = app.add_subcommand("check", "structural statistics");
    check->require_subcommand(1);
    auto* check_res = check->add_subcommand("resilience", "local edge-resilience verdict");
    double eps = 0.0, mu = 0.0;
    std::uint64_t sampled_k = 0;
    check_res->add_option("--eps", eps, "epsilon")->required();
    check_res->add_option("--sampled", sampled_k, "sample count instead of exhaustive");
    check_res->add_option("--seed", seed, "rng seed for sampled mode");
    check_res->add_option("--in", in_file, "graph JSON")->required();
    auto* check_quasi = check->add_subcommand("quasirandom", "crossing-edge verdict");
    check_quasi->add_option("--sampled", sampled_k, "sample count instead of exhaustive");
    check_quasi->add_option("--seed", seed, "rng seed for sampled mode");
    check_quasi->add_option("--in", in_file, "graph JSON")->required();
    auto* check_gadget = check->add_subcommand("gadget-resilience", "greedy certificate");
    check_gadget->add_option("--mu", mu, "mu")->required();
    check_gadget->add_option("--in", in_file, "graph JSON")->required();

    auto* gadgets = app.add_subcommand("gadgets", "absorbing gadget enumeration and r(G)");
    gadgets->require_subcommand(1);
    auto* gadgets_enum = gadgets->add_subcommand("enum", "list gadgets at (x, c)");
    int gx = 0, gc = 0;
    bool xcp = false;
    gadgets_enum->add_option("--x", gx, "apex vertex")->required();
    gadgets_enum->add_option("--c", gc, "target colour")->required();
    gadgets_enum->add_flag("--xcp", xcp, "restrict by the equitable colour partition");
    gadgets_enum->add_option("--in", in_file, "graph JSON")->required();
    auto* gadgets_r = gadgets->add_subcommand("r", "saturation aggregate r(G)");
    gadgets_r->add_option("--x", gx, "apex vertex")->required();
    gadgets_r->add_option("--c", gc, "target colour")->required();
    gadgets_r->add_option("--in", in_file, "graph JSON")->required();

    auto* tmpl = app.add_subcommand("template", "robustly matchable bipartite templates");
    tmpl->require_subcommand(1);
    auto* tmpl_build = tmpl->add_subcommand("build", "construct a 2RMBG-shaped template");
    int m = 1, degree = 64;
    std::string strategy = "complete", mode = "exhaustive";
    tmpl_build->add_option("--m", m, "template scale")->required();
    tmpl_build->add_option("--strategy", strategy, "complete | random-regular");
    tmpl_build->add_option("--degree", degree, "degree for random-regular");
    tmpl_build->add_option("--seed", seed, "rng seed for random-regular");
    tmpl_build->add_option("--out", out_file, "write template JSON here");
    auto* tmpl_verify = tmpl->add_subcommand("verify", "robustness verdict");
    tmpl_verify->add_option("--mode", mode, "exhaustive | sampled");
    tmpl_verify->add_option("--samples", sampled_k, "samples for sampled mode");
    tmpl_verify->add_option("--seed", seed, "rng seed for sampled mode");
    tmpl_verify->add_option("--in", in_file, "template JSON")->required();

    auto* find = app.add_subcommand("find", "rainbow path and cycle search");
    find->require_subcommand(1);
    auto* find_ham = find->add_subcommand("hampath", "rainbow Hamilton path");
    bool exact = false, heuristic = false;
    std::uint64_t budget = kDefaultSearchBudget;
    int restarts = 256;
    find_ham->add_flag("--exact", exact, "complete backtracking");
    find_ham->add_flag("--heuristic", heuristic, "greedy with rotations");
    find_ham->add_option("--budget", budget, "node budget for exact mode");
    find_ham->add_option("--restarts", restarts, "restarts for heuristic mode");
    find_ham->add_option("--seed", seed, "rng seed for heuristic mode");
    find_ham->add_option("--in", in_file, "graph JSON")->required();
    auto* find_andersen = find->add_subcommand("andersen", "rainbow path of length n-2");
    find_andersen->add_option("--budget", budget, "node budget");
    find_andersen->add_option("--in", in_file, "graph JSON")->required();

    auto* pipeline = app.add_subcommand("pipeline", "absorber pipeline with fallbacks");
    pipeline->require_subcommand(1);
    auto* pipe_run = pipeline->add_subcommand("run", "run on a sample or a file");
    int pn = 0;
    bool cycle_mode = false;
    std::string config_file;
    pipe_run->add_option("--n", pn, "sample a uniform factorization of this order (<= 8)");
    pipe_run->add_option("--in", in_file, "graph JSON (overrides --n)");
    pipe_run->add_option("--seed", seed, "rng seed")->required();
    pipe_run->add_flag("--cycle", cycle_mode, "look for the all-colour cycle");
    pipe_run->add_option("--config", config_file, "absorber config JSON");
    pipe_run->add_option("--out", out_file, "write the run report here");

    auto* absorb_cmd = app.add_subcommand("absorb", "absorber pipeline on a given graph");
    absorb_cmd->require_subcommand(1);
    auto* absorb_pipe = absorb_cmd->add_subcommand("pipeline", "partition, build, absorb");
    absorb_pipe->add_option("--in", in_file, "graph JSON")->required();
    absorb_pipe->add_option("--config", config_file, "absorber config JSON");
    absorb_pipe->add_option("--seed", seed, "rng seed")->required();
    absorb_pipe->add_option("--out", out_file, "write the run report here");
    absorb_pipe->add_flag("--cycle", cycle_mode, "cycle mode");

    auto* latin = app.add_subcommand("latin", "symmetric squares and transversals");
    latin->require_subcommand(1);
    auto* latin_from = latin->add_subcommand("from-colouring", "odd colouring -> square");
    latin_from->add_option("--in", in_file, "graph JSON")->required();
    latin_from->add_option("--out", out_file, "square text file");
    auto* latin_to = latin->add_subcommand("to-colouring", "square -> odd colouring");
    latin_to->add_option("--in", in_file, "square text file")->required();
    latin_to->add_option("--out", out_file, "graph JSON");
    auto* latin_tr = latin->add_subcommand("transversal", "extract from a rainbow cycle");
    std::string cycle_str;
    bool want_hamilton = false;
    latin_tr->add_option("--in", in_file, "square text file")->required();
    latin_tr->add_option("--cycle", cycle_str, "cycle as csv; searched exactly when absent");
    latin_tr->add_flag("--hamilton", want_hamilton, "require Hamilton transversals");
    auto* latin_sample = latin->add_subcommand("sample", "chain-randomized symmetric square");
    latin_sample->add_option("--n", n, "odd order")->required();
    latin_sample->add_option("--steps", steps, "chain length")->required();
    latin_sample->add_option("--seed", seed, "rng seed")->required();
    latin_sample->add_option("--out", out_file, "square text file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    (void)threads;

    try {
        auto write_graph = [&](const ColouredGraph& g, Report& rep) {
            if (!out_file.empty()) {
                save_graph_file(g, out_file);
                rep.set("out", out_file);
                rep.line("wrote " + out_file);
            } else if (!rep.as_json) {
                std::cout << to_json(g) << "\n";
            } else {
                rep.set("graph", json::parse(to_json(g)));
            }
        };

        if (*gen) {
            Report rep("gen");
            rep.as_json = as_json;
            rep.set("n", n);
            if (*gen_canonical) {
                write_graph(canonical_one_factorization(n), rep);
            } else if (*gen_xor) {
                write_graph(xor_factorization(n), rep);
            } else if (*gen_sample) {
                Rng rng(seed);
                rep.set("seed", seed);
                write_graph(uniform_sample_small(n, rng), rep);
            } else {
                auto count = count_one_factorizations(n);
                rep.set("count", count);
                rep.line("distinct 1-factorizations of K_" + std::to_string(n) + ": " +
                         std::to_string(count));
            }
            return rep.finish(0);
        }

        if (*validate) {
            Report rep("validate");
            rep.as_json = as_json;
            auto g = load_graph_file(in_file, !relaxed_load);
            rep.set("n", g.n());
            rep.set("colours", g.num_colours());
            rep.set("edges", g.edge_count());
            std::string modes;
            if (g.is_full()) modes = "full";
            else if (g.is_odd_optimal()) modes = "odd-optimal";
            else if (g.is_gdcol()) modes = "partial";
            else modes = "relaxed";
            rep.set("mode", modes);
            rep.line("valid (" + modes + "), n=" + std::to_string(g.n()) + ", colours=" +
                     std::to_string(g.num_colours()));
            return rep.finish(0);
        }

        if (*sw_walk) {
            Report rep("switch walk");
            rep.as_json = as_json;
            auto g = load_graph_file(in_file);
            WalkContext ctx;
            if (!vprime_str.empty()) ctx.vprime = parse_csv(vprime_str);
            if (!a_str.empty()) ctx.set_a = parse_csv(a_str);
            if (!b_str.empty()) ctx.set_b = parse_csv(b_str);
            std::vector<MoveKind> kinds;
            if (moves_str.find("spin") != std::string::npos) kinds.push_back(MoveKind::Spin);
            if (moves_str.find("rot") != std::string::npos) kinds.push_back(MoveKind::Rotation);
            Rng rng(seed);
            auto res = random_switch_walk(g, kinds, (int)steps, rng, ctx);
            rep.set("seed", seed);
            rep.set("steps_applied", res.steps_applied);
            rep.set("stalled", res.stalled);
            if (res.stalled) rep.line("stalled at step " + std::to_string(res.stalled_at_step));
            write_graph(res.graph, rep);
            return rep.finish(0);
        }

        if (*sw_jm) {
            Report rep("switch jm");
            rep.as_json = as_json;
            auto g = load_graph_file(in_file);
            Rng rng(seed);
            auto res = jm_square_walk(g, steps, rng);
            rep.set("seed", seed);
            rep.set("steps", steps);
            write_graph(res, rep);
            return rep.finish(0);
        }

        if (*check_res || *check_quasi) {
            Report rep(*check_res ? "check resilience" : "check quasirandom");
            rep.as_json = as_json;
            auto g = load_graph_file(in_file);
            Rng rng(seed);
            std::optional<std::uint64_t> k;
            if (sampled_k > 0) k = sampled_k;
            auto res = *check_res ? is_locally_edge_resilient(g, eps, k, k ? &rng : nullptr)
                                  : is_quasirandom(g, k, k ? &rng : nullptr);
            rep.set("result", verdict_json(res));
            rep.line(res.verdict == Verdict::Fail           ? "fail (witness recorded)"
                     : res.verdict == Verdict::ProbablePass ? "probable pass"
                                                            : "pass");
            return rep.finish(res.verdict == Verdict::Fail ? 1 : 0);
        }

        if (*check_gadget) {
            Report rep("check gadget-resilience");
            rep.as_json = as_json;
            auto g = load_graph_file(in_file);
            auto res = is_robustly_gadget_resilient(g, mu);
            rep.set("certified", res.certified);
            rep.set("t", res.t);
            rep.set("required", res.required);
            json defs = json::array();
            for (const auto& d : res.deficits)
                defs.push_back({{"x", d[0]}, {"c", d[1]}, {"short", d[2]}});
            rep.set("deficits", defs);
            rep.line(res.certified ? "certified" : "not certified");
            return rep.finish(0);
        }

        if (*gadgets_enum || *gadgets_r) {
            Report rep(*gadgets_enum ? "gadgets enum" : "gadgets r");
            rep.as_json = as_json;
            auto g = load_graph_file(in_file);
            std::vector<int> d;
            for (int col : g.colours())
                if (col != gc) d.push_back(col);
            auto part = ColourPartition::equitable(d);
            if (*gadgets_enum && !xcp) {
                auto list = enumerate_gadgets(g, gx, gc);
                rep.set("count", list.size());
                json arr = json::array();
                for (const auto& a : list)
                    arr.push_back({{"triangle", {a.x, a.t1, a.t2}},
                                   {"cycle", {a.qa, a.qb, a.qd, a.qe}},
                                   {"colours", {a.c1, a.c2, a.c3}}});
                rep.set("gadgets", arr);
                rep.line(std::to_string(list.size()) + " gadgets at (x=" + std::to_string(gx) +
                         ", c=" + std::to_string(gc) + ")");
            } else if (*gadgets_enum) {
                auto list = enumerate_xcp_gadgets(g, gx, gc, part);
                rep.set("count", list.size());
                rep.line(std::to_string(list.size()) + " partitioned gadgets");
            } else {
                auto rv = r_value(g, gx, gc, part);
                rep.set("r", rv.r);
                rep.set("saturated_edges", rv.saturated_edges.size());
                rep.set("unsaturated_edges", rv.unsaturated_edges.size());
                rep.line("r = " + std::to_string(rv.r));
            }
            return rep.finish(0);
        }

        if (*tmpl_build) {
            Report rep("template build");
            rep.as_json = as_json;
            Rng rng(seed);
            auto s = strategy == "complete" ? TemplateStrategy::Complete
                                            : TemplateStrategy::RandomRegular;
            auto built = build_template(m, s, degree, &rng);
            rep.set("attempts", built.attempts);
            rep.set("verified", built.verified);
            rep.set("edges", built.result.edge_count());
            if (!out_file.empty()) {
                std::ofstream f(out_file);
                f << template_to_json(built.result) << "\n";
                rep.line("wrote " + out_file);
            } else if (!as_json) {
                std::cout << template_to_json(built.result) << "\n";
            }
            return rep.finish(0);
        }

        if (*tmpl_verify) {
            Report rep("template verify");
            rep.as_json = as_json;
            std::ifstream f(in_file);
            std::stringstream ss;
            ss << f.rdbuf();
            auto t = template_from_json(ss.str());
            Rng rng(seed);
            std::optional<std::uint64_t> k;
            if (mode == "sampled") k = sampled_k > 0 ? sampled_k : 10'000;
            auto res = verify_robust(t, RobustMode::TwoSided, k, k ? &rng : nullptr);
            rep.set("verdict", res.verdict == Verdict::Fail           ? "fail"
                               : res.verdict == Verdict::ProbablePass ? "probable-pass"
                                                                      : "pass");
            rep.set("pairs_checked", res.pairs_checked);
            if (res.verdict == Verdict::Fail) {
                rep.set("witness_x", res.witness_x);
                rep.set("witness_y", res.witness_y);
                rep.line("fail with witness");
            } else {
                rep.line("robust");
            }
            return rep.finish(res.verdict == Verdict::Fail ? 1 : 0);
        }

        if (*find_ham || *find_andersen) {
            Report rep(*find_ham ? "find hampath" : "find andersen");
            rep.as_json = as_json;
            auto g = load_graph_file(in_file, false);
            if (*find_ham && heuristic && !exact) {
                Rng rng(seed);
                auto lp = long_rainbow_path(g, SliceView::everything(g), restarts, rng);
                bool ham = (int)lp.path.size() == g.n();
                rep.set("outcome", ham ? "found" : "incomplete");
                rep.set("length", lp.path.size());
                rep.set("path", json(lp.path));
                rep.set("verified", ham && (bool)verify_rainbow_hamilton_path(g, lp.path));
                rep.line(ham ? "found (verified)"
                             : "best length " + std::to_string(lp.path.size()));
                return rep.finish(0);
            }
            auto res = *find_ham ? exact_rainbow_hamilton_path(g, budget)
                                 : exact_andersen_path(g, budget);
            const char* oc = res.outcome == SearchOutcome::Found ? "found"
                             : res.outcome == SearchOutcome::None ? "none"
                                                                  : "budget-exhausted";
            rep.set("outcome", oc);
            rep.set("nodes", res.nodes);
            if (res.outcome == SearchOutcome::Found) {
                rep.set("path", json(res.path));
                rep.set("verified", (bool)verify_rainbow_path(g, res.path));
            }
            rep.line(std::string("outcome: ") + oc);
            return rep.finish(0);
        }

        if (*pipe_run || *absorb_pipe) {
            Report rep(*pipe_run ? "pipeline run" : "absorb pipeline");
            rep.as_json = as_json;
            ColouredGraph g;
            if (!in_file.empty()) {
                g = load_graph_file(in_file, false);
            } else if (pn > 0) {
                Rng rng(seed);
                g = uniform_sample_small(pn, rng);
            } else {
                throw std::invalid_argument("supply --in or --n");
            }
            PipelineOptions opts;
            opts.cycle_mode = cycle_mode;
            if (!config_file.empty()) {
                std::ifstream f(config_file);
                json cj = json::parse(f);
                opts.cfg = config_from_json(cj);
                opts.paper_faithful = cj.value("paper_faithful", false);
                opts.m_override = cj.value("m", -1);
            }
            auto pr = full_pipeline(g, opts, seed);
            rep.set("seed", seed);
            rep.set("n", pr.n);
            rep.set("odd_input", pr.odd_input);
            rep.set("outcome", pr.outcome);
            rep.set("paper_faithful", opts.paper_faithful);
            for (const auto& s : pr.stages) rep.stage(s.name, s.ok, s.detail);
            rep.set("verified", pr.verified);
            if (!pr.path.empty()) rep.set("path", json(pr.path));
            if (pr.omitted_vertex >= 0) rep.set("omitted_vertex", pr.omitted_vertex);
            rep.line("outcome: " + pr.outcome + (pr.verified ? " (verified)" : ""));
            if (!out_file.empty()) {
                std::ofstream f(out_file);
                f << rep.j.dump(2) << "\n";
            }
            return rep.finish(0);
        }

        if (*latin_from) {
            Report rep("latin from-colouring");
            rep.as_json = as_json;
            auto g = load_graph_file(in_file, false);
            auto sq = square_from_colouring(g);
            if (!out_file.empty()) {
                std::ofstream f(out_file);
                f << sq.to_text();
                rep.line("wrote " + out_file);
            } else {
                std::cout << sq.to_text();
            }
            return rep.finish(0);
        }

        if (*latin_to) {
            Report rep("latin to-colouring");
            rep.as_json = as_json;
            std::ifstream f(in_file);
            std::stringstream ss;
            ss << f.rdbuf();
            auto sq = LatinSquare::from_text(ss.str());
            auto g = colouring_from_square(sq);
            write_graph(g, rep);
            return rep.finish(0);
        }

        if (*latin_tr) {
            Report rep("latin transversal");
            rep.as_json = as_json;
            std::ifstream f(in_file);
            std::stringstream ss;
            ss << f.rdbuf();
            auto sq = LatinSquare::from_text(ss.str());
            std::vector<int> cycle;
            if (!cycle_str.empty()) {
                cycle = parse_csv(cycle_str);
            } else {
                auto g = colouring_from_square(sq);
                auto found = exact_all_colour_cycle(g);
                if (found.outcome != SearchOutcome::Found) {
                    rep.set("outcome", "no-cycle");
                    rep.line("no rainbow Hamilton cycle found");
                    return rep.finish(1);
                }
                cycle = found.path;
            }
            auto [fwd, bwd] = transversals_from_cycle(sq, cycle);
            bool ham = is_hamilton_transversal(sq, fwd) && is_hamilton_transversal(sq, bwd);
            rep.set("cycle", json(cycle));
            rep.set("forward", fwd.sigma);
            rep.set("backward", bwd.sigma);
            rep.set("hamilton", ham);
            rep.line(ham ? "two disjoint Hamilton transversals" : "transversals extracted");
            return rep.finish(want_hamilton && !ham ? 1 : 0);
        }

        if (*latin_sample) {
            Report rep("latin sample");
            rep.as_json = as_json;
            Rng rng(seed);
            auto sq = random_symmetric_square(n, steps, rng);
            rep.set("seed", seed);
            rep.set("steps", steps);
            if (!out_file.empty()) {
                std::ofstream f(out_file);
                f << sq.to_text();
                rep.line("wrote " + out_file);
            } else {
                std::cout << sq.to_text();
            }
            return rep.finish(0);
        }
    } catch (const std::exception& e) {
        if (as_json) {
            json err;
            err["error"] = e.what();
            std::cout << err.dump(2) << "\n";
        } else {
            std::cerr << "error: " << e.what() << "\n";
        }
        return 1;
    }
    return 2;
}
