#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rainbow/coloured_graph.hpp"
#include "rainbow/rng.hpp"

namespace rainbow {

/// Three-for-three exchange inside one colour class that pulls a new edge
/// into the context set V'. Labelled: different labellings of the same
/// subgraph are different systems.
struct SpinSystem {
    int u, v, w, x, y, z;
    std::vector<int> vprime;
};

/// Two-for-two exchange inside one colour class that removes one A-B
/// crossing edge.
struct RotationSystem {
    int a, b, v, w;
    std::vector<int> set_a, set_b;
};

/// Six-for-six exchange inside one D3 colour class around an apex x; the new
/// edges complete the canonical (x,c,P)-gadget.
struct TwistSystem {
    int x;
    std::array<int, 14> u; // u[0] is the paper-indexed u_1
    int c;
    ColourPartition partition;

    int at(int i) const { return u[i - 1]; } // 1-based accessor
};

VerifyResult validate_spin(const ColouredGraph& g, const SpinSystem& s);
ColouredGraph apply_spin(const ColouredGraph& g, const SpinSystem& s);

VerifyResult validate_rotation(const ColouredGraph& g, const RotationSystem& r);
ColouredGraph apply_rotation(const ColouredGraph& g, const RotationSystem& r);

VerifyResult validate_twist(const ColouredGraph& g, const TwistSystem& t);
ColouredGraph apply_twist(const ColouredGraph& g, const TwistSystem& t);

/// The eight edges of the canonical gadget created by a twist, as (u,v,colour).
std::vector<std::array<int, 3>> canonical_twist_gadget_edges(const ColouredGraph& g,
                                                             const TwistSystem& t);

/// All valid twist systems for (x, c, partition), in (d4, d1, d2, d3, f1, f2)
/// vector order. Deterministic.
std::vector<TwistSystem> enumerate_twist_candidates(const ColouredGraph& g, int x, int c,
                                                    const ColourPartition& p);

enum class MoveKind { Spin, Rotation };

struct WalkContext {
    std::vector<int> vprime;           // spin context
    std::vector<int> set_a, set_b;     // rotation context
};

struct WalkResult {
    ColouredGraph graph;
    int steps_applied = 0;
    bool stalled = false;              // retry budget hit before a valid move
    int stalled_at_step = -1;
};

/// Applies `steps` uniformly chosen valid moves, each found by rejection
/// sampling over candidate systems. Requires partial mode (|D| < n-1).
/// Uniformity of the chain itself is not claimed.
WalkResult random_switch_walk(const ColouredGraph& g, const std::vector<MoveKind>& moves,
                              int steps, Rng& rng, const WalkContext& ctx,
                              int retry_budget = 10000);

/// Randomizes a full 1-factorization through the symmetric-Latin-square
/// image: each step picks three symbol classes and resamples them uniformly
/// from every factorization of their cubic union (a block heat-bath on the
/// square), falling back to a two-class bichromatic cycle swap when the union
/// is too rich to enumerate. Both kernels leave the uniform distribution over
/// labelled states invariant.
ColouredGraph jm_square_walk(const ColouredGraph& g, std::int64_t steps, Rng& rng);

/// Canonical colour relabelling (class containing {0,j} gets colour j-1),
/// used to compare chain states against the enumeration oracle.
ColouredGraph canonical_colour_form(const ColouredGraph& g);

} // namespace rainbow
