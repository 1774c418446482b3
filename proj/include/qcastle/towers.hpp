#pragma once

#include "qcastle/castle.hpp"

namespace qcastle {

/// Kakutani-Rokhlin castle over a feedback set: one tower per first-return
/// time, base of the castle equal to E, floors clopen, partition of X.
/// Throws NotFeedback (with an invariant witness in the message) otherwise.
Castle kakutani_rokhlin(const ClopenSet& E);

/// Kakutani-Rokhlin over a feedback set presented as a union of disjoint
/// clopen parts kept on their own windows; one tower per (return time,
/// part).  Avoids extending heterogeneous parts to a joint hull.
Castle kakutani_rokhlin_parts(const std::vector<ClopenSet>& parts,
                              const std::vector<std::string>& part_names);

/// Castle partition with every height >= N; requires no periodic orbit of
/// period < N (HasShortPeriod otherwise).  The base is a marker set: a union
/// of k-cylinders, k >= N, chosen N-spaced along every orbit and hitting
/// every cycle of the k-block graph, then fed to kakutani_rokhlin.
Castle high_castle(const SftPtr& space, int N);

/// Clopen capturing neighborhood of a fixed point: B with p in B subset U,
/// both B and B^c N-capturing.
ClopenSet capturing_tower_fixed(const SftPtr& space, const PeriodicOrbit& p, int N,
                                const ClopenSet& U);

/// Capturing tower around a periodic orbit: K = B u TB u ... u T^{l-1}B of
/// height l containing the orbit, with K and K^c both N-capturing and
/// K inside union_{i<l} T^i U.
Tower capturing_tower_periodic(const SftPtr& space, const PeriodicOrbit& orbit, int N,
                               const ClopenSet& U);

/// One short-tower group of a dungeon castle: the capturing tower around one
/// periodic orbit together with the exact facts certified about it.
struct ShortTowerGroup {
    PeriodicOrbit orbit;
    Tower whole;                 // the unrefined capturing tower K_i
    CaptureReport capture_N;     // is_capturing(K_i, N)
    CaptureReport capture_lm;    // is_capturing(K_i, l*ceil(N/l))
    bool reentry = false;        // T(top) cap K_i subset base
    std::vector<std::size_t> cells;  // indices of this tower's cells in castle.towers
};

struct DungeonResult {
    Castle castle;  // refined partition; labels "K:<orbit>/cell" and "tall:<h>/cell"
    int N = 0;
    int depth_r = 0;
    std::vector<ShortTowerGroup> short_groups;
    CaptureReport complement_capture;  // is_capturing((union K_i)^c, N); trivially pass when no orbits
    int feedback_n0 = 0;
    int seed_depth = 0;  // final cylinder depth around the orbits
    int marker_len = 0;  // length of the tall-part marker words (0: no invariant part)
};

/// The main castle construction: a partition of X into N-capturing towers
/// whose floors sit inside single cylinders on window [-r, r].  Short towers
/// (height < N) come one per periodic orbit of period < N and carry exact
/// capture certificates.
DungeonResult dungeon_castle(const SftPtr& space, int N, int depth_r);

} // namespace qcastle
