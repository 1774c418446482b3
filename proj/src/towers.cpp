#include "qcastle/towers.hpp"

#include "qcastle/errors.hpp"
#include "qcastle/guard.hpp"
#include "qcastle/kernels.hpp"

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <map>
#include <set>

namespace qcastle {

namespace {

void dtrace(const std::string& m) {
    if (std::getenv("QCASTLE_TRACE")) std::cerr << "[towers] " << m << std::endl;
}

} // namespace

Castle kakutani_rokhlin_parts(const std::vector<ClopenSet>& parts,
                              const std::vector<std::string>& part_names) {
    FeedbackResult fb = is_feedback_parts(parts);
    if (!fb.feedback) {
        std::string msg = "kakutani_rokhlin: not a feedback set";
        if (fb.witness) msg += "; invariant witness " + fb.witness->describe();
        throw NotFeedback(msg);
    }
    Castle castle;
    // First-return decomposition per part, each kept on its own window:
    // R_l = part minus everyone returning before l; B_l = R_l cap T^-l E.
    struct Pending {
        ClopenSet cur;
        std::size_t part;
    };
    std::vector<Pending> pending;
    for (std::size_t p = 0; p < parts.size(); ++p)
        if (!parts[p].is_empty()) pending.push_back({parts[p], p});
    for (int l = 1; l <= fb.n0 && !pending.empty(); ++l) {
        std::vector<Pending> next;
        for (auto& rp : pending) {
            ClopenSet returned = ClopenSet::empty_set(rp.cur.space());
            ClopenSet rest = rp.cur;
            for (const auto& part : parts) {
                if (part.is_empty()) continue;
                ClopenSet hit = rest.set_intersect(part.shifted(-l));
                if (!hit.is_empty()) {
                    returned = returned.set_union(hit);
                    rest = rest.set_difference(part.shifted(-l));
                }
            }
            if (!returned.is_empty()) {
                Tower t;
                t.base = returned;
                t.height = l;
                t.label = "kr:" + std::to_string(l) +
                          (part_names.empty() ? "" : "/" + part_names[rp.part]);
                castle.towers.push_back(std::move(t));
            }
            if (!rest.is_empty()) next.push_back({std::move(rest), rp.part});
        }
        pending = std::move(next);
    }
    if (!pending.empty())
        throw Error("internal: first return exceeded the feedback horizon");
    std::sort(castle.towers.begin(), castle.towers.end(),
              [](const Tower& a, const Tower& b) {
                  return a.height != b.height ? a.height < b.height : a.label < b.label;
              });
    return castle;
}

Castle kakutani_rokhlin(const ClopenSet& E) { return kakutani_rokhlin_parts({E}, {}); }

namespace {

// Strongly connected components that still carry a cycle, over the graph
// restricted to non-excluded vertices; deterministic order.
std::vector<std::vector<std::size_t>> cyclic_components(
    const std::vector<std::vector<int>>& succ, const std::vector<bool>& excluded) {
    const std::size_t V = succ.size();
    std::vector<int> low(V, 0), num(V, -1);
    std::vector<std::size_t> stk;
    std::vector<bool> onstk(V, false);
    int counter = 0;
    std::vector<std::vector<std::size_t>> comps;
    struct Frame {
        std::size_t v;
        std::size_t ei;
    };
    for (std::size_t root = 0; root < V; ++root) {
        if (excluded[root] || num[root] >= 0) continue;
        std::vector<Frame> frames{{root, 0}};
        num[root] = low[root] = counter++;
        stk.push_back(root);
        onstk[root] = true;
        while (!frames.empty()) {
            auto& f = frames.back();
            if (f.ei < succ[f.v].size()) {
                std::size_t u = succ[f.v][f.ei++];
                if (excluded[u]) continue;
                if (num[u] < 0) {
                    num[u] = low[u] = counter++;
                    stk.push_back(u);
                    onstk[u] = true;
                    frames.push_back({u, 0});
                } else if (onstk[u]) {
                    low[f.v] = std::min(low[f.v], num[u]);
                }
            } else {
                std::size_t v = f.v;
                frames.pop_back();
                if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
                if (low[v] == num[v]) {
                    std::vector<std::size_t> c;
                    while (true) {
                        std::size_t u = stk.back();
                        stk.pop_back();
                        onstk[u] = false;
                        c.push_back(u);
                        if (u == v) break;
                    }
                    std::sort(c.begin(), c.end());
                    comps.push_back(std::move(c));
                }
            }
        }
    }
    std::vector<std::vector<std::size_t>> cyclic;
    for (auto& c : comps) {
        bool has_cycle = c.size() > 1;
        if (!has_cycle)
            for (int u : succ[c[0]])
                if (static_cast<std::size_t>(u) == c[0]) has_cycle = true;
        if (has_cycle) cyclic.push_back(std::move(c));
    }
    std::sort(cyclic.begin(), cyclic.end());
    return cyclic;
}

// Successor lists of the k-block graph over a sorted word list: u follows w
// when u starts with w[1..].
std::vector<std::vector<int>> block_graph(const WordSet& verts) {
    const std::size_t V = verts.size();
    std::vector<std::vector<int>> succ(V);
    auto lower = [&](const Word& probe) {
        std::size_t lo = 0, hi = V;
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (compare_words(verts.word(mid), probe) < 0) lo = mid + 1;
            else hi = mid;
        }
        return lo;
    };
    for (std::size_t v = 0; v < V; ++v) {
        auto w = verts.word(v);
        Word probe(w.begin() + 1, w.end());
        probe.push_back(0);
        for (std::size_t u = lower(probe); u < V; ++u) {
            auto x = verts.word(u);
            if (!std::equal(w.begin() + 1, w.end(), x.begin())) break;
            succ[v].push_back(static_cast<int>(u));
        }
    }
    return succ;
}

// Overlap bookkeeping shared by the marker searches: marker words must never
// co-occur at shift distances 1..N-1, which for words of length k >= N is a
// pure suffix-prefix condition.
struct SpacingIndex {
    int k, N;
    std::vector<std::set<Word>> prefixes, suffixes;
    explicit SpacingIndex(int k_, int N_) : k(k_), N(N_), prefixes(k), suffixes(k) {}

    static bool self_conflict(std::span<const Symbol> w, int N) {
        for (int i = 1; i < N; ++i) {
            bool period = true;
            for (std::size_t j = 0; j + i < w.size() && period; ++j)
                if (w[j] != w[j + i]) period = false;
            if (period) return true;
        }
        return false;
    }

    bool conflicts(std::span<const Symbol> w) const {
        for (int i = 1; i < N; ++i) {
            const int d = k - i;
            if (prefixes[d].count(Word(w.end() - d, w.end()))) return true;
            if (suffixes[d].count(Word(w.begin(), w.begin() + d))) return true;
        }
        return false;
    }

    void add(std::span<const Symbol> w) {
        for (int d = 1; d < k; ++d) {
            prefixes[d].insert(Word(w.begin(), w.begin() + d));
            suffixes[d].insert(Word(w.end() - d, w.end()));
        }
    }
};

// Marker set for high_castle: N-spaced k-words of the space hitting every
// cycle of the k-block graph.  nullopt when the greedy gets stuck at this k.
std::optional<WordSet> high_markers(const SftPtr& space, int N, int k) {
    WordSet verts = kernels::enumerate_all(*space, k);
    auto succ = block_graph(verts);
    std::vector<bool> selected(verts.size(), false);
    SpacingIndex spacing(k, N);
    while (true) {
        auto cyc = cyclic_components(succ, selected);
        if (cyc.empty()) break;
        bool progress = false;
        for (auto& c : cyc) {
            for (std::size_t v : c) {
                auto w = verts.word(v);
                if (SpacingIndex::self_conflict(w, N)) continue;
                if (spacing.conflicts(w)) continue;
                spacing.add(w);
                selected[v] = true;
                progress = true;
            }
        }
        if (!progress) return std::nullopt;
    }
    WordSet out(k);
    for (std::size_t v = 0; v < verts.size(); ++v)
        if (selected[v]) out.push_back(verts.word(v));
    return out;
}

} // namespace

Castle high_castle(const SftPtr& space, int N) {
    if (space->is_empty()) throw Error("high_castle over the empty space");
    auto short_orbits = periodic_orbits(space, N);
    if (!short_orbits.empty())
        throw HasShortPeriod("high_castle: periodic orbit '" + short_orbits.front().name() +
                             "' of period " + std::to_string(short_orbits.front().least_period()) +
                             " < " + std::to_string(N));
    if (N <= 1) {
        Castle castle = kakutani_rokhlin(ClopenSet::whole_space(space));
        for (auto& t : castle.towers) t.label = "high:" + std::to_string(t.height);
        return castle;
    }
    for (int k = N;; ++k) {
        work_guard().check_depth(k - N, "high_castle marker length");
        auto markers = high_markers(space, N, k);
        if (!markers) continue;
        ClopenSet B = ClopenSet::from_words(space, Window{0, k - 1}, std::move(*markers));
        Castle castle = kakutani_rokhlin(B);
        for (auto& t : castle.towers) {
            if (t.height < N) throw Error("internal: high castle produced a short tower");
            t.label = "high:" + std::to_string(t.height);
        }
        return castle;
    }
}

namespace {

// Cylinder pinned to a periodic point on a window.
ClopenSet pinned(const SftPtr& space, const EventuallyPeriodicPoint& p, int lo, int hi) {
    return ClopenSet::cylinder(space, p.window(lo, hi), lo);
}

// The fixed-point capturing construction run under the power action T^stride
// with capture count m, inside the neighborhood U of the (stride-periodic)
// point p.
ClopenSet capturing_base_power(const SftPtr& space, const EventuallyPeriodicPoint& p, int stride,
                               int m, const ClopenSet& U) {
    if (!U.contains_point(p)) throw Error("capturing base: point not inside the neighborhood");
    // Deepen V = [p on [-k,k]] until  union_{|i| <= 2m-1} T^{-i*stride} V  is
    // inside U.  Shifted pinned cylinders shrink onto the orbit, so this
    // terminates by compactness.
    ClopenSet V = ClopenSet::empty_set(space);
    int depth = 0;
    for (int k = 1;; ++k) {
        work_guard().check_depth(++depth, "capturing smallness loop");
        bool ok = true;
        for (int i = -(2 * m - 1); i <= 2 * m - 1 && ok; ++i) {
            ClopenSet shifted = pinned(space, p, -k, k).shifted(-i * stride);
            if (!shifted.subset_of(U)) ok = false;
        }
        if (ok) {
            V = pinned(space, p, -k, k);
            break;
        }
    }
    const int k = -V.window().lo;
    // V_plus = cap_{i<m} T^{-i*stride} V, V_minus = T^{m*stride} V_plus; both
    // are single pinned cylinders because every operand pins the same
    // periodic pattern.
    ClopenSet vplus = pinned(space, p, -k, k + (m - 1) * stride);
    ClopenSet vminus = vplus.shifted(m * stride);
    // C = union_{j<m} T^{j*stride} V_plus.
    ClopenSet C = vplus;
    for (int j = 1; j < m; ++j) C = C.set_union(vplus.shifted(j * stride));
    // D = union_{i,j>=1, i+j<=m} (T^{-i*stride} V_plus cap T^{j*stride} V_minus).
    ClopenSet D = ClopenSet::empty_set(space);
    for (int i = 1; i + 1 <= m; ++i) {
        for (int j = 1; i + j <= m; ++j) {
            ClopenSet a = vplus.shifted(-i * stride);
            ClopenSet b = vminus.shifted(j * stride);
            D = D.set_union(a.set_intersect(b));
        }
    }
    return C.set_union(D);
}

} // namespace

ClopenSet capturing_tower_fixed(const SftPtr& space, const PeriodicOrbit& p, int N,
                                const ClopenSet& U) {
    if (p.least_period() != 1) throw Error("capturing_tower_fixed expects a fixed point");
    return capturing_base_power(space, p.point(), 1, N, U);
}

Tower capturing_tower_periodic(const SftPtr& space, const PeriodicOrbit& orbit, int N,
                               const ClopenSet& U) {
    const int l = orbit.least_period();
    // Recenter so the anchor point of the orbit lies in U.
    EventuallyPeriodicPoint p = orbit.point();
    int phase = -1;
    for (int r = 0; r < l; ++r) {
        if (U.contains_point(p.shifted(r))) { phase = r; break; }
    }
    if (phase < 0) throw Error("capturing_tower_periodic: no point of the orbit lies in U");
    p = p.shifted(phase);

    const int m = (N + l - 1) / l;
    // Shrink U so that U', TU', ..., T^{l-1}U' are disjoint.
    ClopenSet Ushrunk = U;
    int depth = 0;
    for (int k = 1;; ++k) {
        work_guard().check_depth(++depth, "capturing tower disjointness loop");
        ClopenSet cand = U.set_intersect(pinned(space, p, -k, k));
        bool ok = true;
        for (int i = 1; i < l && ok; ++i)
            if (cand.intersects(cand.shifted(i))) ok = false;
        if (ok) {
            Ushrunk = cand;
            break;
        }
    }
    // V = cap_{j=0}^{m} T^{-l j} U'.
    ClopenSet V = Ushrunk;
    for (int j = 1; j <= m; ++j) V = V.set_intersect(Ushrunk.shifted(-l * j));
    if (V.is_empty()) throw Error("internal: capturing neighborhood collapsed");

    ClopenSet B = capturing_base_power(space, p, l, m, V);
    Tower K;
    K.base = B;
    K.height = l;
    K.label = "K:" + orbit.name();
    return K;
}

namespace {

bool towers_disjoint(const Tower& a, const Tower& b) {
    for (int k = -(a.height - 1); k <= b.height - 1; ++k)
        if (a.base.intersects(b.base.shifted(k))) return false;
    return true;
}

// Marker words for the dungeon's tall part: parent words of length k that
// occur in the invariant part M, are N-spaced among themselves, keep an
// N-step margin from the capturing castle K on both sides, and hit every
// cycle of M's automaton.  nullopt when stuck at this k.
std::optional<WordSet> dungeon_markers(const SubSft& M, const ClopenSet& K, int N, int k) {
    const SftPtr& parent = M.parent();
    WordSet cverts = kernels::enumerate_all(*M.child(), k);
    auto succ = block_graph(cverts);

    // Group child words by their parent decode.
    std::map<Word, std::vector<std::size_t>> groups;
    for (std::size_t v = 0; v < cverts.size(); ++v)
        groups[M.decode_word(cverts.word(v))].push_back(v);

    SpacingIndex spacing(k, N);
    std::vector<bool> marked(cverts.size(), false);
    std::set<Word> chosen, rejected;

    auto k_margin_ok = [&](const Word& w) {
        ClopenSet cyl = ClopenSet::cylinder(parent, w, 0);
        for (int j = -(N - 1); j <= N; ++j)
            if (cyl.intersects(K.shifted(j))) return false;
        return true;
    };

    while (true) {
        auto cyc = cyclic_components(succ, marked);
        if (cyc.empty()) break;
        bool progress = false;
        for (auto& c : cyc) {
            for (std::size_t v : c) {
                if (marked[v]) continue;
                Word w = M.decode_word(cverts.word(v));
                if (chosen.count(w)) {
                    for (std::size_t u : groups[w]) marked[u] = true;
                    progress = true;
                    continue;
                }
                if (rejected.count(w)) continue;
                if (SpacingIndex::self_conflict(w, N) || spacing.conflicts(w) || !k_margin_ok(w)) {
                    rejected.insert(w);
                    continue;
                }
                spacing.add(w);
                chosen.insert(w);
                for (std::size_t u : groups[w]) marked[u] = true;
                progress = true;
            }
        }
        if (!progress) return std::nullopt;
    }
    WordSet out(k);
    for (const auto& w : chosen) out.push_back(w);
    return out;
}

} // namespace

DungeonResult dungeon_castle(const SftPtr& space, int N, int depth_r) {
    if (N < 1) throw Error("dungeon_castle needs N >= 1");
    if (depth_r < 0) throw Error("dungeon_castle needs r >= 0");
    DungeonResult res;
    res.N = N;
    res.depth_r = depth_r;

    auto orbits = periodic_orbits(space, N);

    if (orbits.empty()) {
        // No short orbits: the sliced high castle already is the result.
        res.castle = refine_floors(high_castle(space, N), depth_r);
        res.complement_capture.set_label = "(union K_i)^c";
        res.complement_capture.N = N;
        res.complement_capture.pass = true;
        for (const auto& t : res.castle.towers) res.feedback_n0 = std::max(res.feedback_n0, t.height);
        return res;
    }

    // Capturing towers around every short orbit, with a global deepening of
    // the seed neighborhoods until the towers are pairwise disjoint and the
    // complement is N-capturing.
    std::vector<Tower> ktowers;
    ClopenSet K = ClopenSet::empty_set(space);
    ClopenSet B = ClopenSet::empty_set(space);
    {
        // Every orbit pins ~4*N*l coordinates; fail fast when the orbit
        // census alone puts the construction beyond desk scale.
        std::uint64_t est = 0;
        for (const auto& o : orbits)
            est += static_cast<std::uint64_t>(o.least_period()) * 4 * N * (2 + N);
        work_guard().charge(est, "dungeon capturing stage estimate");

        for (int k_seed = 1;; ++k_seed) {
            work_guard().check_depth(k_seed, "dungeon seed deepening");
            ktowers.clear();
            for (const auto& o : orbits) {
                ClopenSet U = pinned(space, o.point(), -k_seed, k_seed);
                ktowers.push_back(capturing_tower_periodic(space, o, N, U));
            }
            bool ok = true;
            for (std::size_t i = 0; i < ktowers.size() && ok; ++i)
                for (std::size_t j = i + 1; j < ktowers.size() && ok; ++j)
                    if (!towers_disjoint(ktowers[i], ktowers[j])) ok = false;
            if (ok) {
                K = ClopenSet::empty_set(space);
                for (const auto& t : ktowers) K = K.set_union(t.span());
                res.complement_capture = is_capturing_complement(K, N, "(union K_i)^c");
                ok = res.complement_capture.pass;
            }
            if (ok) {
                res.seed_depth = k_seed;
                break;
            }
        }
        for (const auto& t : ktowers) B = B.set_union(t.base);
    }
    dtrace("K stage done: union " + K.describe());

    for (std::size_t i = 0; i < orbits.size(); ++i) {
        ShortTowerGroup g{orbits[i], ktowers[i], {}, {}, false, {}};
        ClopenSet span = ktowers[i].span();
        g.capture_N = is_capturing(span, N, "K:" + orbits[i].name());
        const int l = orbits[i].least_period();
        const int m = (N + l - 1) / l;
        g.capture_lm = is_capturing(span, l * m, "K:" + orbits[i].name());
        g.reentry = reenters_at_base(ktowers[i]);
        if (!g.capture_N.pass || !g.capture_lm.pass || !g.reentry)
            throw Error("internal: capturing tower failed its exact certificate");
        res.short_groups.push_back(std::move(g));
    }

    // Invariant part M: points never entering K.  The defining factors are
    // precisely the base words of the K towers (floors shift the windows but
    // not the words).
    std::vector<Word> kfactors;
    for (const auto& t : ktowers)
        for (std::size_t i = 0; i < t.base.words().size(); ++i)
            kfactors.push_back(t.base.words().word_copy(i));
    SubSft M = avoid_factors(space, kfactors);
    dtrace("M child states: " + std::to_string(M.child()->alphabet_size()) +
           (M.is_empty() ? " (empty)" : ""));

    // Tall-part markers over M, kept away from K so every non-K return time
    // is at least N.
    WordSet marker_words(0);
    int marker_k = 0;
    if (!M.is_empty()) {
        for (int k = N;; ++k) {
            work_guard().check_depth(k - N, "dungeon marker length");
            auto sel = dungeon_markers(M, K, N, k);
            if (sel) {
                marker_words = std::move(*sel);
                marker_k = k;
                break;
            }
        }
        dtrace("markers: " + std::to_string(marker_words.size()) + " words of length " +
               std::to_string(marker_k));
    }
    res.marker_len = marker_k;

    // Feedback base E = B u (T(K) \ K) u markers; the parts stay on their
    // own windows.
    std::vector<ClopenSet> eparts{B};
    std::vector<std::string> enames{"B"};
    ClopenSet exits = K.shifted(1).set_difference(K);
    if (!exits.is_empty()) {
        if (exits.intersects(B)) throw Error("internal: dungeon base parts not disjoint");
        eparts.push_back(exits);
        enames.push_back("exit");
    }
    if (!marker_words.empty()) {
        ClopenSet mk =
            ClopenSet::from_words(space, Window{0, marker_k - 1}, std::move(marker_words));
        if (mk.intersects(K) || mk.intersects(K.shifted(1)))
            throw Error("internal: dungeon base parts not disjoint");
        eparts.push_back(mk);
        enames.push_back("mark");
    }

    Castle Q = kakutani_rokhlin_parts(eparts, enames);
    for (const auto& t : Q.towers) res.feedback_n0 = std::max(res.feedback_n0, t.height);
    dtrace("Q: " + std::to_string(Q.towers.size()) + " towers, n0=" +
           std::to_string(res.feedback_n0));

    // Slice so that every K_i is a tower of the result: the B-part towers
    // decompose exactly into the K bases of matching height.
    Castle sliced;
    for (const auto& qt : Q.towers) {
        const bool from_B = qt.label.ends_with("/B");
        if (!from_B) {
            if (qt.height < N)
                throw Error("internal: non-capturing tower of height < N survived");
            Tower t;
            t.base = qt.base;
            t.height = qt.height;
            t.label = "tall:" + std::to_string(qt.height) +
                      (qt.label.ends_with("/exit") ? "e" : "m");
            sliced.towers.push_back(std::move(t));
            continue;
        }
        ClopenSet rest = qt.base;
        for (std::size_t i = 0; i < ktowers.size(); ++i) {
            if (ktowers[i].height != qt.height) continue;
            if (!ktowers[i].base.subset_of(qt.base))
                throw Error("internal: K tower base escapes its return class");
            rest = rest.set_difference(ktowers[i].base);
            sliced.towers.push_back(ktowers[i]);
        }
        if (!rest.is_empty())
            throw Error("internal: base points outside every capturing tower");
    }
    dtrace("sliced: " + std::to_string(sliced.towers.size()) + " towers");

    res.castle = refine_floors(sliced, depth_r);
    dtrace("refined: " + std::to_string(res.castle.towers.size()) + " towers");
    for (std::size_t ci = 0; ci < res.castle.towers.size(); ++ci) {
        const std::string& lab = res.castle.towers[ci].label;
        for (auto& g : res.short_groups) {
            std::string prefix = "K:" + g.orbit.name();
            if (lab.compare(0, prefix.size(), prefix) == 0 &&
                (lab.size() == prefix.size() || lab[prefix.size()] == '/'))
                g.cells.push_back(ci);
        }
    }
    return res;
}

} // namespace qcastle
