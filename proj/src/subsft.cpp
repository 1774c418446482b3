#include "qcastle/subsft.hpp"

#include "qcastle/errors.hpp"
#include "qcastle/guard.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace qcastle {

std::shared_ptr<const Sft> make_sft_raw(std::vector<std::string> names,
                                        std::vector<std::vector<bool>> adj,
                                        std::optional<Recoding> recoding,
                                        std::vector<std::vector<std::string>> forbidden);

int SubSft::ac_step(int node, Symbol a) const {
    while (true) {
        const auto& ch = ac_[node].children;
        auto it = std::lower_bound(ch.begin(), ch.end(), std::make_pair(a, -1),
                                   [](const auto& x, const auto& y) { return x.first < y.first; });
        if (it != ch.end() && it->first == a) return it->second;
        if (node == 0) return 0;
        node = ac_[node].fail;
    }
}

int SubSft::state_of(int node, Symbol a) const {
    return state_index_[static_cast<std::size_t>(node) * parent_->alphabet_size() + a];
}

SubSft avoid_factors(const SftPtr& parent, const std::vector<Word>& factors) {
    SubSft sub;
    sub.parent_ = parent;
    sub.factors_ = factors;

    // Aho-Corasick trie over the factor set.
    auto& ac = sub.ac_;
    ac.push_back({});
    for (const auto& f : factors) {
        if (f.empty()) throw Error("avoid_factors: empty factor");
        int node = 0;
        for (Symbol a : f) {
            auto& ch = ac[node].children;
            auto it = std::lower_bound(ch.begin(), ch.end(), std::make_pair(a, -1),
                                       [](const auto& x, const auto& y) { return x.first < y.first; });
            if (it != ch.end() && it->first == a) {
                node = it->second;
            } else {
                int nn = static_cast<int>(ac.size());
                int pos = static_cast<int>(it - ch.begin());
                ac.push_back({});
                ac[nn].depth = ac[node].depth + 1;
                ac[nn].last = a;
                ac[node].children.insert(ac[node].children.begin() + pos, {a, nn});
                node = nn;
            }
        }
        ac[node].match = true;
    }
    // Failure links, breadth first; match propagates along them.
    std::deque<int> bfs;
    for (auto& [a, c] : ac[0].children) {
        ac[c].fail = 0;
        bfs.push_back(c);
    }
    while (!bfs.empty()) {
        int n = bfs.front();
        bfs.pop_front();
        for (auto& [a, c] : ac[n].children) {
            ac[c].fail = sub.ac_step(ac[n].fail, a);
            ac[c].match = ac[c].match || ac[ac[c].fail].match;
            bfs.push_back(c);
        }
    }

    // Product with the parent transition graph.  State = (ac node, last
    // parent symbol); transition by b exists when the parent edge does and
    // the stepped node is not a match.
    const int q = parent->alphabet_size();
    const int nodes = static_cast<int>(ac.size());
    sub.state_index_.assign(static_cast<std::size_t>(nodes) * q, -1);
    struct St {
        int node;
        Symbol sym;
    };
    std::vector<St> states;
    auto intern = [&](int node, Symbol a) -> int {
        int& slot = sub.state_index_[static_cast<std::size_t>(node) * q + a];
        if (slot < 0) {
            slot = static_cast<int>(states.size());
            states.push_back({node, a});
        }
        return slot;
    };
    std::deque<int> work;
    for (int a = 0; a < q; ++a) {
        if (!parent->alive(a)) continue;
        int n0 = sub.ac_step(0, a);
        if (ac[n0].match) continue;
        work.push_back(intern(n0, static_cast<Symbol>(a)));
    }
    while (!work.empty()) {
        int s = work.front();
        work.pop_front();
        St st = states[s];
        for (Symbol b : parent->successors(st.sym)) {
            int nb = sub.ac_step(st.node, b);
            if (ac[nb].match) continue;
            if (sub.state_index_[static_cast<std::size_t>(nb) * q + b] < 0)
                work.push_back(intern(nb, b));
        }
    }
    std::vector<std::vector<std::pair<int, int>>> trans(states.size());
    for (int s = 0; s < static_cast<int>(states.size()); ++s) {
        St st = states[s];
        for (Symbol b : parent->successors(st.sym)) {
            int nb = sub.ac_step(st.node, b);
            if (ac[nb].match) continue;
            int t = sub.state_index_[static_cast<std::size_t>(nb) * q + b];
            trans[s].push_back({static_cast<int>(b), t});
        }
    }

    const int S = static_cast<int>(states.size());
    std::vector<std::vector<bool>> adj(S, std::vector<bool>(S, false));
    for (int s = 0; s < S; ++s)
        for (auto& [b, t] : trans[s]) adj[s][t] = true;

    std::vector<std::string> names;
    Recoding rec;
    rec.block_len = 1;
    rec.parent_names = parent->symbol_names();
    for (int s = 0; s < S; ++s) {
        names.push_back(parent->symbol_name(states[s].sym) + "#" + std::to_string(s));
        rec.decode.push_back({states[s].sym});
    }
    sub.child_ = make_sft_raw(std::move(names), std::move(adj), std::move(rec), {});
    sub.decode_.resize(S);
    for (int s = 0; s < S; ++s) sub.decode_[s] = states[s].sym;

    // Longest avoiding word: longest path in the (acyclic when feedback)
    // reachable product graph.  Cycles mean unbounded.
    {
        std::vector<int> indeg(S, 0);
        for (int s = 0; s < S; ++s)
            for (auto& [b, t] : trans[s]) ++indeg[t];
        std::deque<int> topo;
        for (int s = 0; s < S; ++s)
            if (indeg[s] == 0) topo.push_back(s);
        std::vector<std::uint64_t> best(S, 1);  // word length ending at state
        int seen = 0;
        std::uint64_t longest = S == 0 ? 0 : 1;
        while (!topo.empty()) {
            int s = topo.front();
            topo.pop_front();
            ++seen;
            longest = std::max(longest, best[s]);
            for (auto& [b, t] : trans[s]) {
                best[t] = std::max(best[t], best[s] + 1);
                if (--indeg[t] == 0) topo.push_back(t);
            }
        }
        sub.longest_word_ = (seen == S) ? longest : ~std::uint64_t(0);
    }
    return sub;
}

Word SubSft::decode_word(std::span<const Symbol> w) const {
    Word out;
    out.reserve(w.size());
    for (Symbol s : w) out.push_back(decode_[s]);
    return out;
}

ClopenSet SubSft::lift_neighborhood(const ClopenSet& child_set, int context) const {
    if (child_set.space() != child_) throw SpaceMismatch("lift expects a child clopen set");
    if (child_set.is_empty()) return ClopenSet::empty_set(parent_);
    Window w = child_set.window();
    Window target{w.lo - context, w.hi + context};
    ClopenSet ext = child_set.extended_to(target);
    WordSet parent_words(target.length());
    for (std::size_t i = 0; i < ext.words().size(); ++i)
        parent_words.push_back(decode_word(ext.words().word(i)));
    parent_words.normalize();
    return ClopenSet::from_words(parent_, target, std::move(parent_words));
}

EventuallyPeriodicPoint SubSft::decode_point(const EventuallyPeriodicPoint& p) const {
    // Symbol-wise decode preserves the eventually periodic structure.
    return EventuallyPeriodicPoint(parent_, decode_word(p.left_cycle()), decode_word(p.center()),
                                   decode_word(p.right_cycle()), p.anchor());
}

std::optional<EventuallyPeriodicPoint> SubSft::encode_point(const EventuallyPeriodicPoint& x) const {
    // Maximum factor length bounds the synchronization horizon.
    int maxlen = 1;
    for (const auto& f : factors_) maxlen = std::max(maxlen, static_cast<int>(f.size()));

    // The point is ...uuu w vvv... ; we only know it through windows, so
    // locate a left-periodic horizon far enough out.  Probe for the left
    // period by testing windows.
    // Simpler exact approach: simulate the automaton along a long stretch
    // and detect state periodicity on aligned positions.
    // Left start far out so the state synchronizes before coordinate matters.
    // Find left cycle length: probe lengths up to a bound and verify far to
    // the left the point looks periodic with that length.
    const int probe = 512;
    int lper = 0;
    for (int cand = 1; cand <= probe && !lper; ++cand) {
        bool ok = true;
        for (int i = -2 * probe; i < -probe; ++i)
            if (x.at(i) != x.at(i - cand)) { ok = false; break; }
        if (ok) lper = cand;
    }
    int rper = 0;
    for (int cand = 1; cand <= probe && !rper; ++cand) {
        bool ok = true;
        for (int i = probe; i < 2 * probe; ++i)
            if (x.at(i) != x.at(i + cand)) { ok = false; break; }
        if (ok) rper = cand;
    }
    if (!lper || !rper) throw Error("encode_point: could not locate periodic tails");

    const int start = -2 * probe - maxlen - lper;
    int node = 0;
    // Synchronize: after maxlen symbols the state no longer depends on the
    // seed; we start from the trie root far to the left.
    std::vector<int> child_syms;  // child symbol at coordinates start.. (once valid)
    std::vector<int> coords;
    for (int i = start; i <= 2 * probe + rper + maxlen; ++i) {
        Symbol a = x.at(i);
        node = ac_step(node, a);
        if (ac_[node].match) return std::nullopt;  // orbit hits a forbidden factor
        if (i >= start + maxlen) {
            int cs = state_of(node, a);
            if (cs < 0 || !child_->alive(static_cast<Symbol>(cs)))
                return std::nullopt;  // transient state: no bi-infinite continuation here
            child_syms.push_back(cs);
            coords.push_back(i);
        }
    }
    // Assemble: left cycle from an aligned stretch well left of center,
    // right cycle from an aligned stretch well right.
    auto sym_at = [&](int coord) {
        return static_cast<Symbol>(child_syms[coord - coords.front()]);
    };
    Word lcyc, rcyc, center;
    int lcyc_end = -probe;  // left cycle occupies (.., lcyc_end-1]; center starts at lcyc_end
    for (int i = lcyc_end - lper; i < lcyc_end; ++i) lcyc.push_back(sym_at(i));
    // verify periodicity of states on the left stretch
    for (int i = coords.front(); i < lcyc_end - lper; ++i)
        if (sym_at(i) != sym_at(i + lper)) throw Error("encode_point: left states not periodic");
    int rcyc_start = probe;
    for (int i = rcyc_start; i < rcyc_start + rper; ++i) rcyc.push_back(sym_at(i));
    for (int i = rcyc_start; i + rper <= coords.back(); ++i)
        if (sym_at(i) != sym_at(i + rper)) throw Error("encode_point: right states not periodic");
    for (int i = lcyc_end; i < rcyc_start; ++i) center.push_back(sym_at(i));
    return EventuallyPeriodicPoint(child_, lcyc, center, rcyc, lcyc_end);
}

namespace {

std::vector<Word> all_symbol_factors(const SftPtr& parent) {
    std::vector<Word> all;
    for (int a = 0; a < parent->alphabet_size(); ++a) all.push_back({static_cast<Symbol>(a)});
    return all;
}

} // namespace

SubSft maximal_invariant(const ClopenSet& S) {
    const SftPtr& parent = S.space();
    if (S.is_empty()) return avoid_factors(parent, all_symbol_factors(parent));
    // Points never leaving S = points never matching a complement word.
    ClopenSet comp = S.complement();
    std::vector<Word> factors;
    for (std::size_t i = 0; i < comp.words().size(); ++i)
        factors.push_back(comp.words().word_copy(i));
    return avoid_factors(parent, factors);
}

SubSft maximal_invariant_complement(const ClopenSet& K) {
    const SftPtr& parent = K.space();
    std::vector<Word> factors;
    for (std::size_t i = 0; i < K.words().size(); ++i) factors.push_back(K.words().word_copy(i));
    return avoid_factors(parent, factors);
}

namespace {

// Any periodic point of a nonempty essential Sft: follow minimal successors
// until a vertex repeats.
EventuallyPeriodicPoint any_periodic_point(const SftPtr& space) {
    Symbol start = 0;
    while (!space->alive(start)) ++start;
    std::vector<int> seen(space->alphabet_size(), -1);
    Word path{start};
    seen[start] = 0;
    while (true) {
        Symbol next = space->successors(path.back()).front();
        if (seen[next] >= 0) {
            Word cyc(path.begin() + seen[next], path.end());
            return EventuallyPeriodicPoint::periodic(space, cyc);
        }
        seen[next] = static_cast<int>(path.size());
        path.push_back(next);
    }
}

} // namespace

FeedbackResult is_feedback_parts(const std::vector<ClopenSet>& parts) {
    FeedbackResult r;
    SftPtr parent;
    std::vector<Word> factors;
    int max_lo = 0, min_hi = 0;
    bool any = false;
    for (const auto& p : parts) {
        if (!parent) parent = p.space();
        else if (parent != p.space()) throw SpaceMismatch("feedback parts over different spaces");
        if (p.is_empty()) continue;
        if (!any) {
            max_lo = p.window().lo;
            min_hi = p.window().hi;
            any = true;
        } else {
            max_lo = std::max(max_lo, p.window().lo);
            min_hi = std::min(min_hi, p.window().hi);
        }
        for (std::size_t i = 0; i < p.words().size(); ++i) factors.push_back(p.words().word_copy(i));
    }
    if (!parent) throw Error("is_feedback_parts: no parts");
    if (!any) {
        if (parent->is_empty()) {
            r.feedback = true;
            r.n0 = 1;
            return r;
        }
        r.feedback = false;
        r.witness = any_periodic_point(parent);
        return r;
    }
    SubSft avoid = avoid_factors(parent, factors);
    if (!avoid.is_empty()) {
        r.feedback = false;
        r.witness = avoid.decode_point(any_periodic_point(avoid.child()));
        return r;
    }
    r.feedback = true;
    // A run of tau positions avoiding E yields a factor-avoiding word of
    // length tau + (min_hi - max_lo); with lw the longest avoiding word,
    // n0 = lw - (min_hi - max_lo) + 1 bounds every gap (exact for one part).
    const std::int64_t inner = static_cast<std::int64_t>(min_hi) - max_lo;
    std::int64_t n0 = static_cast<std::int64_t>(avoid.longest_avoiding_word()) - inner + 1;
    r.n0 = static_cast<int>(std::max<std::int64_t>(n0, 1));
    return r;
}

FeedbackResult is_feedback(const ClopenSet& E) { return is_feedback_parts({E}); }

} // namespace qcastle
