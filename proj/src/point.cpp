#include "qcastle/point.hpp"

#include "qcastle/errors.hpp"

#include <algorithm>

namespace qcastle {

namespace {

long long mod_floor(long long a, long long m) {
    long long r = a % m;
    return r < 0 ? r + m : r;
}

} // namespace

EventuallyPeriodicPoint::EventuallyPeriodicPoint(SftPtr space, Word left_cycle, Word center,
                                                 Word right_cycle, int anchor)
    : space_(std::move(space)),
      left_cycle_(std::move(left_cycle)),
      center_(std::move(center)),
      right_cycle_(std::move(right_cycle)),
      anchor_(anchor) {
    if (left_cycle_.empty() || right_cycle_.empty())
        throw Error("eventually periodic point needs nonempty cycles");
    auto edge_ok = [&](Symbol a, Symbol b) { return space_->edge(a, b); };
    bool ok = true;
    for (std::size_t i = 0; i + 1 < left_cycle_.size(); ++i)
        ok = ok && edge_ok(left_cycle_[i], left_cycle_[i + 1]);
    ok = ok && edge_ok(left_cycle_.back(), left_cycle_.front());
    for (std::size_t i = 0; i + 1 < right_cycle_.size(); ++i)
        ok = ok && edge_ok(right_cycle_[i], right_cycle_[i + 1]);
    ok = ok && edge_ok(right_cycle_.back(), right_cycle_.front());
    for (std::size_t i = 0; i + 1 < center_.size(); ++i)
        ok = ok && edge_ok(center_[i], center_[i + 1]);
    Symbol before_center = left_cycle_.back();
    Symbol first_after = center_.empty() ? right_cycle_.front() : center_.front();
    ok = ok && edge_ok(before_center, first_after);
    if (!center_.empty()) ok = ok && edge_ok(center_.back(), right_cycle_.front());
    if (!ok) throw Error("eventually periodic point is not admissible");
}

EventuallyPeriodicPoint EventuallyPeriodicPoint::periodic(SftPtr space, Word cycle) {
    Word c = cycle;
    return EventuallyPeriodicPoint(std::move(space), c, {}, std::move(cycle), 0);
}

Symbol EventuallyPeriodicPoint::at(int i) const {
    long long off = static_cast<long long>(i) - anchor_;
    if (off < 0)
        return left_cycle_[mod_floor(off, static_cast<long long>(left_cycle_.size()))];
    if (off < static_cast<long long>(center_.size())) return center_[off];
    off -= static_cast<long long>(center_.size());
    return right_cycle_[mod_floor(off, static_cast<long long>(right_cycle_.size()))];
}

Word EventuallyPeriodicPoint::window(int lo, int hi) const {
    Word w;
    for (int i = lo; i <= hi; ++i) w.push_back(at(i));
    return w;
}

EventuallyPeriodicPoint EventuallyPeriodicPoint::shifted(int n) const {
    EventuallyPeriodicPoint p = *this;
    p.anchor_ -= n;
    return p;
}

std::string EventuallyPeriodicPoint::describe() const {
    auto word_str = [&](const Word& w) {
        std::string s;
        for (Symbol a : w) s += space_->symbol_name(a);
        return s;
    };
    return "(" + word_str(left_cycle_) + ")^inf " + word_str(center_) + "@" +
           std::to_string(anchor_) + " (" + word_str(right_cycle_) + ")^inf";
}

namespace {

Word least_rotation(const Word& w) {
    Word best = w;
    Word cur = w;
    for (std::size_t k = 1; k < w.size(); ++k) {
        std::rotate(cur.begin(), cur.begin() + 1, cur.end());
        if (cur < best) best = cur;
    }
    return best;
}

bool is_primitive(const Word& w) {
    const std::size_t n = w.size();
    for (std::size_t d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        bool rep = true;
        for (std::size_t i = d; i < n && rep; ++i)
            if (w[i] != w[i - d]) rep = false;
        if (rep) return false;
    }
    return true;
}

} // namespace

PeriodicOrbit::PeriodicOrbit(SftPtr space, Word cycle) : space_(std::move(space)) {
    if (cycle.empty()) throw Error("periodic orbit needs a nonempty cycle");
    for (std::size_t i = 0; i + 1 < cycle.size(); ++i)
        if (!space_->edge(cycle[i], cycle[i + 1])) throw Error("cycle word is not a graph cycle");
    if (!space_->edge(cycle.back(), cycle.front())) throw Error("cycle word does not close up");
    if (!is_primitive(cycle)) throw Error("cycle word is not primitive");
    cycle_ = least_rotation(cycle);
}

EventuallyPeriodicPoint PeriodicOrbit::point() const {
    return EventuallyPeriodicPoint::periodic(space_, cycle_);
}

std::string PeriodicOrbit::name() const {
    std::string s;
    for (Symbol a : cycle_) s += space_->symbol_name(a);
    return s;
}

bool PeriodicOrbit::operator<(const PeriodicOrbit& o) const {
    if (cycle_.size() != o.cycle_.size()) return cycle_.size() < o.cycle_.size();
    return cycle_ < o.cycle_;
}

std::vector<PeriodicOrbit> periodic_orbits(const SftPtr& space, int max_period) {
    std::vector<PeriodicOrbit> orbits;
    if (space->is_empty()) return orbits;
    Word cur;
    for (int len = 1; len < max_period; ++len) {
        cur.clear();
        // DFS over admissible words of this length closing into a cycle.
        auto rec = [&](auto&& self, int depth) -> void {
            if (depth == len) {
                if (!space->edge(cur.back(), cur.front())) return;
                if (!is_primitive(cur)) return;
                if (least_rotation(cur) != cur) return;  // one representative per orbit
                orbits.emplace_back(space, cur);
                return;
            }
            if (depth == 0) {
                for (int a = 0; a < space->alphabet_size(); ++a) {
                    if (!space->alive(a)) continue;
                    cur.push_back(static_cast<Symbol>(a));
                    self(self, 1);
                    cur.pop_back();
                }
            } else {
                for (Symbol b : space->successors(cur.back())) {
                    cur.push_back(b);
                    self(self, depth + 1);
                    cur.pop_back();
                }
            }
        };
        rec(rec, 0);
    }
    std::sort(orbits.begin(), orbits.end());
    return orbits;
}

EventuallyPeriodicPoint point_through_word(const SftPtr& space, std::span<const Symbol> w, int lo) {
    if (w.empty() || !space->admissible(w)) throw Error("point_through_word: inadmissible word");

    // Deterministic walks until a vertex repeats: backward from w.front()
    // gives p_0, p_1, ..., p_m with p_m = p_j (x_{lo-t} = p_t), forward from
    // w.back() gives s_0, ..., s_m' with s_m' = s_k (x_{hi+t} = s_t).
    auto walk = [&](Symbol start, bool backward) {
        Word path{start};
        std::vector<int> seen(space->alphabet_size(), -1);
        seen[start] = 0;
        while (true) {
            Symbol nxt = backward ? space->predecessors(path.back()).front()
                                  : space->successors(path.back()).front();
            path.push_back(nxt);
            if (seen[nxt] >= 0) return std::pair<Word, std::size_t>(path, seen[nxt]);
            seen[nxt] = static_cast<int>(path.size()) - 1;
        }
    };

    auto [p, j] = walk(w.front(), true);
    const std::size_t m = p.size() - 1;
    const std::size_t bt_len = j == 0 ? 0 : j - 1;
    const std::size_t P = m - j;
    Word left_cycle(P);
    for (std::size_t i = 0; i < P; ++i) left_cycle[i] = p[bt_len + P - i];
    Word back_tail(bt_len);
    for (std::size_t i = 0; i < bt_len; ++i) back_tail[i] = p[bt_len - i];

    auto [s, k] = walk(w.back(), false);
    const std::size_t m2 = s.size() - 1;
    const std::size_t ft_len = k == 0 ? 0 : k - 1;
    const std::size_t Q = m2 - k;
    Word right_cycle(Q);
    for (std::size_t i = 0; i < Q; ++i) right_cycle[i] = s[ft_len + 1 + i];
    Word fwd_tail(ft_len);
    for (std::size_t i = 0; i < ft_len; ++i) fwd_tail[i] = s[1 + i];

    Word center = back_tail;
    center.insert(center.end(), w.begin(), w.end());
    center.insert(center.end(), fwd_tail.begin(), fwd_tail.end());
    int anchor = lo - static_cast<int>(bt_len);
    return EventuallyPeriodicPoint(space, std::move(left_cycle), std::move(center),
                                   std::move(right_cycle), anchor);
}

} // namespace qcastle
