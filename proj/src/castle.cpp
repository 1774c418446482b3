#include "qcastle/castle.hpp"

#include "qcastle/errors.hpp"
#include "qcastle/guard.hpp"

#include <algorithm>
#include <map>

namespace qcastle {

ClopenSet Tower::span() const {
    ClopenSet s = base;
    for (int i = 1; i < height; ++i) s = s.set_union(base.shifted(i));
    return s;
}

bool Tower::valid() const {
    for (int i = 1; i < height; ++i)
        if (base.intersects(base.shifted(-i))) return false;
    return true;
}

ClopenSet Castle::base_union() const {
    if (towers.empty()) throw Error("castle with no towers");
    ClopenSet u = towers.front().base;
    for (std::size_t i = 1; i < towers.size(); ++i) u = u.set_union(towers[i].base);
    return u;
}

ClopenSet Castle::span_union() const {
    if (towers.empty()) throw Error("castle with no towers");
    ClopenSet u = towers.front().span();
    for (std::size_t i = 1; i < towers.size(); ++i) u = u.set_union(towers[i].span());
    return u;
}

std::size_t Castle::floor_count() const {
    std::size_t n = 0;
    for (const auto& t : towers) n += t.height;
    return n;
}

int Castle::max_height() const {
    int h = 0;
    for (const auto& t : towers) h = std::max(h, t.height);
    return h;
}

bool Castle::floors_disjoint() const {
    // Within a tower, floor disjointness collapses to B cap T^{-i}B = {}.
    for (const auto& t : towers)
        if (!t.valid()) return false;
    // Across towers, T^iB cap T^jB' = T^i(B cap T^{j-i}B'), so one check
    // per shift difference covers all floor pairs.
    for (std::size_t s = 0; s < towers.size(); ++s) {
        for (std::size_t t = s + 1; t < towers.size(); ++t) {
            const Tower& a = towers[s];
            const Tower& b = towers[t];
            for (int k = -(a.height - 1); k <= b.height - 1; ++k)
                if (a.base.intersects(b.base.shifted(k))) return false;
        }
    }
    return true;
}

bool Castle::covers_space() const {
    if (towers.empty()) return false;
    const SftPtr& space = towers.front().base.space();
    // Union all floors, coarsest windows first to keep the hull tight.
    std::vector<ClopenSet> floors;
    for (const auto& t : towers)
        for (int i = 0; i < t.height; ++i) floors.push_back(t.floor(i));
    std::sort(floors.begin(), floors.end(), [](const ClopenSet& x, const ClopenSet& y) {
        return x.window().length() < y.window().length();
    });
    ClopenSet u = ClopenSet::empty_set(space);
    for (const auto& f : floors) u = u.set_union(f);
    return u.equals(ClopenSet::whole_space(space));
}

bool Castle::verify_partition() {
    is_partition = floors_disjoint() && covers_space();
    return is_partition;
}

CaptureReport is_capturing(const ClopenSet& E, int N, const std::string& label) {
    if (N < 1) throw Error("is_capturing needs N >= 1");
    CaptureReport r;
    r.set_label = label;
    r.N = N;
    ClopenSet front = E.set_difference(E.shifted(1));  // E \ TE
    for (int n = 1; n < N; ++n) {
        ClopenSet bad = front.set_difference(E.shifted(-n));
        if (!bad.is_empty()) {
            r.pass = false;
            r.witness_word = bad.words().word_copy(0);
            r.witness_window_lo = bad.window().lo;
            r.witness_n = n;
            return r;
        }
    }
    r.pass = true;
    return r;
}

CaptureReport is_capturing_complement(const ClopenSet& K, int N, const std::string& label) {
    if (N < 1) throw Error("is_capturing needs N >= 1");
    CaptureReport r;
    r.set_label = label;
    r.N = N;
    ClopenSet front = K.shifted(1).set_difference(K);  // K^c \ T(K^c) = TK \ K
    for (int n = 1; n < N; ++n) {
        ClopenSet bad = front.set_intersect(K.shifted(-n));
        if (!bad.is_empty()) {
            r.pass = false;
            r.witness_word = bad.words().word_copy(0);
            r.witness_window_lo = bad.window().lo;
            r.witness_n = n;
            return r;
        }
    }
    r.pass = true;
    return r;
}

Castle refine_floors(const Castle& castle, int r) {
    Castle out;
    out.towers.reserve(castle.towers.size());
    for (const auto& t : castle.towers) {
        // Every floor T^jB must lie in one cylinder on [-r, r], i.e. the
        // base cell must pin coordinates [j-r, j+r] for each j < height.
        Window need{-r, t.height - 1 + r};
        Window target = t.base.window().hull(need);
        ClopenSet ext = t.base.extended_to(target);
        if (ext.is_empty()) continue;
        const int off = need.lo - target.lo;
        const int slice_len = need.length();
        // Bucket base words by their restriction to the pinned span.
        std::map<Word, WordSet> buckets;
        for (std::size_t i = 0; i < ext.words().size(); ++i) {
            auto w = ext.words().word(i);
            Word key(w.begin() + off, w.begin() + off + slice_len);
            auto [it, fresh] = buckets.try_emplace(std::move(key), WordSet(target.length()));
            it->second.push_back(w);
        }
        int cell = 0;
        for (auto& [key, ws] : buckets) {
            ws.normalize();
            Tower nt;
            nt.base = ClopenSet::from_words(t.base.space(), target, std::move(ws));
            nt.height = t.height;
            nt.label = t.label.empty() ? "" : t.label + "/" + std::to_string(cell++);
            out.towers.push_back(std::move(nt));
        }
    }
    out.is_partition = castle.is_partition;
    return out;
}

bool reenters_at_base(const Tower& t) {
    ClopenSet top_next = t.base.shifted(t.height);  // T(top floor)
    ClopenSet back = top_next.set_intersect(t.span());
    return back.subset_of(t.base);
}

} // namespace qcastle
