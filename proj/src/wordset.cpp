#include "qcastle/wordset.hpp"

#include <algorithm>
#include <cassert>
#include <cstring>
#include <numeric>

namespace qcastle {

int compare_words(std::span<const Symbol> a, std::span<const Symbol> b) {
    assert(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    }
    return 0;
}

WordSet::WordSet(int len, std::vector<Symbol> flat) : len_(len), flat_(std::move(flat)) {
    assert(len_ > 0 ? flat_.size() % len_ == 0 : flat_.empty());
    normalize();
}

void WordSet::push_back(std::span<const Symbol> w) {
    assert(static_cast<int>(w.size()) == len_);
    flat_.insert(flat_.end(), w.begin(), w.end());
}

void WordSet::normalize() {
    if (len_ == 0 || flat_.empty()) return;
    const std::size_t n = flat_.size() / len_;
    if (n == 1) return;
    // Sort row indices, then rebuild the arena in one pass.
    std::vector<std::uint32_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0u);
    const Symbol* base = flat_.data();
    const int len = len_;
    auto row_less = [base, len](std::uint32_t i, std::uint32_t j) {
        const Symbol* a = base + static_cast<std::size_t>(i) * len;
        const Symbol* b = base + static_cast<std::size_t>(j) * len;
        for (int k = 0; k < len; ++k) {
            if (a[k] != b[k]) return a[k] < b[k];
        }
        return false;
    };
    std::sort(idx.begin(), idx.end(), row_less);
    std::vector<Symbol> out;
    out.reserve(flat_.size());
    const Symbol* prev = nullptr;
    for (std::uint32_t i : idx) {
        const Symbol* row = base + static_cast<std::size_t>(i) * len;
        if (prev && std::memcmp(prev, row, sizeof(Symbol) * len) == 0) continue;
        out.insert(out.end(), row, row + len);
        prev = out.data() + out.size() - len;
    }
    // prev points into `out`, which may reallocate; recompute duplicates safely.
    // (reserve above guarantees no reallocation: out.size() <= flat_.size())
    flat_ = std::move(out);
}

bool WordSet::contains(std::span<const Symbol> w) const {
    assert(static_cast<int>(w.size()) == len_);
    std::size_t lo = 0, hi = size();
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        int c = compare_words(word(mid), w);
        if (c == 0) return true;
        if (c < 0)
            lo = mid + 1;
        else
            hi = mid;
    }
    return false;
}

namespace {

template <typename Keep>
WordSet merge(const WordSet& a, const WordSet& b, bool take_b_tail, Keep keep) {
    assert(a.word_length() == b.word_length());
    WordSet out(a.word_length());
    std::size_t i = 0, j = 0;
    const std::size_t na = a.size(), nb = b.size();
    while (i < na && j < nb) {
        int c = compare_words(a.word(i), b.word(j));
        if (c < 0) {
            if (keep(true, false)) out.push_back(a.word(i));
            ++i;
        } else if (c > 0) {
            if (keep(false, true)) out.push_back(b.word(j));
            ++j;
        } else {
            if (keep(true, true)) out.push_back(a.word(i));
            ++i;
            ++j;
        }
    }
    for (; i < na; ++i)
        if (keep(true, false)) out.push_back(a.word(i));
    if (take_b_tail)
        for (; j < nb; ++j)
            if (keep(false, true)) out.push_back(b.word(j));
    return out;
}

} // namespace

WordSet WordSet::merge_union(const WordSet& a, const WordSet& b) {
    return merge(a, b, true, [](bool, bool) { return true; });
}

WordSet WordSet::merge_intersection(const WordSet& a, const WordSet& b) {
    return merge(a, b, false, [](bool ina, bool inb) { return ina && inb; });
}

WordSet WordSet::merge_difference(const WordSet& a, const WordSet& b) {
    return merge(a, b, false, [](bool ina, bool inb) { return ina && !inb; });
}

} // namespace qcastle
