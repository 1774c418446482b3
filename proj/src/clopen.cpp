#include "qcastle/clopen.hpp"

#include "qcastle/errors.hpp"
#include "qcastle/guard.hpp"
#include "qcastle/kernels.hpp"

#include <algorithm>
#include <sstream>

namespace qcastle {

namespace {

void require_same_space(const ClopenSet& a, const ClopenSet& b) {
    if (a.space() != b.space()) throw SpaceMismatch("clopen operands over different spaces");
}

} // namespace

void ClopenSet::canonicalize() {
    if (words_.empty()) {
        win_ = Window{0, 0};
        words_ = WordSet(1);
    }
}

ClopenSet ClopenSet::empty_set(SftPtr space) {
    ClopenSet s;
    s.space_ = std::move(space);
    return s;
}

ClopenSet ClopenSet::whole_space(SftPtr space) {
    ClopenSet s;
    s.space_ = std::move(space);
    s.win_ = Window{0, 0};
    WordSet w(1);
    for (int a = 0; a < s.space_->alphabet_size(); ++a)
        if (s.space_->alive(a)) w.push_back({static_cast<Symbol>(a)});
    s.words_ = std::move(w);
    s.canonicalize();
    return s;
}

ClopenSet ClopenSet::cylinder(SftPtr space, const Word& w, int pos) {
    if (w.empty()) throw Error("cylinder needs a nonempty word");
    for (Symbol a : w)
        if (a >= static_cast<Symbol>(space->alphabet_size()))
            throw InvalidSymbol("cylinder word uses a symbol outside the alphabet");
    ClopenSet s;
    s.space_ = std::move(space);
    s.win_ = Window{pos, pos + static_cast<int>(w.size()) - 1};
    WordSet ws(static_cast<int>(w.size()));
    if (s.space_->admissible(w)) ws.push_back(w);
    s.words_ = std::move(ws);
    s.canonicalize();
    return s;
}

ClopenSet ClopenSet::cylinder_named(SftPtr space, const std::vector<std::string>& names, int pos) {
    // Direct symbol names first.
    bool direct = true;
    Word w;
    for (const auto& n : names) {
        auto s = space->symbol_by_name(n);
        if (!s) { direct = false; break; }
        w.push_back(*s);
    }
    if (direct) return cylinder(space, w, pos);

    const auto& rec = space->recoding();
    if (!rec) throw InvalidSymbol("unknown symbol in cylinder word");
    // Translate a word over the original alphabet into block symbols.
    Word orig;
    for (const auto& n : names) {
        Symbol a = 0;
        bool found = false;
        for (std::size_t i = 0; i < rec->parent_names.size(); ++i)
            if (rec->parent_names[i] == n) { a = static_cast<Symbol>(i); found = true; break; }
        if (!found) throw InvalidSymbol("unknown symbol '" + n + "' in cylinder word");
        orig.push_back(a);
    }
    const int L = rec->block_len;
    const int n = static_cast<int>(orig.size());
    ClopenSet s;
    s.space_ = space;
    if (n >= L) {
        // Block positions pos .. pos+n-L, each pinned by a slice of the word.
        s.win_ = Window{pos, pos + n - L};
        WordSet ws(n - L + 1);
        Word bw(n - L + 1);
        bool ok = true;
        for (int i = 0; i <= n - L && ok; ++i) {
            ok = false;
            for (std::size_t b = 0; b < rec->decode.size(); ++b) {
                if (!space->alive(static_cast<Symbol>(b))) continue;
                if (std::equal(rec->decode[b].begin(), rec->decode[b].end(), orig.begin() + i)) {
                    bw[i] = static_cast<Symbol>(b);
                    ok = true;
                    break;
                }
            }
        }
        if (ok && space->admissible(bw)) ws.push_back(bw);
        s.words_ = std::move(ws);
    } else {
        // Shorter than a block: one block position, every block starting
        // with the word.
        s.win_ = Window{pos, pos};
        WordSet ws(1);
        for (std::size_t b = 0; b < rec->decode.size(); ++b) {
            if (!space->alive(static_cast<Symbol>(b))) continue;
            if (std::equal(orig.begin(), orig.end(), rec->decode[b].begin()))
                ws.push_back({static_cast<Symbol>(b)});
        }
        s.words_ = std::move(ws);
    }
    s.canonicalize();
    return s;
}

ClopenSet ClopenSet::from_words(SftPtr space, Window win, WordSet words) {
    if (words.word_length() != win.length())
        throw Error("word length does not match window length");
    ClopenSet s;
    s.space_ = std::move(space);
    s.win_ = win;
    for (std::size_t i = 0; i < words.size(); ++i)
        if (!s.space_->admissible(words.word(i)))
            throw Error("inadmissible word in clopen set");
    s.words_ = std::move(words);
    s.canonicalize();
    return s;
}

ClopenSet ClopenSet::extended_to(Window target) const {
    if (is_empty()) {
        ClopenSet s = empty_set(space_);
        s.win_ = target;
        s.words_ = WordSet(target.length());
        return s;
    }
    if (!target.contains(win_)) throw Error("extended_to: target window does not contain source");
    if (target == win_) return *this;
    const int left = win_.lo - target.lo;
    const int right = target.hi - win_.hi;
    WordSet out = kernels::extend_all(*space_, words_, left, right);
    ClopenSet s;
    s.space_ = space_;
    s.win_ = target;
    s.words_ = std::move(out);
    s.canonicalize();
    return s;
}

ClopenSet ClopenSet::shifted(int n) const {
    ClopenSet s = *this;
    if (!s.is_empty()) s.win_ = win_.shifted(n);
    return s;
}

ClopenSet ClopenSet::set_union(const ClopenSet& o) const {
    require_same_space(*this, o);
    if (is_empty()) return o;
    if (o.is_empty()) return *this;
    Window h = win_.hull(o.win_);
    ClopenSet a = extended_to(h), b = o.extended_to(h);
    ClopenSet s;
    s.space_ = space_;
    s.win_ = h;
    s.words_ = WordSet::merge_union(a.words_, b.words_);
    s.canonicalize();
    return s;
}

ClopenSet ClopenSet::set_intersect(const ClopenSet& o) const {
    require_same_space(*this, o);
    if (is_empty() || o.is_empty()) return empty_set(space_);
    Window h = win_.hull(o.win_);
    ClopenSet a = extended_to(h), b = o.extended_to(h);
    ClopenSet s;
    s.space_ = space_;
    s.win_ = h;
    s.words_ = WordSet::merge_intersection(a.words_, b.words_);
    s.canonicalize();
    return s;
}

ClopenSet ClopenSet::set_difference(const ClopenSet& o) const {
    require_same_space(*this, o);
    if (is_empty()) return *this;
    if (o.is_empty()) return *this;
    Window h = win_.hull(o.win_);
    ClopenSet a = extended_to(h), b = o.extended_to(h);
    ClopenSet s;
    s.space_ = space_;
    s.win_ = h;
    s.words_ = WordSet::merge_difference(a.words_, b.words_);
    s.canonicalize();
    return s;
}

ClopenSet ClopenSet::complement() const {
    WordSet all = kernels::enumerate_all(*space_, win_.length());
    ClopenSet s;
    s.space_ = space_;
    s.win_ = win_;
    s.words_ = WordSet::merge_difference(all, words_);
    s.canonicalize();
    return s;
}

bool ClopenSet::equals(const ClopenSet& o) const {
    require_same_space(*this, o);
    if (is_empty() || o.is_empty()) return is_empty() == o.is_empty();
    Window h = win_.hull(o.win_);
    return extended_to(h).words_ == o.extended_to(h).words_;
}

bool ClopenSet::subset_of(const ClopenSet& o) const {
    require_same_space(*this, o);
    if (is_empty()) return true;
    if (o.is_empty()) return false;
    if (win_.contains(o.win_)) {
        // Restriction suffices: every point of a word cell has its o-window
        // spelled inside the word.
        const int off = o.win_.lo - win_.lo;
        const std::size_t len = static_cast<std::size_t>(o.win_.length());
        for (std::size_t i = 0; i < words_.size(); ++i) {
            auto w = words_.word(i);
            if (!o.words_.contains(std::span<const Symbol>(w.data() + off, len))) return false;
        }
        return true;
    }
    Window h = win_.hull(o.win_);
    ClopenSet a = extended_to(h), b = o.extended_to(h);
    return WordSet::merge_difference(a.words_, b.words_).empty();
}

bool ClopenSet::intersects(const ClopenSet& o) const {
    require_same_space(*this, o);
    if (is_empty() || o.is_empty()) return false;
    // Join on the window overlap instead of extending to the hull: two sets
    // with overlapping windows meet iff some word pair agrees on the shared
    // coordinates (the merged pin is then automatically admissible).
    const ClopenSet* A = this;
    const ClopenSet* B = &o;
    if (A->win_.lo > B->win_.lo) std::swap(A, B);
    if (B->win_.lo > A->win_.hi) {
        // Disjoint windows: meet iff some last symbol of A reaches some
        // first symbol of B by an admissible path across the gap.
        const int steps = B->win_.lo - A->win_.hi;  // path length in edges
        std::vector<bool> from(space_->alphabet_size(), false);
        for (std::size_t i = 0; i < A->words_.size(); ++i) from[A->words_.word(i).back()] = true;
        for (int g = 0; g < steps; ++g) {
            std::vector<bool> next(space_->alphabet_size(), false);
            for (int a = 0; a < space_->alphabet_size(); ++a)
                if (from[a])
                    for (Symbol b : space_->successors(a)) next[b] = true;
            from = std::move(next);
        }
        for (std::size_t j = 0; j < B->words_.size(); ++j)
            if (from[B->words_.word(j).front()]) return true;
        return false;
    }
    // Overlapping windows.
    const int olo = B->win_.lo, ohi = std::min(A->win_.hi, B->win_.hi);
    const int alen = ohi - olo + 1;
    auto slice_a = [&](std::size_t i) {
        auto w = A->words_.word(i);
        return std::span<const Symbol>(w.data() + (olo - A->win_.lo), static_cast<std::size_t>(alen));
    };
    auto slice_b = [&](std::size_t j) {
        auto w = B->words_.word(j);
        return std::span<const Symbol>(w.data(), static_cast<std::size_t>(alen));
    };
    // A's slices are suffix-positioned, so not sorted; sort index arrays.
    std::vector<std::uint32_t> ia(A->words_.size()), ib(B->words_.size());
    for (std::size_t i = 0; i < ia.size(); ++i) ia[i] = static_cast<std::uint32_t>(i);
    for (std::size_t j = 0; j < ib.size(); ++j) ib[j] = static_cast<std::uint32_t>(j);
    std::sort(ia.begin(), ia.end(), [&](std::uint32_t x, std::uint32_t y) {
        return compare_words(slice_a(x), slice_a(y)) < 0;
    });
    // B's slices are prefixes of sorted words, already sorted.
    std::size_t i = 0, j = 0;
    while (i < ia.size() && j < ib.size()) {
        int c = compare_words(slice_a(ia[i]), slice_b(ib[j]));
        if (c < 0) ++i;
        else if (c > 0) ++j;
        else return true;
    }
    return false;
}

bool ClopenSet::contains_point(const EventuallyPeriodicPoint& x) const {
    if (x.space() != space_) throw SpaceMismatch("point over a different space");
    if (is_empty()) return false;
    Word w = x.window(win_.lo, win_.hi);
    return words_.contains(w);
}

EventuallyPeriodicPoint ClopenSet::some_point() const {
    if (is_empty()) throw Error("some_point of the empty set");
    return point_through_word(space_, words_.word(0), win_.lo);
}

std::string ClopenSet::describe() const {
    std::ostringstream os;
    if (is_empty()) return "{}";
    os << "window [" << win_.lo << "," << win_.hi << "] " << words_.size() << " words";
    if (words_.size() <= 8) {
        os << " {";
        for (std::size_t i = 0; i < words_.size(); ++i) {
            if (i) os << ",";
            auto w = words_.word(i);
            for (Symbol a : w) os << space_->symbol_name(a);
        }
        os << "}";
    }
    return os.str();
}

} // namespace qcastle
