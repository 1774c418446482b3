#pragma once

#include "qcastle/point.hpp"
#include "qcastle/sft.hpp"

namespace qcastle {

/// Coordinate window [lo, hi], inclusive.
struct Window {
    int lo = 0, hi = 0;
    int length() const { return hi - lo + 1; }
    bool contains(const Window& o) const { return lo <= o.lo && o.hi <= hi; }
    Window hull(const Window& o) const { return {std::min(lo, o.lo), std::max(hi, o.hi)}; }
    Window shifted(int n) const { return {lo - n, hi - n}; }
    bool operator==(const Window& o) const { return lo == o.lo && hi == o.hi; }
};

/// Exact clopen subset of an Sft: the points whose coordinates on `window`
/// spell one of `words`.  Every stored word is admissible; the empty set is
/// canonicalized to no words on window [0,0].  Immutable in spirit: all
/// operations return fresh sets.
class ClopenSet {
public:
    ClopenSet() = default;

    static ClopenSet empty_set(SftPtr space);
    static ClopenSet whole_space(SftPtr space);
    /// Cylinder [w]_pos over the space's own alphabet.
    static ClopenSet cylinder(SftPtr space, const Word& w, int pos);
    /// Cylinder given by symbol names (resolves block recodings: a word over
    /// the original alphabet of a recoded space is translated into block
    /// symbols).
    static ClopenSet cylinder_named(SftPtr space, const std::vector<std::string>& names, int pos);
    static ClopenSet from_words(SftPtr space, Window win, WordSet words);

    const SftPtr& space() const { return space_; }
    const Window& window() const { return win_; }
    const WordSet& words() const { return words_; }
    bool is_empty() const { return words_.empty(); }

    /// Same set on an enclosing window: all admissible words on `target`
    /// whose restriction to window() lies in words().
    ClopenSet extended_to(Window target) const;

    /// T^n of this set: window translated by -n, words unchanged.
    ClopenSet shifted(int n) const;

    ClopenSet set_union(const ClopenSet& o) const;
    ClopenSet set_intersect(const ClopenSet& o) const;
    ClopenSet set_difference(const ClopenSet& o) const;
    /// Complement within the whole space; materializes every admissible word
    /// on the window, so only sensible for modest windows.
    ClopenSet complement() const;

    bool equals(const ClopenSet& o) const;
    bool subset_of(const ClopenSet& o) const;
    bool intersects(const ClopenSet& o) const;
    bool contains_point(const EventuallyPeriodicPoint& x) const;

    /// Some point of the set (first word, closed off along cycles).
    EventuallyPeriodicPoint some_point() const;

    std::string describe() const;

private:
    void canonicalize();
    SftPtr space_;
    Window win_{0, 0};
    WordSet words_{1};
};

/// Result of the feedback-set decision.
struct FeedbackResult {
    bool feedback = false;
    /// Smallest horizon with union_{n<n0} T^-n E = X (valid when feedback).
    int n0 = 0;
    /// A point whose orbit avoids E (valid when not feedback).
    std::optional<EventuallyPeriodicPoint> witness;
};

} // namespace qcastle
