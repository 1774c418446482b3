#pragma once

#include "qcastle/sft.hpp"

#include <string>

namespace qcastle {

/// A bi-infinite admissible sequence ...uuu w vvv... described by a left
/// cycle u, a finite center w anchored at a fixed coordinate, and a right
/// cycle v.  Finite data, so spot checks on actual points stay decidable.
class EventuallyPeriodicPoint {
public:
    EventuallyPeriodicPoint(SftPtr space, Word left_cycle, Word center, Word right_cycle,
                            int anchor);

    /// The point ppp.ppp with the cycle's first symbol at coordinate 0.
    static EventuallyPeriodicPoint periodic(SftPtr space, Word cycle);

    const SftPtr& space() const { return space_; }
    Symbol at(int i) const;
    Word window(int lo, int hi) const;

    /// T^n x, with (Tx)_i = x_{i+1}.
    EventuallyPeriodicPoint shifted(int n) const;

    const Word& left_cycle() const { return left_cycle_; }
    const Word& center() const { return center_; }
    const Word& right_cycle() const { return right_cycle_; }
    int anchor() const { return anchor_; }

    std::string describe() const;

private:
    SftPtr space_;
    Word left_cycle_, center_, right_cycle_;
    int anchor_;
};

/// A periodic orbit, stored as the lexicographically least rotation of its
/// primitive cycle word.
class PeriodicOrbit {
public:
    PeriodicOrbit(SftPtr space, Word cycle);

    const SftPtr& space() const { return space_; }
    int least_period() const { return static_cast<int>(cycle_.size()); }
    const Word& cycle() const { return cycle_; }
    EventuallyPeriodicPoint point() const;
    std::string name() const;

    bool operator==(const PeriodicOrbit& o) const { return cycle_ == o.cycle_; }
    bool operator<(const PeriodicOrbit& o) const;

private:
    SftPtr space_;
    Word cycle_;
};

/// All periodic orbits of least period < max_period, one representative per
/// orbit, sorted by (period, cycle word).
std::vector<PeriodicOrbit> periodic_orbits(const SftPtr& space, int max_period);

/// Some point whose central window [lo,hi] spells w, built by closing both
/// ends of w along graph cycles.  Exists for every admissible word of an
/// essential Sft.
EventuallyPeriodicPoint point_through_word(const SftPtr& space, std::span<const Symbol> w, int lo);

} // namespace qcastle
