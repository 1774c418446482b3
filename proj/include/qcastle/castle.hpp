#pragma once

#include "qcastle/clopen.hpp"
#include "qcastle/subsft.hpp"

#include <string>
#include <vector>

namespace qcastle {

/// A tower: base B and height l with B, TB, ..., T^{l-1}B pairwise disjoint.
struct Tower {
    ClopenSet base;
    int height = 1;
    std::string label;

    ClopenSet floor(int i) const { return base.shifted(i); }
    ClopenSet span() const;

    /// Exact check of B cap T^{-i}B = {} for i in [1, height-1].
    bool valid() const;
};

/// A finite disjoint union of towers.
struct Castle {
    std::vector<Tower> towers;
    bool is_partition = false;

    ClopenSet base_union() const;
    ClopenSet span_union() const;
    std::size_t floor_count() const;
    int max_height() const;

    /// Exact pairwise disjointness of all floors of all towers.
    bool floors_disjoint() const;
    /// Exact test that the floors cover (hence partition, given
    /// disjointness) the whole space.
    bool covers_space() const;
    /// floors_disjoint && covers_space; stores the flag.
    bool verify_partition();
};

/// Outcome of the exact N-capturing check for a set E:
/// pass  <=>  E \ TE subset of intersection_{n<N} T^-n E.
struct CaptureReport {
    std::string set_label;
    int N = 0;
    bool pass = false;
    /// On failure: a word of (E \ TE) cap T^-n(E^c) and the offending n.
    std::optional<Word> witness_word;
    int witness_window_lo = 0;
    int witness_n = -1;
};

CaptureReport is_capturing(const ClopenSet& E, int N, const std::string& label = "E");

/// N-capturing check for the complement of K, done entirely on K's side:
/// K^c \ T(K^c) = TK \ K, so the condition is (TK \ K) cap T^-n K = {}.
CaptureReport is_capturing_complement(const ClopenSet& K, int N, const std::string& label = "K^c");

/// Slice every tower so that each floor lies inside a single cylinder on
/// window [-r, r]; heights and unions are preserved.
Castle refine_floors(const Castle& castle, int r);

/// True when T(top floor) cap tower lies in the base: the re-entry property
/// that makes the traversal product of a short tower a genuine power.
bool reenters_at_base(const Tower& tower);

} // namespace qcastle
