#pragma once

#include "qcastle/clopen.hpp"

#include <optional>

namespace qcastle {

/// An invariant sub-SFT of a parent space, presented by its own memory-1
/// child Sft whose symbols decode to parent symbols (block length 1: each
/// child symbol is a parent symbol plus the bounded left context needed to
/// police the defining constraint).  Child coordinate i corresponds to
/// parent coordinate i.
class SubSft {
public:
    const SftPtr& parent() const { return parent_; }
    const SftPtr& child() const { return child_; }
    bool is_empty() const { return child_->is_empty(); }

    Symbol decode_symbol(Symbol child_sym) const { return decode_[child_sym]; }
    Word decode_word(std::span<const Symbol> w) const;

    /// Parent-clopen neighborhood of the lift of a child clopen set,
    /// pinned with `context` extra child symbols on each side.  The nested
    /// intersection over growing contexts equals the exact lift.
    ClopenSet lift_neighborhood(const ClopenSet& child_set, int context) const;

    /// The parent point spelled by a child point.
    EventuallyPeriodicPoint decode_point(const EventuallyPeriodicPoint& child_point) const;

    /// The child point tracking a parent point whose full orbit satisfies
    /// the defining constraint; nullopt if the orbit ever violates it.
    std::optional<EventuallyPeriodicPoint> encode_point(const EventuallyPeriodicPoint& x) const;

    /// Longest parent word avoiding every defining factor (0 if none, ~0 if
    /// unbounded).  Used for feedback horizons.
    std::uint64_t longest_avoiding_word() const { return longest_word_; }

private:
    friend SubSft avoid_factors(const SftPtr& parent, const std::vector<Word>& factors);
    SftPtr parent_;
    SftPtr child_;
    std::vector<Symbol> decode_;          // child symbol -> parent symbol
    std::vector<Word> factors_;           // defining forbidden factors
    std::uint64_t longest_word_ = 0;

    // Aho-Corasick tables kept for encode_point.
    struct AcNode {
        std::vector<std::pair<Symbol, int>> children;
        int fail = 0;
        bool match = false;
        int depth = 0;
        Symbol last = 0;
    };
    std::vector<AcNode> ac_;
    int ac_step(int node, Symbol a) const;
    // (ac node, last symbol) -> child symbol, or -1 when dead/pruned
    std::vector<int> state_index_;
    int state_of(int node, Symbol a) const;
};

/// The maximal invariant subshift of "never see any of these factors":
/// all parent points x such that no factor occurs in x at any position.
SubSft avoid_factors(const SftPtr& parent, const std::vector<Word>& factors);

/// Maximal invariant set of a clopen S: the points whose entire orbit stays
/// in S.  Materializes the complement words of S on its window.
SubSft maximal_invariant(const ClopenSet& S);

/// Maximal invariant set of the complement of K, without materializing the
/// complement: the points whose orbit never enters K.
SubSft maximal_invariant_complement(const ClopenSet& K);

/// Exact feedback decision for a clopen set E, with horizon n0 on success
/// and an invariant witness point on failure.
FeedbackResult is_feedback(const ClopenSet& E);

/// Feedback decision for a union of clopen parts kept on their own windows
/// (no joint-hull extension).  n0 is exact for a single part and a safe
/// upper bound otherwise.
FeedbackResult is_feedback_parts(const std::vector<ClopenSet>& parts);

} // namespace qcastle
