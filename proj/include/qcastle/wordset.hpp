#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace qcastle {

using Symbol = std::uint32_t;
using Word = std::vector<Symbol>;

/// A set of equal-length words stored row-major in one arena, kept sorted
/// lexicographically and deduplicated.  This is the carrier for clopen-set
/// word lists; all boolean algebra reduces to merges over these.
class WordSet {
public:
    WordSet() = default;
    explicit WordSet(int len) : len_(len) {}
    WordSet(int len, std::vector<Symbol> flat);

    int word_length() const { return len_; }
    std::size_t size() const { return len_ == 0 ? 0 : flat_.size() / len_; }
    bool empty() const { return flat_.empty(); }

    std::span<const Symbol> word(std::size_t i) const {
        return {flat_.data() + i * len_, static_cast<std::size_t>(len_)};
    }
    Word word_copy(std::size_t i) const {
        auto w = word(i);
        return Word(w.begin(), w.end());
    }

    const std::vector<Symbol>& flat() const { return flat_; }
    std::vector<Symbol>& mutable_flat() { return flat_; }

    void push_back(std::span<const Symbol> w);
    void push_back(std::initializer_list<Symbol> w) { push_back(std::span<const Symbol>(w.begin(), w.size())); }

    /// Restores the sorted/unique invariant after bulk push_back.
    void normalize();

    bool contains(std::span<const Symbol> w) const;

    bool operator==(const WordSet& other) const {
        return len_ == other.len_ && flat_ == other.flat_;
    }

    static WordSet merge_union(const WordSet& a, const WordSet& b);
    static WordSet merge_intersection(const WordSet& a, const WordSet& b);
    static WordSet merge_difference(const WordSet& a, const WordSet& b);

private:
    int len_ = 0;
    std::vector<Symbol> flat_;
};

int compare_words(std::span<const Symbol> a, std::span<const Symbol> b);

} // namespace qcastle
