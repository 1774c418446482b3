#pragma once

#include "qcastle/errors.hpp"
#include "qcastle/wordset.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace qcastle {

/// How an Sft's symbols decode into words of another alphabet.  Present on
/// spaces produced by higher-block recoding (sft_from_forbidden with long
/// factors) and on the child spaces of maximal_invariant.
struct Recoding {
    int block_len = 1;
    std::vector<std::string> parent_names;  // alphabet the decode maps into
    std::vector<Word> decode;               // per symbol, a word of length block_len
};

/// A two-sided subshift of finite type presented by a memory-1 transition
/// graph over a finite alphabet.  Construction always essentializes: symbols
/// without incoming or outgoing transitions are pruned until every admissible
/// word extends to a bi-infinite point, or the space is marked empty.
class Sft {
public:
    static std::shared_ptr<const Sft> from_edges(std::vector<std::string> names,
                                                 std::vector<std::pair<Symbol, Symbol>> edges);

    /// Memory-1 presentation of the sequences over `names` avoiding every
    /// word of `forbidden` as a factor.  Factors of length > 2 trigger a
    /// higher-block recoding; the result then carries a Recoding describing
    /// the block decode.
    static std::shared_ptr<const Sft> from_forbidden(std::vector<std::string> names,
                                                     const std::vector<std::vector<std::string>>& forbidden);

    /// Convenience for single-character symbol names: "11" == {"1","1"}.
    static std::shared_ptr<const Sft> from_forbidden_strings(const std::string& alphabet,
                                                             const std::vector<std::string>& forbidden);

    int alphabet_size() const { return static_cast<int>(names_.size()); }
    const std::string& symbol_name(Symbol a) const { return names_[a]; }
    const std::vector<std::string>& symbol_names() const { return names_; }
    std::optional<Symbol> symbol_by_name(const std::string& name) const;

    bool is_empty() const { return empty_; }
    bool alive(Symbol a) const { return alive_[a]; }
    bool edge(Symbol a, Symbol b) const;
    const std::vector<Symbol>& successors(Symbol a) const { return out_[a]; }
    const std::vector<Symbol>& predecessors(Symbol a) const { return in_[a]; }
    std::size_t edge_count() const { return edge_count_; }
    int pruned_symbol_count() const { return pruned_symbols_; }
    std::size_t pruned_edge_count() const { return pruned_edges_; }

    bool admissible(std::span<const Symbol> w) const;

    /// Number of admissible words of the given length, saturating at 2^63.
    std::uint64_t count_words(int len) const;

    /// All admissible words of the given length, lexicographically sorted.
    /// Charges the work guard.
    WordSet enumerate_words(int len) const;

    /// All admissible words of length left+w.size()+right whose middle is w.
    WordSet extend_word(std::span<const Symbol> w, int left, int right) const;

    const std::optional<Recoding>& recoding() const { return recoding_; }
    const std::vector<std::vector<std::string>>& forbidden_provenance() const { return forbidden_; }

private:
    friend std::shared_ptr<const Sft> make_sft_raw(std::vector<std::string>,
                                                   std::vector<std::vector<bool>>,
                                                   std::optional<Recoding>,
                                                   std::vector<std::vector<std::string>>);
    Sft() = default;
    void essentialize(const std::vector<std::vector<bool>>& adj);

    std::vector<std::string> names_;
    std::vector<bool> alive_;
    std::vector<std::vector<Symbol>> out_, in_;
    std::size_t edge_count_ = 0;
    bool empty_ = false;
    int pruned_symbols_ = 0;
    std::size_t pruned_edges_ = 0;
    std::optional<Recoding> recoding_;
    std::vector<std::vector<std::string>> forbidden_;
};

using SftPtr = std::shared_ptr<const Sft>;

/// The golden-mean shift over {0,1} (no "11"), ubiquitous in the tests.
SftPtr golden_mean();

/// The full shift on q symbols named "0".."q-1".
SftPtr full_shift(int q);

} // namespace qcastle
