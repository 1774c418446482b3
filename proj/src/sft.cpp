#include "qcastle/sft.hpp"

#include "qcastle/errors.hpp"
#include "qcastle/guard.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace qcastle {

namespace {

thread_local WorkGuard g_guard;

} // namespace

WorkGuard& work_guard() { return g_guard; }

GuardScope::GuardScope(std::uint64_t word_budget, int max_depth) : saved_(g_guard) {
    g_guard = WorkGuard{};
    g_guard.word_budget = word_budget;
    g_guard.max_depth = max_depth;
}

GuardScope::~GuardScope() { g_guard = saved_; }

std::shared_ptr<const Sft> make_sft_raw(std::vector<std::string> names,
                                        std::vector<std::vector<bool>> adj,
                                        std::optional<Recoding> recoding,
                                        std::vector<std::vector<std::string>> forbidden) {
    auto sft = std::shared_ptr<Sft>(new Sft());
    sft->names_ = std::move(names);
    sft->recoding_ = std::move(recoding);
    sft->forbidden_ = std::move(forbidden);
    sft->essentialize(adj);
    return sft;
}

void Sft::essentialize(const std::vector<std::vector<bool>>& adj) {
    const int q = static_cast<int>(names_.size());
    alive_.assign(q, true);
    std::size_t before_edges = 0;
    for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b)
            if (adj[a][b]) ++before_edges;

    // Iterated removal of sources and sinks.
    bool changed = true;
    while (changed) {
        changed = false;
        for (int a = 0; a < q; ++a) {
            if (!alive_[a]) continue;
            bool has_out = false, has_in = false;
            for (int b = 0; b < q; ++b) {
                if (alive_[b] && adj[a][b]) has_out = true;
                if (alive_[b] && adj[b][a]) has_in = true;
            }
            if (!has_out || !has_in) {
                alive_[a] = false;
                changed = true;
            }
        }
    }

    out_.assign(q, {});
    in_.assign(q, {});
    edge_count_ = 0;
    for (int a = 0; a < q; ++a) {
        if (!alive_[a]) continue;
        for (int b = 0; b < q; ++b) {
            if (alive_[b] && adj[a][b]) {
                out_[a].push_back(b);
                in_[b].push_back(a);
                ++edge_count_;
            }
        }
    }
    pruned_symbols_ = static_cast<int>(std::count(alive_.begin(), alive_.end(), false));
    pruned_edges_ = before_edges - edge_count_;
    empty_ = edge_count_ == 0;
}

std::shared_ptr<const Sft> Sft::from_edges(std::vector<std::string> names,
                                           std::vector<std::pair<Symbol, Symbol>> edges) {
    const int q = static_cast<int>(names.size());
    std::vector<std::vector<bool>> adj(q, std::vector<bool>(q, false));
    for (auto [a, b] : edges) {
        if (a >= static_cast<Symbol>(q) || b >= static_cast<Symbol>(q))
            throw InvalidSymbol("edge endpoint out of alphabet range");
        adj[a][b] = true;
    }
    return make_sft_raw(std::move(names), std::move(adj), std::nullopt, {});
}

namespace {

bool contains_factor(std::span<const Symbol> w, const Word& f) {
    if (f.size() > w.size()) return false;
    for (std::size_t i = 0; i + f.size() <= w.size(); ++i) {
        bool hit = true;
        for (std::size_t j = 0; j < f.size(); ++j)
            if (w[i + j] != f[j]) { hit = false; break; }
        if (hit) return true;
    }
    return false;
}

} // namespace

std::shared_ptr<const Sft> Sft::from_forbidden(std::vector<std::string> names,
                                               const std::vector<std::vector<std::string>>& forbidden) {
    const int q = static_cast<int>(names.size());
    auto index_of = [&](const std::string& s) -> Symbol {
        for (int i = 0; i < q; ++i)
            if (names[i] == s) return static_cast<Symbol>(i);
        throw InvalidSymbol("forbidden word uses unknown symbol '" + s + "'");
    };

    std::vector<Word> fwords;
    std::size_t maxlen = 1;
    for (const auto& f : forbidden) {
        if (f.empty()) throw InvalidSymbol("forbidden word of length zero");
        Word w;
        for (const auto& s : f) w.push_back(index_of(s));
        maxlen = std::max(maxlen, w.size());
        fwords.push_back(std::move(w));
    }

    if (maxlen <= 2) {
        std::vector<std::vector<bool>> adj(q, std::vector<bool>(q, true));
        std::vector<bool> banned(q, false);
        for (const auto& w : fwords) {
            if (w.size() == 1) banned[w[0]] = true;
            else adj[w[0]][w[1]] = false;
        }
        for (int a = 0; a < q; ++a)
            for (int b = 0; b < q; ++b)
                if (banned[a] || banned[b]) adj[a][b] = false;
        return make_sft_raw(std::move(names), std::move(adj), std::nullopt, forbidden);
    }

    // Higher-block recoding to memory 1: block symbols are the admissible
    // (maxlen-1)-words, transitions overlap by maxlen-2 and are checked
    // against every forbidden factor fitting in the merged span.
    const int L = static_cast<int>(maxlen) - 1;
    std::vector<Word> blocks;
    Word cur;
    auto ok_word = [&](std::span<const Symbol> w) {
        for (const auto& f : fwords)
            if (contains_factor(w, f)) return false;
        return true;
    };
    // Depth-first enumeration of the q^L candidates; desk-scale alphabets only.
    std::vector<int> stack{0};
    cur.assign(1, 0);
    while (!stack.empty()) {
        if (cur.back() >= static_cast<Symbol>(q)) {
            stack.pop_back();
            cur.pop_back();
            if (!cur.empty()) ++cur.back();
            continue;
        }
        if (!ok_word(cur)) {
            ++cur.back();
            continue;
        }
        if (static_cast<int>(cur.size()) == L) {
            blocks.push_back(cur);
            ++cur.back();
            continue;
        }
        stack.push_back(0);
        cur.push_back(0);
    }

    const int Q = static_cast<int>(blocks.size());
    std::vector<std::vector<bool>> adj(Q, std::vector<bool>(Q, false));
    for (int i = 0; i < Q; ++i) {
        for (int j = 0; j < Q; ++j) {
            bool overlap = true;
            for (int k = 0; k + 1 < L; ++k)
                if (blocks[i][k + 1] != blocks[j][k]) { overlap = false; break; }
            if (!overlap) continue;
            Word merged = blocks[i];
            merged.push_back(blocks[j][L - 1]);
            if (ok_word(merged)) adj[i][j] = true;
        }
    }

    bool single_char = true;
    for (const auto& n : names)
        if (n.size() != 1) single_char = false;
    std::vector<std::string> block_names;
    for (const auto& b : blocks) {
        std::string s;
        for (std::size_t k = 0; k < b.size(); ++k) {
            if (k && !single_char) s += '.';
            s += names[b[k]];
        }
        block_names.push_back(s);
    }

    Recoding rec;
    rec.block_len = L;
    rec.parent_names = names;
    rec.decode = blocks;
    return make_sft_raw(std::move(block_names), std::move(adj), std::move(rec), forbidden);
}

std::shared_ptr<const Sft> Sft::from_forbidden_strings(const std::string& alphabet,
                                                       const std::vector<std::string>& forbidden) {
    std::vector<std::string> names;
    for (char c : alphabet) names.emplace_back(1, c);
    std::vector<std::vector<std::string>> fw;
    for (const auto& w : forbidden) {
        std::vector<std::string> f;
        for (char c : w) f.emplace_back(1, c);
        fw.push_back(std::move(f));
    }
    return from_forbidden(std::move(names), fw);
}

std::optional<Symbol> Sft::symbol_by_name(const std::string& name) const {
    for (int i = 0; i < alphabet_size(); ++i)
        if (names_[i] == name) return static_cast<Symbol>(i);
    return std::nullopt;
}

bool Sft::edge(Symbol a, Symbol b) const {
    const auto& succ = out_[a];
    return std::binary_search(succ.begin(), succ.end(), b);
}

bool Sft::admissible(std::span<const Symbol> w) const {
    if (empty_) return false;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] >= static_cast<Symbol>(alphabet_size()) || !alive_[w[i]]) return false;
        if (i + 1 < w.size() && !edge(w[i], w[i + 1])) return false;
    }
    return true;
}

std::uint64_t Sft::count_words(int len) const {
    if (empty_ || len <= 0) return 0;
    const std::uint64_t cap = std::uint64_t(1) << 63;
    const int q = alphabet_size();
    std::vector<std::uint64_t> cnt(q, 0);
    for (int a = 0; a < q; ++a) cnt[a] = alive_[a] ? 1 : 0;
    for (int step = 1; step < len; ++step) {
        std::vector<std::uint64_t> next(q, 0);
        for (int a = 0; a < q; ++a) {
            if (cnt[a] == 0) continue;
            for (Symbol b : out_[a]) {
                next[b] += cnt[a];
                if (next[b] >= cap) next[b] = cap;
            }
        }
        cnt = std::move(next);
    }
    std::uint64_t total = 0;
    for (int a = 0; a < q; ++a) {
        total += cnt[a];
        if (total >= cap) return cap;
    }
    return total;
}

WordSet Sft::enumerate_words(int len) const {
    WordSet out(len);
    if (empty_ || len <= 0) return out;
    work_guard().charge(count_words(len), "enumerate_words");
    Word cur;
    cur.reserve(len);
    // DFS in symbol order; output is born sorted.
    auto rec = [&](auto&& self, int depth) -> void {
        if (depth == len) {
            out.push_back(cur);
            return;
        }
        if (depth == 0) {
            for (int a = 0; a < alphabet_size(); ++a) {
                if (!alive_[a]) continue;
                cur.push_back(static_cast<Symbol>(a));
                self(self, 1);
                cur.pop_back();
            }
        } else {
            for (Symbol b : out_[cur.back()]) {
                cur.push_back(b);
                self(self, depth + 1);
                cur.pop_back();
            }
        }
    };
    rec(rec, 0);
    return out;
}

WordSet Sft::extend_word(std::span<const Symbol> w, int left, int right) const {
    const int total = static_cast<int>(w.size()) + left + right;
    WordSet out(total);
    if (empty_ || !admissible(w)) return out;

    // Right extensions first, then left; both depth-first in symbol order.
    std::vector<Word> rights{Word{}};
    for (int step = 0; step < right; ++step) {
        std::vector<Word> next;
        for (const auto& r : rights) {
            Symbol last = r.empty() ? w.back() : r.back();
            for (Symbol b : out_[last]) {
                Word nr = r;
                nr.push_back(b);
                next.push_back(std::move(nr));
            }
        }
        rights = std::move(next);
        if (rights.empty()) return out;
    }
    std::vector<Word> lefts{Word{}};
    for (int step = 0; step < left; ++step) {
        std::vector<Word> next;
        for (const auto& l : lefts) {
            Symbol first = l.empty() ? w.front() : l.front();
            for (Symbol a : in_[first]) {
                Word nl;
                nl.reserve(l.size() + 1);
                nl.push_back(a);
                nl.insert(nl.end(), l.begin(), l.end());
                next.push_back(std::move(nl));
            }
        }
        lefts = std::move(next);
        if (lefts.empty()) return out;
    }

    Word buf(total);
    for (const auto& l : lefts) {
        std::copy(l.begin(), l.end(), buf.begin());
        std::copy(w.begin(), w.end(), buf.begin() + left);
        for (const auto& r : rights) {
            std::copy(r.begin(), r.end(), buf.begin() + left + w.size());
            out.push_back(buf);
        }
    }
    out.normalize();
    return out;
}

SftPtr golden_mean() {
    static SftPtr gm = Sft::from_forbidden_strings("01", {"11"});
    return gm;
}

SftPtr full_shift(int q) {
    std::string alphabet;
    for (int i = 0; i < q; ++i) alphabet += static_cast<char>('0' + i);
    return Sft::from_forbidden_strings(alphabet, {});
}

} // namespace qcastle
