#include "qcastle/kernels.hpp"

#include "qcastle/guard.hpp"

#include <algorithm>
#include <atomic>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qcastle::kernels {

namespace {

std::atomic<bool> g_parallel{
#ifdef _OPENMP
    true
#else
    false
#endif
};

constexpr std::uint64_t kSat = std::uint64_t(1) << 63;

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return 0;
    if (a >= kSat / b) return kSat;
    return a * b;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
    return (a >= kSat - b) ? kSat : a + b;
}

// paths_out[k][a] = number of admissible length-k walks starting at a;
// paths_in[k][a] = ending at a.  Both saturating.
std::vector<std::vector<std::uint64_t>> walk_counts(const Sft& s, int k, bool outgoing) {
    const int q = s.alphabet_size();
    std::vector<std::vector<std::uint64_t>> v(k + 1, std::vector<std::uint64_t>(q, 0));
    for (int a = 0; a < q; ++a) v[0][a] = s.alive(a) ? 1 : 0;
    for (int step = 1; step <= k; ++step) {
        for (int a = 0; a < q; ++a) {
            if (!s.alive(a)) continue;
            std::uint64_t acc = 0;
            for (Symbol b : outgoing ? s.successors(a) : s.predecessors(a))
                acc = sat_add(acc, v[step - 1][b]);
            v[step][a] = acc;
        }
    }
    return v;
}

} // namespace

bool parallel_enabled() { return g_parallel.load(); }
void set_parallel_enabled(bool on) { g_parallel.store(on); }

std::uint64_t count_extensions(const Sft& space, const WordSet& in, int left, int right) {
    if (in.empty()) return 0;
    auto L = walk_counts(space, left, false);
    auto R = walk_counts(space, right, true);
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < in.size(); ++i) {
        auto w = in.word(i);
        total = sat_add(total, sat_mul(L[left][w.front()], R[right][w.back()]));
        if (total >= kSat) return kSat;
    }
    return total;
}

namespace serial {

WordSet extend_all(const Sft& space, const WordSet& in, int left, int right) {
    WordSet out(in.word_length() + left + right);
    for (std::size_t i = 0; i < in.size(); ++i) {
        WordSet ext = space.extend_word(in.word(i), left, right);
        for (std::size_t j = 0; j < ext.size(); ++j) out.push_back(ext.word(j));
    }
    out.normalize();
    return out;
}

WordSet enumerate_all(const Sft& space, int len) { return space.enumerate_words(len); }

} // namespace serial

WordSet extend_all(const Sft& space, const WordSet& in, int left, int right) {
    if (left == 0 && right == 0) return in;
    std::uint64_t total = count_extensions(space, in, left, right);
    if (total >= kSat) throw DepthExhausted("extension count overflow");
    work_guard().charge(total, "extend_all");

#ifdef _OPENMP
    if (g_parallel.load() && in.size() > 256) {
        const int nt = omp_get_max_threads();
        std::vector<WordSet> parts(nt, WordSet(in.word_length() + left + right));
#pragma omp parallel for schedule(dynamic, 64)
        for (std::size_t i = 0; i < in.size(); ++i) {
            WordSet ext = space.extend_word(in.word(i), left, right);
            auto& mine = parts[omp_get_thread_num()];
            for (std::size_t j = 0; j < ext.size(); ++j) mine.push_back(ext.word(j));
        }
        WordSet out(in.word_length() + left + right);
        for (auto& p : parts)
            out.mutable_flat().insert(out.mutable_flat().end(), p.flat().begin(), p.flat().end());
        out.normalize();
        return out;
    }
#endif
    return serial::extend_all(space, in, left, right);
}

WordSet enumerate_all(const Sft& space, int len) {
#ifdef _OPENMP
    if (g_parallel.load() && space.count_words(1) > 1 && len > 1) {
        std::uint64_t total = space.count_words(len);
        if (total >= kSat) throw DepthExhausted("enumeration count overflow");
        work_guard().charge(total, "enumerate_all");
        // Split by first symbol.
        const int q = space.alphabet_size();
        std::vector<WordSet> parts(q, WordSet(len));
#pragma omp parallel for schedule(dynamic)
        for (int a = 0; a < q; ++a) {
            if (!space.alive(a)) continue;
            Word seed{static_cast<Symbol>(a)};
            parts[a] = space.extend_word(seed, 0, len - 1);
        }
        WordSet out(len);
        for (auto& p : parts)
            out.mutable_flat().insert(out.mutable_flat().end(), p.flat().begin(), p.flat().end());
        // Blocks are already internally sorted and mutually ordered.
        return out;
    }
#endif
    return serial::enumerate_all(space, len);
}

} // namespace qcastle::kernels
