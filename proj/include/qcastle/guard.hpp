#pragma once

#include "qcastle/errors.hpp"

#include <cstdint>
#include <string>

namespace qcastle {

/// Budget for the symbolic constructions.  Every word materialized by an
/// enumeration counts against `word_budget`; deepening loops count against
/// `max_depth`.  Exhaustion throws DepthExhausted instead of letting a far
/// beyond desk-scale configuration eat the machine.
struct WorkGuard {
    std::uint64_t word_budget = 80'000'000;
    std::uint64_t words_used = 0;
    int max_depth = 64;

    void charge(std::uint64_t n, const char* what) {
        words_used += n;
        if (words_used > word_budget)
            throw DepthExhausted(std::string("work budget exceeded in ") + what + " (" +
                                 std::to_string(words_used) + " > " +
                                 std::to_string(word_budget) + " words)");
    }

    void check_depth(int depth, const char* what) const {
        if (depth > max_depth)
            throw DepthExhausted(std::string("deepening loop in ") + what + " exceeded max depth " +
                                 std::to_string(max_depth));
    }
};

/// The guard in effect for the current thread.  Constructions consult it so
/// that callers do not have to thread a parameter through every operation.
WorkGuard& work_guard();

/// RAII scope that swaps in a fresh guard with the given budgets.
class GuardScope {
public:
    explicit GuardScope(std::uint64_t word_budget, int max_depth = 64);
    ~GuardScope();
    GuardScope(const GuardScope&) = delete;
    GuardScope& operator=(const GuardScope&) = delete;

private:
    WorkGuard saved_;
};

} // namespace qcastle
