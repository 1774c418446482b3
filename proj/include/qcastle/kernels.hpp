#pragma once

#include "qcastle/sft.hpp"

namespace qcastle::kernels {

/// Library-level parallelism switch (default: on when built with OpenMP).
bool parallel_enabled();
void set_parallel_enabled(bool on);

/// Exact number of admissible extensions of every word of `in` by `left`
/// symbols on the left and `right` on the right; saturates at 2^63.
std::uint64_t count_extensions(const Sft& space, const WordSet& in, int left, int right);

/// Extend every word of `in` by admissible symbols; sorted, deduplicated.
/// Charges the work guard with the exact count before materializing.
WordSet extend_all(const Sft& space, const WordSet& in, int left, int right);

/// All admissible words of the given length.
WordSet enumerate_all(const Sft& space, int len);

/// Serial reference implementations, kept for differential tests and the
/// benchmark target.
namespace serial {
WordSet extend_all(const Sft& space, const WordSet& in, int left, int right);
WordSet enumerate_all(const Sft& space, int len);
} // namespace serial

} // namespace qcastle::kernels
