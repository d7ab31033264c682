#ifndef STDPG_THREADING_HPP
#define STDPG_THREADING_HPP

#include <cstddef>
#include <functional>
#include <numeric>
#include <vector>

namespace stdpg {

// Work is partitioned into fixed-size blocks independent of the thread count,
// and reductions combine per-block partials in block order, so results are
// bitwise identical for any number of threads.
inline constexpr std::size_t kWorkBlock = 256;

// Number of worker threads for subsequent parallel sections (>= 1).
void set_threads(unsigned n);
unsigned thread_count();

// Runs fn(block_index, begin, end) over [0, n) split into kWorkBlock chunks.
void parallel_blocks(std::size_t n,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

// Deterministic parallel reduction: per-block partial sums accumulated in
// block order.
double parallel_block_sum(std::size_t n,
                          const std::function<double(std::size_t, std::size_t)>& partial);

}  // namespace stdpg

#endif  // STDPG_THREADING_HPP
