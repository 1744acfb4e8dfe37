#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "suparea/errors.hpp"
#include "suparea/random.hpp"

namespace suparea::parallel {

struct ExecutionPolicy {
  unsigned threads = 1;
  /// Replications per block. Fixed independently of `threads`, so the block
  /// partition and therefore every result is the same for any worker count.
  std::uint64_t block_size = 4096;

  void validate() const {
    if (threads < 1) throw DomainError("threads must be >= 1");
    if (block_size < 1) throw DomainError("block_size must be >= 1");
  }
};

/// Runs `reps` replications in blocks. Block b draws from root.child(b) and
/// accumulates into its own Acc via kernel(stream, count, acc); the blocks are
/// then merged in index order with Acc::merge.
template <class Acc, class Kernel>
Acc run_blocks(const numerics::RandomStream& root, std::uint64_t reps,
               const ExecutionPolicy& policy, const Acc& prototype, Kernel&& kernel) {
  policy.validate();
  const std::uint64_t nblocks = (reps + policy.block_size - 1) / policy.block_size;
  std::vector<Acc> partial(nblocks, prototype);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const std::uint64_t b = next.fetch_add(1);
      if (b >= nblocks) return;
      try {
        numerics::RandomStream stream = root.child(b);
        const std::uint64_t begin = b * policy.block_size;
        const std::uint64_t count = std::min(policy.block_size, reps - begin);
        kernel(stream, count, partial[b]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(nblocks);
        return;
      }
    }
  };

  const unsigned nthreads =
      static_cast<unsigned>(std::min<std::uint64_t>(policy.threads, std::max<std::uint64_t>(nblocks, 1)));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(nthreads);
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  Acc total = prototype;
  for (const Acc& p : partial) total.merge(p);
  return total;
}

}  // namespace suparea::parallel
