#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace carnot {

/// Number of workers to use when the caller passes 0.
inline unsigned default_workers() {
  unsigned hw = std::thread::hardware_concurrency();
  return std::clamp(hw, 1u, 16u);
}

/// Splits [0, n) into `blocks` contiguous ranges and runs fn(block, begin, end)
/// on a bounded pool. Block boundaries depend only on (n, blocks), so callers
/// that merge per-block results in block order get deterministic output.
template <class Fn>
void parallel_blocks(std::size_t n, std::size_t blocks, unsigned workers, Fn&& fn) {
  if (n == 0) return;
  blocks = std::clamp<std::size_t>(blocks, 1, n);
  if (workers == 0) workers = default_workers();
  auto range = [&](std::size_t b) {
    return std::pair{n * b / blocks, n * (b + 1) / blocks};
  };
  if (workers == 1 || blocks == 1) {
    for (std::size_t b = 0; b < blocks; ++b) {
      auto [lo, hi] = range(b);
      fn(b, lo, hi);
    }
    return;
  }
  std::mutex mu;
  std::size_t next = 0;
  std::exception_ptr failure;
  auto worker = [&] {
    for (;;) {
      std::size_t b;
      {
        std::lock_guard lock(mu);
        if (next >= blocks || failure) return;
        b = next++;
      }
      try {
        auto [lo, hi] = range(b);
        fn(b, lo, hi);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < std::min<std::size_t>(workers, blocks); ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

/// SplitMix64 step; gives independent per-trial seeds from one base seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace carnot
