#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hopf::detail {

inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Start of shard k when [0, total) is split into `shards` contiguous ranges.
inline std::uint64_t shard_begin(std::uint64_t total, std::size_t k, std::size_t shards) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(total) * k / shards);
}

/// Runs fn(shard) for every shard in [0, shards) on up to `threads` workers.
/// Shards are handed out in increasing order. The first exception thrown by
/// any shard is rethrown after all workers join.
template <class Fn>
void for_each_shard(std::size_t shards, unsigned threads, Fn&& fn) {
  const auto workers = std::min<std::size_t>(resolve_threads(threads), shards);
  if (workers <= 1) {
    for (std::size_t k = 0; k < shards; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (std::size_t k = next.fetch_add(1); k < shards; k = next.fetch_add(1)) {
          try {
            fn(k);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next.store(shards);
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace hopf::detail
