#pragma once

// Counter-based random streams and a deterministic block-parallel driver.
//
// Every trajectory draws from its own stream keyed by (master seed, index);
// output k of a stream is a pure function of (key, k), so results do not
// depend on how trials are scheduled across threads.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

namespace linewalk {

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class RandomStream {
 public:
  using result_type = std::uint64_t;
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  RandomStream(std::uint64_t master_seed, std::uint64_t index)
      : key_(mix64(master_seed ^ mix64(index * kGamma + 0x632be59bd9b4e019ULL))) {}

  std::uint64_t next_u64() { return mix64(key_ + (++counter_) * kGamma); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  std::uint64_t key() const { return key_; }
  std::uint64_t position() const { return counter_; }

  result_type operator()() { return next_u64(); }
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Master seed plus worker count for a Monte Carlo experiment. Results are a
/// function of the seed alone.
struct MonteCarlo {
  std::uint64_t seed = 1;
  unsigned threads = 1;

  RandomStream stream(std::uint64_t index) const { return RandomStream(seed, index); }
  /// Independent sub-experiment; the tag names its purpose.
  MonteCarlo child(std::uint64_t tag) const { return {mix64(seed + mix64(tag + 0x5851f42d4c957f2dULL)), threads}; }
};

/// Splits [0, count) into fixed blocks of `block` items, evaluates
/// fn(begin, end) for each block on up to `threads` workers and returns the
/// results in block order. The block layout does not depend on `threads`.
template <typename Fn>
auto run_blocks(std::size_t count, std::size_t block, unsigned threads, Fn fn)
    -> std::vector<decltype(fn(std::size_t{}, std::size_t{}))> {
  using Partial = decltype(fn(std::size_t{}, std::size_t{}));
  block = std::max<std::size_t>(block, 1);
  const std::size_t blocks = (count + block - 1) / block;
  std::vector<Partial> results(blocks);
  if (blocks == 0) return results;
  const unsigned workers = static_cast<unsigned>(std::clamp<std::size_t>(threads, 1, blocks));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= blocks) return;
      try {
        results[b] = fn(b * block, std::min(count, (b + 1) * block));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(blocks);
        return;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace linewalk
