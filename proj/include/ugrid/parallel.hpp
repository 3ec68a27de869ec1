#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace ugrid {

// Static, contiguous partitioning of index ranges over a fixed number of
// workers. Chunk boundaries depend only on (n, workers, min_grain), so every
// algorithm built on top produces results independent of thread timing.
class Executor {
 public:
  static constexpr std::size_t kDefaultGrain = 4096;

  // workers == 0 selects std::thread::hardware_concurrency().
  explicit Executor(unsigned workers = 0, std::size_t min_grain = kDefaultGrain);

  static Executor serial() { return Executor(1); }

  unsigned workers() const noexcept { return workers_; }
  std::size_t min_grain() const noexcept { return min_grain_; }

  std::size_t chunk_count(std::size_t n) const noexcept {
    if (n == 0) return 0;
    const std::size_t by_grain = (n + min_grain_ - 1) / min_grain_;
    return std::max<std::size_t>(1, std::min<std::size_t>(workers_, by_grain));
  }

  std::size_t chunk_begin(std::size_t n, std::size_t chunks, std::size_t k) const noexcept {
    return n / chunks * k + std::min(k, n % chunks);
  }

  // fn(chunk, begin, end) is invoked once per chunk; chunk 0 runs on the
  // calling thread. The first exception thrown by any chunk is rethrown.
  template <class Fn>
  void for_chunks(std::size_t n, Fn&& fn) const {
    const std::size_t chunks = chunk_count(n);
    if (chunks == 0) return;
    if (chunks == 1) {
      fn(std::size_t{0}, std::size_t{0}, n);
      return;
    }
    std::vector<std::exception_ptr> errors(chunks);
    auto run = [&](std::size_t k) {
      try {
        fn(k, chunk_begin(n, chunks, k), chunk_begin(n, chunks, k + 1));
      } catch (...) {
        errors[k] = std::current_exception();
      }
    };
    {
      std::vector<std::jthread> threads;
      threads.reserve(chunks - 1);
      for (std::size_t k = 1; k < chunks; ++k) threads.emplace_back(run, k);
      run(0);
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  template <class Fn>
  void for_each_index(std::size_t n, Fn&& fn) const {
    for_chunks(n, [&](std::size_t, std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) fn(i);
    });
  }

 private:
  unsigned workers_;
  std::size_t min_grain_;
};

// Per-task work tally. Each chunk owns one and they are merged after the
// phase, so no counter is shared between threads.
struct TaskWork {
  std::uint64_t max_task = 0;
  std::uint64_t total = 0;

  void record(std::uint64_t work) noexcept {
    max_task = std::max(max_task, work);
    total += work;
  }

  void merge(const TaskWork& other) noexcept {
    max_task = std::max(max_task, other.max_task);
    total += other.total;
  }
};

inline TaskWork merge_all(const std::vector<TaskWork>& parts) {
  TaskWork out;
  for (const auto& p : parts) out.merge(p);
  return out;
}

}  // namespace ugrid
