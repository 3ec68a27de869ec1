#pragma once

// Deterministic data-parallel building blocks. Every function is a pure
// function of its inputs: the Executor only changes how the work is split,
// never the result.

#include <array>
#include <atomic>
#include <bit>
#include <concepts>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "ugrid/errors.hpp"
#include "ugrid/parallel.hpp"

namespace ugrid {

template <class T>
concept IndexType = std::unsigned_integral<T>;

// Stored cell / object ids are 32-bit; scans accumulate in 64 bits.
using IndexArray = std::vector<std::uint32_t>;

template <IndexType T>
struct ScanResult {
  std::vector<T> sums;
  std::uint64_t total = 0;
};

template <IndexType K, IndexType V>
struct SortedPairs {
  std::vector<K> keys;
  std::vector<V> values;
};

template <IndexType T>
struct RunLengths {
  std::vector<T> uniques;
  std::vector<T> counts;
};

namespace detail {

inline std::uint64_t add_checked(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw SizeError("64-bit accumulator overflow");
  return r;
}

template <IndexType T>
T narrow_checked(std::uint64_t v) {
  if (v > std::numeric_limits<T>::max())
    throw SizeError("value " + std::to_string(v) + " exceeds the " +
                    std::to_string(std::numeric_limits<T>::digits) + "-bit index width");
  return static_cast<T>(v);
}

// Exclusive scan over per-chunk totals; returns the starting offset of each
// chunk and writes the grand total.
template <IndexType T>
std::vector<std::uint64_t> chunk_starts(std::span<const T> xs, const Executor& ex,
                                        std::uint64_t& total) {
  std::vector<std::uint64_t> starts(ex.chunk_count(xs.size()));
  ex.for_chunks(xs.size(), [&](std::size_t k, std::size_t begin, std::size_t end) {
    std::uint64_t s = 0;
    for (std::size_t i = begin; i < end; ++i) s = add_checked(s, xs[i]);
    starts[k] = s;
  });
  std::uint64_t running = 0;
  for (auto& s : starts) {
    const std::uint64_t part = s;
    s = running;
    running = add_checked(running, part);
  }
  total = running;
  return starts;
}

}  // namespace detail

/// sums[i] = xs[0] + ... + xs[i-1]; total = sum of all elements.
/// Throws SizeError when the total does not fit T.
template <IndexType T>
ScanResult<T> exclusive_sum(std::span<const T> xs, const Executor& ex = Executor{}) {
  ScanResult<T> out;
  const auto starts = detail::chunk_starts(xs, ex, out.total);
  detail::narrow_checked<T>(out.total);
  out.sums.resize(xs.size());
  ex.for_chunks(xs.size(), [&](std::size_t k, std::size_t begin, std::size_t end) {
    std::uint64_t s = starts[k];
    for (std::size_t i = begin; i < end; ++i) {
      out.sums[i] = static_cast<T>(s);
      s += xs[i];
    }
  });
  return out;
}

template <IndexType T>
ScanResult<T> exclusive_sum(const std::vector<T>& xs, const Executor& ex = Executor{}) {
  return exclusive_sum(std::span<const T>(xs), ex);
}

/// out[i] = xs[0] + ... + xs[i].
template <IndexType T>
std::vector<T> inclusive_sum(std::span<const T> xs, const Executor& ex = Executor{}) {
  std::uint64_t total = 0;
  const auto starts = detail::chunk_starts(xs, ex, total);
  detail::narrow_checked<T>(total);
  std::vector<T> out(xs.size());
  ex.for_chunks(xs.size(), [&](std::size_t k, std::size_t begin, std::size_t end) {
    std::uint64_t s = starts[k];
    for (std::size_t i = begin; i < end; ++i) {
      s += xs[i];
      out[i] = static_cast<T>(s);
    }
  });
  return out;
}

template <IndexType T>
std::vector<T> inclusive_sum(const std::vector<T>& xs, const Executor& ex = Executor{}) {
  return inclusive_sum(std::span<const T>(xs), ex);
}

/// Zero array of length `total` with a 1 at offsets[i] for every i in
/// [1, nobjs). The inclusive sum of the result is the object id of every
/// slot. Offsets must be strictly increasing (no zero-count objects) so
/// that marks never coincide.
template <IndexType T>
std::vector<T> mark_boundaries(std::span<const T> offsets, std::size_t nobjs, std::uint64_t total,
                               const Executor& ex = Executor{}) {
  if (offsets.size() != nobjs)
    throw InvariantError("mark_boundaries: offsets length does not match object count");
  if (nobjs == 0) {
    if (total != 0) throw InvariantError("mark_boundaries: no objects but non-zero total");
    return {};
  }
  if (offsets[0] != 0) throw InvariantError("mark_boundaries: first offset must be 0");
  if (offsets[nobjs - 1] >= total)
    throw InvariantError("mark_boundaries: offset out of range (last object has no slots)");
  std::vector<T> out(total, T{0});
  ex.for_each_index(nobjs, [&](std::size_t i) {
    if (i == 0) return;
    if (offsets[i] <= offsets[i - 1])
      throw InvariantError("mark_boundaries: offsets must be strictly increasing at object " +
                           std::to_string(i));
    out[offsets[i]] = T{1};
  });
  return out;
}

template <IndexType T>
std::vector<T> mark_boundaries(const std::vector<T>& offsets, std::size_t nobjs,
                               std::uint64_t total, const Executor& ex = Executor{}) {
  return mark_boundaries(std::span<const T>(offsets), nobjs, total, ex);
}

/// Exclusive prefix sum of `values` restarting at 0 wherever
/// segment_keys[i] != segment_keys[i-1].
template <IndexType T, IndexType K>
std::vector<T> segmented_exclusive_sum(std::span<const T> values, std::span<const K> segment_keys,
                                       const Executor& ex = Executor{}) {
  if (values.size() != segment_keys.size())
    throw InvariantError("segmented_exclusive_sum: values and keys differ in length");
  const std::size_t n = values.size();
  std::vector<T> out(n);
  const std::size_t chunks = ex.chunk_count(n);
  std::vector<std::uint64_t> tail_sum(chunks);
  std::vector<char> single_segment(chunks);

  ex.for_chunks(n, [&](std::size_t k, std::size_t begin, std::size_t end) {
    std::uint64_t s = 0;
    bool single = true;
    for (std::size_t i = begin; i < end; ++i) {
      if (i > begin && segment_keys[i] != segment_keys[i - 1]) {
        s = 0;
        single = false;
      }
      out[i] = detail::narrow_checked<T>(s);
      s = detail::add_checked(s, values[i]);
    }
    tail_sum[k] = s;
    single_segment[k] = single;
  });

  // Carry into the leading segment of each chunk.
  std::vector<std::uint64_t> carry(chunks, 0);
  for (std::size_t k = 1; k < chunks; ++k) {
    const std::size_t begin = ex.chunk_begin(n, chunks, k);
    if (segment_keys[begin] == segment_keys[begin - 1])
      carry[k] = detail::add_checked(tail_sum[k - 1], single_segment[k - 1] ? carry[k - 1] : 0);
  }

  ex.for_chunks(n, [&](std::size_t k, std::size_t begin, std::size_t end) {
    if (carry[k] == 0) return;
    for (std::size_t i = begin; i < end; ++i) {
      if (i > begin && segment_keys[i] != segment_keys[i - 1]) break;
      out[i] = detail::narrow_checked<T>(detail::add_checked(out[i], carry[k]));
    }
  });
  return out;
}

template <IndexType T, IndexType K>
std::vector<T> segmented_exclusive_sum(const std::vector<T>& values,
                                       const std::vector<K>& segment_keys,
                                       const Executor& ex = Executor{}) {
  return segmented_exclusive_sum(std::span<const T>(values), std::span<const K>(segment_keys), ex);
}

inline constexpr unsigned kRadixDigitBits = 8;

inline unsigned radix_passes(unsigned key_bits) {
  return (key_bits + kRadixDigitBits - 1) / kRadixDigitBits;
}

/// Bits needed to represent every id in [0, count).
inline unsigned key_bits_for(std::uint64_t count) {
  return count <= 1 ? 0u : static_cast<unsigned>(std::bit_width(count - 1));
}

/// Stable LSD radix sort of (key, value) pairs, 8-bit digits,
/// ceil(key_bits / 8) passes. Every key must be < 2^key_bits.
template <IndexType K, IndexType V>
SortedPairs<K, V> radix_sort_pairs(std::vector<K> keys, std::vector<V> values, unsigned key_bits,
                                   const Executor& ex = Executor{}) {
  if (keys.size() != values.size())
    throw InvariantError("radix_sort_pairs: keys and values differ in length");
  if (key_bits > std::numeric_limits<K>::digits)
    throw InvariantError("radix_sort_pairs: key_bits wider than the key type");
  const std::size_t n = keys.size();
  if (key_bits < 64) {
    const std::uint64_t limit = std::uint64_t{1} << key_bits;
    ex.for_each_index(n, [&](std::size_t i) {
      if (static_cast<std::uint64_t>(keys[i]) >= limit)
        throw InvariantError("radix_sort_pairs: key " + std::to_string(keys[i]) +
                             " exceeds key_bits=" + std::to_string(key_bits));
    });
  }

  const unsigned passes = radix_passes(key_bits);
  if (passes == 0 || n < 2) return {std::move(keys), std::move(values)};

  std::vector<K> key_tmp(n);
  std::vector<V> value_tmp(n);
  const std::size_t chunks = ex.chunk_count(n);
  std::vector<std::array<std::size_t, 256>> hist(chunks);

  for (unsigned pass = 0; pass < passes; ++pass) {
    const unsigned shift = pass * kRadixDigitBits;
    auto digit = [shift](K key) { return static_cast<std::size_t>((key >> shift) & 0xFFu); };

    ex.for_chunks(n, [&](std::size_t k, std::size_t begin, std::size_t end) {
      hist[k].fill(0);
      for (std::size_t i = begin; i < end; ++i) ++hist[k][digit(keys[i])];
    });

    // Digit-major, chunk-minor offsets keep the scatter stable.
    std::size_t running = 0;
    for (std::size_t d = 0; d < 256; ++d) {
      for (std::size_t k = 0; k < chunks; ++k) {
        const std::size_t c = hist[k][d];
        hist[k][d] = running;
        running += c;
      }
    }

    ex.for_chunks(n, [&](std::size_t k, std::size_t begin, std::size_t end) {
      auto& cursor = hist[k];
      for (std::size_t i = begin; i < end; ++i) {
        const std::size_t pos = cursor[digit(keys[i])]++;
        key_tmp[pos] = keys[i];
        value_tmp[pos] = values[i];
      }
    });
    keys.swap(key_tmp);
    values.swap(value_tmp);
  }
  return {std::move(keys), std::move(values)};
}

/// Maximal runs of equal adjacent elements. The input need not be sorted.
template <IndexType T>
RunLengths<T> run_length_encode(std::span<const T> xs, const Executor& ex = Executor{}) {
  const std::size_t n = xs.size();
  RunLengths<T> out;
  if (n == 0) return out;
  auto is_head = [&](std::size_t i) { return i == 0 || xs[i] != xs[i - 1]; };

  const std::size_t chunks = ex.chunk_count(n);
  std::vector<std::size_t> heads(chunks);
  ex.for_chunks(n, [&](std::size_t k, std::size_t begin, std::size_t end) {
    std::size_t c = 0;
    for (std::size_t i = begin; i < end; ++i) c += is_head(i);
    heads[k] = c;
  });
  std::size_t runs = 0;
  for (auto& h : heads) {
    const std::size_t c = h;
    h = runs;
    runs += c;
  }

  std::vector<std::size_t> head_pos(runs + 1);
  head_pos[runs] = n;
  out.uniques.resize(runs);
  ex.for_chunks(n, [&](std::size_t k, std::size_t begin, std::size_t end) {
    std::size_t r = heads[k];
    for (std::size_t i = begin; i < end; ++i) {
      if (!is_head(i)) continue;
      out.uniques[r] = xs[i];
      head_pos[r] = i;
      ++r;
    }
  });

  out.counts.resize(runs);
  ex.for_each_index(runs, [&](std::size_t r) {
    out.counts[r] = detail::narrow_checked<T>(head_pos[r + 1] - head_pos[r]);
  });
  return out;
}

template <IndexType T>
RunLengths<T> run_length_encode(const std::vector<T>& xs, const Executor& ex = Executor{}) {
  return run_length_encode(std::span<const T>(xs), ex);
}

/// out[indices[i]] = values[i], zero elsewhere. Indices must be unique and
/// < target_len.
template <IndexType I, IndexType V>
std::vector<V> scatter(std::span<const I> indices, std::span<const V> values,
                       std::size_t target_len, const Executor& ex = Executor{}) {
  if (indices.size() != values.size())
    throw InvariantError("scatter: indices and values differ in length");
  std::vector<V> out(target_len, V{0});
  std::vector<unsigned char> claimed(target_len, 0);
  ex.for_each_index(indices.size(), [&](std::size_t i) {
    const auto idx = static_cast<std::uint64_t>(indices[i]);
    if (idx >= target_len)
      throw InvariantError("scatter: index " + std::to_string(idx) + " out of range " +
                           std::to_string(target_len));
    if (std::atomic_ref<unsigned char>(claimed[idx]).exchange(1, std::memory_order_relaxed))
      throw InvariantError("scatter: duplicate index " + std::to_string(idx));
    out[idx] = values[i];
  });
  return out;
}

template <IndexType I, IndexType V>
std::vector<V> scatter(const std::vector<I>& indices, const std::vector<V>& values,
                       std::size_t target_len, const Executor& ex = Executor{}) {
  return scatter(std::span<const I>(indices), std::span<const V>(values), target_len, ex);
}

}  // namespace ugrid
