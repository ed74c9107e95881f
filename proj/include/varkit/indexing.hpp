// Tuple <-> index arithmetic shared by all modules.
//
// Convention: tuples are encoded lexicographically with the FIRST
// coordinate most significant, i.e. (t0,...,tk-1) over base n maps to
// t0*n^(k-1) + t1*n^(k-2) + ... + tk-1.

#ifndef VARKIT_INDEXING_HPP_
#define VARKIT_INDEXING_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace varkit {

// n^k if it fits below `cap`, otherwise nothing.
inline std::optional<std::uint64_t> checked_pow(std::uint64_t n, unsigned k,
                                                std::uint64_t cap) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < k; ++i) {
    if (n != 0 && r > cap / n) return std::nullopt;
    r *= n;
    if (r > cap) return std::nullopt;
  }
  return r;
}

inline std::uint64_t tuple_index(std::span<const std::uint32_t> tuple,
                                 std::uint32_t base) {
  std::uint64_t idx = 0;
  for (auto v : tuple) idx = idx * base + v;
  return idx;
}

inline void tuple_decode(std::uint64_t idx, std::uint32_t base, unsigned k,
                         std::span<std::uint32_t> out) {
  for (unsigned i = k; i-- > 0;) {
    out[i] = static_cast<std::uint32_t>(idx % base);
    idx /= base;
  }
}

// Mixed-base variant used for products of different-sized structures.
inline std::uint64_t tuple_index_mixed(std::span<const std::uint32_t> tuple,
                                       std::span<const std::uint32_t> sizes) {
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < tuple.size(); ++i) idx = idx * sizes[i] + tuple[i];
  return idx;
}

inline void tuple_decode_mixed(std::uint64_t idx,
                               std::span<const std::uint32_t> sizes,
                               std::span<std::uint32_t> out) {
  for (std::size_t i = sizes.size(); i-- > 0;) {
    out[i] = static_cast<std::uint32_t>(idx % sizes[i]);
    idx /= sizes[i];
  }
}

// Advances a k-tuple over {0..base-1} in lexicographic order; false on wrap.
inline bool next_tuple(std::span<std::uint32_t> tuple, std::uint32_t base) {
  for (std::size_t i = tuple.size(); i-- > 0;) {
    if (++tuple[i] < base) return true;
    tuple[i] = 0;
  }
  return false;
}

}  // namespace varkit

#endif  // VARKIT_INDEXING_HPP_
