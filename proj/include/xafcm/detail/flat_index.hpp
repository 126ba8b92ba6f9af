#ifndef XAFCM_DETAIL_FLAT_INDEX_HPP
#define XAFCM_DETAIL_FLAT_INDEX_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace xafcm::detail {

inline std::uint64_t mix64(std::uint64_t x) noexcept {
  // splitmix64 finalizer
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

/// Read-only open-addressing index over a fixed array of distinct keys.
/// Maps key -> position in that array. Linear probing, load factor <= 0.5.
class FlatIndex {
 public:
  static constexpr std::uint32_t kEmpty = std::numeric_limits<std::uint32_t>::max();

  FlatIndex() = default;

  explicit FlatIndex(std::span<const std::uint64_t> keys) {
    std::size_t cap = 16;
    while (cap < keys.size() * 2) cap <<= 1;
    slots_.assign(cap, kEmpty);
    mask_ = cap - 1;
    for (std::size_t i = 0; i < keys.size(); ++i) {
      std::size_t s = mix64(keys[i]) & mask_;
      while (slots_[s] != kEmpty) s = (s + 1) & mask_;
      slots_[s] = static_cast<std::uint32_t>(i);
    }
  }

  std::optional<std::uint32_t> find(std::span<const std::uint64_t> keys,
                                    std::uint64_t key) const noexcept {
    if (slots_.empty()) return std::nullopt;
    std::size_t s = mix64(key) & mask_;
    for (;;) {
      std::uint32_t v = slots_[s];
      if (v == kEmpty) return std::nullopt;
      if (keys[v] == key) return v;
      s = (s + 1) & mask_;
    }
  }

  std::size_t bytes() const noexcept { return slots_.capacity() * sizeof(std::uint32_t); }

 private:
  std::vector<std::uint32_t> slots_;
  std::size_t mask_ = 0;
};

}  // namespace xafcm::detail

#endif  // XAFCM_DETAIL_FLAT_INDEX_HPP
