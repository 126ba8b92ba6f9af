#ifndef XAFCM_NRC_HPP
#define XAFCM_NRC_HPP

// Relative compression C(x||y) against a frozen model, the normalized
// relative compression, and per-block information-content profiles.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "xafcm/core.hpp"
#include "xafcm/error.hpp"
#include "xafcm/model.hpp"

namespace xafcm {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0;
  double carry_ = 0;
};

struct CompressionResult {
  double total_bits = 0;
  /// Cost of each d-block in bits; the last one already scaled when m mod d != 0.
  std::vector<double> block_bits;
  std::uint64_t query_count = 0;
  std::size_t target_length = 0;
  std::size_t alphabet_size = 0;

  double nrc() const {
    return total_bits / (static_cast<double>(target_length) *
                         std::log2(static_cast<double>(alphabet_size)));
  }
};

struct CompressOptions {
  bool keep_blocks = true;
};

namespace detail {

inline void check_target(const SymbolSequence& target, const XaModel& model) {
  if (target.empty()) throw Error(ErrorCode::EmptyTarget, "target is empty");
  if (!(target.alphabet() == model.params().alphabet())) {
    throw Error(ErrorCode::AlphabetMismatch,
                "target alphabet '" + std::string(target.alphabet().symbols()) +
                    "' differs from model alphabet '" +
                    std::string(model.params().alphabet().symbols()) + "'");
  }
}

}  // namespace detail

/// Block i covers target[i*d, i*d + d) and is conditioned on target[i*d - k, i*d),
/// both taken circularly. One model query per block. A final partial block
/// (m mod d = r != 0) is completed by wraparound and charged r/d of its cost.
inline CompressionResult compress_bits(const SymbolSequence& target, const XaModel& model,
                                       CompressOptions options = {}) {
  detail::check_target(target, model);
  const auto data = target.data();
  const std::size_t m = data.size();
  const std::size_t a = model.params().alphabet().size();
  const std::size_t k = model.params().k();
  const std::size_t d = model.params().d();
  const std::size_t blocks = (m + d - 1) / d;
  const std::size_t remainder = m % d;

  CompressionResult r;
  r.target_length = m;
  r.alphabet_size = a;
  if (options.keep_blocks) r.block_bits.reserve(blocks);
  CompensatedSum sum;
  for (std::size_t i = 0; i < blocks; ++i) {
    const auto start = static_cast<std::int64_t>(i * d);
    const std::uint64_t ctx = pack_circular(data, start - static_cast<std::int64_t>(k), k, a);
    const std::uint64_t word = pack_circular(data, start, d, a);
    double bits = model.cost_bits(ctx, word);
    ++r.query_count;
    if (remainder != 0 && i + 1 == blocks) {
      bits *= static_cast<double>(remainder) / static_cast<double>(d);
    }
    sum.add(bits);
    if (options.keep_blocks) r.block_bits.push_back(bits);
  }
  r.total_bits = sum.value();
  return r;
}

/// C(x||y) / (m log2 |A|).
inline double nrc(const SymbolSequence& target, const XaModel& model) {
  return compress_bits(target, model, {.keep_blocks = false}).nrc();
}

struct ProfilePoint {
  std::size_t position = 0;
  double bits_per_symbol = 0;
};

/// Bits per symbol for each d-block, smoothed by a centered moving average of
/// `window` blocks. The averaging window wraps around the block series, as the
/// target itself is circular; windows wider than the series are clamped to it.
inline std::vector<ProfilePoint> information_profile(const SymbolSequence& target,
                                                     const XaModel& model,
                                                     std::size_t window) {
  if (window < 1) throw Error(ErrorCode::InvalidParams, "profile window must be >= 1");
  const auto result = compress_bits(target, model);
  const std::size_t d = model.params().d();
  const std::size_t m = target.size();
  const std::size_t blocks = result.block_bits.size();

  std::vector<double> per_symbol(blocks);
  for (std::size_t i = 0; i < blocks; ++i) {
    // The scaled final block carries (m - i*d) symbols.
    const std::size_t span = std::min(d, m - i * d);
    per_symbol[i] = result.block_bits[i] / static_cast<double>(span);
  }

  const std::size_t w = std::min(window, blocks);
  const std::size_t before = (w - 1) / 2;
  std::vector<ProfilePoint> out(blocks);
  // Sliding sum over the circular block series.
  CompensatedSum first;
  for (std::size_t j = 0; j < w; ++j) first.add(per_symbol[(blocks - before + j) % blocks]);
  double running = first.value();
  for (std::size_t i = 0; i < blocks; ++i) {
    if (i > 0) {
      running -= per_symbol[(i - 1 + blocks - before) % blocks];
      running += per_symbol[(i - 1 + blocks - before + w) % blocks];
    }
    out[i] = {i * d, running / static_cast<double>(w)};
  }
  return out;
}

}  // namespace xafcm

#endif  // XAFCM_NRC_HPP
