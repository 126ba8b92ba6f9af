#ifndef XAFCM_QUANTIZE_HPP
#define XAFCM_QUANTIZE_HPP

// SAX quantization of an annotated one-dimensional signal: split at peak
// annotations, resample each segment by piecewise aggregate approximation,
// z-normalize, and discretize against standard-normal breakpoints.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xafcm/core.hpp"
#include "xafcm/error.hpp"

namespace xafcm {

/// Inverse standard normal CDF. Rational initial guess (Acklam) followed by
/// Halley steps against erfc, accurate to ~1e-15 over (0, 1).
inline double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorCode::InvalidParams, "quantile probability must lie in (0, 1)");
  }
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double e[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double low = 0.02425;
  double x;
  if (p < low) {
    const double q = std::sqrt(-2 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((e[0] * q + e[1]) * q + e[2]) * q + e[3]) * q + 1);
  } else if (p <= 1 - low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  } else {
    const double q = std::sqrt(-2 * std::log(1 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((e[0] * q + e[1]) * q + e[2]) * q + e[3]) * q + 1);
  }
  for (int iter = 0; iter < 3; ++iter) {
    const double err = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
    const double u = err * std::sqrt(2 * std::numbers::pi) * std::exp(x * x / 2);
    x = x - u / (1 + x * u / 2);
  }
  return x;
}

/// Breakpoints at the i/|A| quantiles of N(0, 1), rounded to 10 decimals.
inline std::vector<double> sax_breakpoints(std::size_t alphabet_size) {
  if (alphabet_size < 3 || alphabet_size > 20) {
    throw Error(ErrorCode::InvalidParams, "SAX alphabet size must lie in [3, 20]");
  }
  std::vector<double> out;
  out.reserve(alphabet_size - 1);
  for (std::size_t i = 1; i < alphabet_size; ++i) {
    double q = normal_quantile(static_cast<double>(i) / static_cast<double>(alphabet_size));
    q = std::round(q * 1e10) / 1e10;
    if (q == 0.0) q = 0.0;  // no negative zero
    out.push_back(q);
  }
  return out;
}

struct SaxConfig {
  std::size_t symbols_per_segment = 200;
  std::size_t alphabet_size = 6;
  std::vector<double> breakpoints = sax_breakpoints(6);

  static SaxConfig make(std::size_t symbols_per_segment, std::size_t alphabet_size) {
    if (symbols_per_segment < 1) {
      throw Error(ErrorCode::InvalidParams, "symbols per segment must be >= 1");
    }
    return {symbols_per_segment, alphabet_size, sax_breakpoints(alphabet_size)};
  }

  Alphabet alphabet() const { return Alphabet::letters(alphabet_size); }
};

struct AnnotatedSignal {
  std::vector<double> samples;
  std::vector<std::size_t> peak_indices;
  std::optional<std::size_t> expected_period;
};

/// Half-open segments [peak_i, peak_{i+1}).
inline std::vector<std::span<const double>> segment(const AnnotatedSignal& signal) {
  const auto& peaks = signal.peak_indices;
  if (peaks.size() < 2) {
    throw Error(ErrorCode::TooFewPeaks,
                "need at least 2 peaks, got " + std::to_string(peaks.size()));
  }
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    if (peaks[i] > signal.samples.size()) {
      throw Error(ErrorCode::InvalidPeaks,
                  "peak " + std::to_string(peaks[i]) + " beyond signal length " +
                      std::to_string(signal.samples.size()));
    }
    if (i > 0 && peaks[i] <= peaks[i - 1]) {
      throw Error(ErrorCode::InvalidPeaks, "peak indices must be strictly ascending");
    }
  }
  std::vector<std::span<const double>> out;
  out.reserve(peaks.size() - 1);
  const std::span<const double> all(signal.samples);
  for (std::size_t i = 0; i + 1 < peaks.size(); ++i) {
    out.push_back(all.subspan(peaks[i], peaks[i + 1] - peaks[i]));
  }
  return out;
}

/// Piecewise aggregate approximation. Sample i occupies [i, i+1) and frame j
/// occupies [j L/N, (j+1) L/N); each output is the overlap-weighted mean.
/// Integer arithmetic on the common scale L*N keeps the weights exact.
inline std::vector<double> paa(std::span<const double> input, std::size_t out_len) {
  if (input.empty()) throw Error(ErrorCode::EmptySegment, "PAA input is empty");
  if (out_len < 1) throw Error(ErrorCode::InvalidParams, "PAA output length must be >= 1");
  const std::size_t len = input.size();
  if (len == out_len) return {input.begin(), input.end()};
  std::vector<double> out(out_len, 0.0);
  for (std::size_t j = 0; j < out_len; ++j) {
    const std::uint64_t lo = j * len;  // frame bounds, in units of 1/out_len sample
    const std::uint64_t hi = (j + 1) * len;
    double acc = 0;
    for (std::size_t i = lo / out_len; i < len && i * out_len < hi; ++i) {
      const std::uint64_t s_lo = i * out_len;
      const std::uint64_t s_hi = (i + 1) * out_len;
      const std::uint64_t overlap = std::min(hi, s_hi) - std::max(lo, s_lo);
      acc += input[i] * static_cast<double>(overlap);
    }
    out[j] = acc / static_cast<double>(len);
  }
  return out;
}

/// Indices (not letters) of SAX symbols for one segment. Values are
/// z-normalized with the population standard deviation; a value equal to a
/// breakpoint belongs to the upper interval. Flat segments map to |A|/2.
inline std::vector<Symbol> symbolize_indices(std::span<const double> values,
                                             const SaxConfig& config) {
  if (values.empty()) return {};
  double mean = 0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(values.size());
  const double sd = std::sqrt(var);

  std::vector<Symbol> out(values.size());
  if (sd < 1e-12 * std::max(1.0, std::fabs(mean))) {
    std::fill(out.begin(), out.end(), static_cast<Symbol>(config.alphabet_size / 2));
    return out;
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double z = (values[i] - mean) / sd;
    Symbol s = 0;
    while (s < config.breakpoints.size() && z >= config.breakpoints[s]) ++s;
    out[i] = s;
  }
  return out;
}

inline SymbolSequence symbolize(std::span<const double> values, const SaxConfig& config) {
  return SymbolSequence(config.alphabet(), symbolize_indices(values, config));
}

/// segment -> paa -> symbolize, concatenated in segment order.
inline SymbolSequence quantize_signal(const AnnotatedSignal& signal, const SaxConfig& config) {
  const auto segments = segment(signal);
  std::vector<Symbol> data;
  data.reserve(segments.size() * config.symbols_per_segment);
  for (const auto& seg : segments) {
    const auto resampled = paa(seg, config.symbols_per_segment);
    const auto symbols = symbolize_indices(resampled, config);
    data.insert(data.end(), symbols.begin(), symbols.end());
  }
  return SymbolSequence(config.alphabet(), std::move(data));
}

}  // namespace xafcm

#endif  // XAFCM_QUANTIZE_HPP
