#ifndef XAFCM_MODEL_HPP
#define XAFCM_MODEL_HPP

// Extended-alphabet finite-context model: counts of d-symbol words following
// k-symbol contexts, learned symbol by symbol over a circular reference.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <iterator>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "xafcm/core.hpp"
#include "xafcm/detail/flat_index.hpp"
#include "xafcm/error.hpp"

namespace xafcm {

inline constexpr double kDefaultConfidence = 0.9;

/// Largest extended-alphabet size |A|^d accepted (exclusive).
inline constexpr std::uint64_t kMaxWordSpace = (1ULL << 31) - 1;

/// Additive-smoothing alpha that makes a word seen exactly once after a
/// context (and nothing else seen there) predicted with probability p^d:
///   (1 + a) / (1 + a |A|^d) = p^d   =>   a = (1 - p^d) / (p^d |A|^d - 1)
inline double solve_alpha(std::size_t alphabet_size, std::size_t depth,
                          double confidence = kDefaultConfidence) {
  if (depth == 0) throw Error(ErrorCode::InvalidParams, "depth must be >= 1");
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw Error(ErrorCode::InvalidParams, "confidence must lie in (0, 1)");
  }
  const double q = std::pow(confidence, static_cast<double>(depth));
  const double words = std::pow(static_cast<double>(alphabet_size),
                                static_cast<double>(depth));
  const double denom = q * words - 1.0;
  if (!(denom > 0.0)) {
    throw Error(ErrorCode::NoSolution,
                "no positive alpha: p^d * |A|^d <= 1 for |A|=" +
                    std::to_string(alphabet_size) +
                    ", d=" + std::to_string(depth));
  }
  return (1.0 - q) / denom;
}

/// Either a fixed alpha or "auto" (solved at a given confidence).
struct AlphaSetting {
  bool automatic = true;
  double value = kDefaultConfidence;  // alpha when fixed, confidence when auto

  static AlphaSetting solve(double confidence = kDefaultConfidence) {
    return {true, confidence};
  }
  static AlphaSetting fixed(double alpha) { return {false, alpha}; }

  static AlphaSetting parse(std::string_view text) {
    if (text == "auto") return solve();
    double v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw Error(ErrorCode::InvalidParams,
                  "alpha must be 'auto' or a decimal, got '" + std::string(text) + "'");
    }
    return fixed(v);
  }
};

namespace detail {

/// base^exp if it is <= 2^64, where 2^64 itself is reported as 0.
inline std::optional<std::uint64_t> checked_power(std::uint64_t base,
                                                  std::size_t exp) {
  unsigned __int128 acc = 1;
  const unsigned __int128 limit = static_cast<unsigned __int128>(1) << 64;
  for (std::size_t i = 0; i < exp; ++i) {
    acc *= base;
    if (acc > limit) return std::nullopt;
  }
  return static_cast<std::uint64_t>(acc);  // 2^64 wraps to 0
}

}  // namespace detail

/// Validated (k, d, alpha, alphabet). Alpha is always resolved to a number.
class ModelParams {
 public:
  ModelParams() = default;

  static ModelParams make(Alphabet alphabet, std::size_t k, std::size_t d,
                          AlphaSetting alpha) {
    if (alphabet.size() < 2) {
      throw Error(ErrorCode::InvalidParams, "alphabet must have >= 2 symbols");
    }
    if (k < 1) throw Error(ErrorCode::InvalidParams, "context order k must be >= 1");
    if (d < 1) throw Error(ErrorCode::InvalidParams, "depth d must be >= 1");
    auto words = detail::checked_power(alphabet.size(), d);
    if (!words || *words == 0 || *words >= kMaxWordSpace) {
      throw Error(ErrorCode::InvalidParams,
                  "|A|^d must be below 2^31-1 (|A|=" +
                      std::to_string(alphabet.size()) + ", d=" + std::to_string(d) + ")");
    }
    if (!detail::checked_power(alphabet.size(), k)) {
      throw Error(ErrorCode::InvalidParams,
                  "contexts must pack into 64 bits: |A|^k exceeds 2^64 (|A|=" +
                      std::to_string(alphabet.size()) + ", k=" + std::to_string(k) + ")");
    }
    double a = alpha.automatic ? solve_alpha(alphabet.size(), d, alpha.value)
                               : alpha.value;
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw Error(ErrorCode::InvalidParams, "alpha must be a finite value > 0");
    }
    ModelParams p;
    p.alphabet_ = std::move(alphabet);
    p.k_ = k;
    p.d_ = d;
    p.alpha_ = a;
    p.word_space_ = *words;
    return p;
  }

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t k() const noexcept { return k_; }
  std::size_t d() const noexcept { return d_; }
  double alpha() const noexcept { return alpha_; }
  /// |A|^d
  std::uint64_t word_space() const noexcept { return word_space_; }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  Alphabet alphabet_;
  std::size_t k_ = 0;
  std::size_t d_ = 0;
  double alpha_ = 0;
  std::uint64_t word_space_ = 0;
};

/// Big-endian base-|A| packing: numeric order equals index-lexicographic order.
inline std::uint64_t pack_symbols(std::span<const Symbol> symbols,
                                  std::size_t alphabet_size) noexcept {
  std::uint64_t key = 0;
  for (Symbol s : symbols) key = key * alphabet_size + s;
  return key;
}

inline std::vector<Symbol> unpack_symbols(std::uint64_t key, std::size_t len,
                                          std::size_t alphabet_size) {
  std::vector<Symbol> out(len);
  for (std::size_t i = len; i-- > 0;) {
    out[i] = static_cast<Symbol>(key % alphabet_size);
    key /= alphabet_size;
  }
  return out;
}

/// Packs seq[start mod n .. start+len-1 mod n].
inline std::uint64_t pack_circular(std::span<const Symbol> data, std::int64_t start,
                                   std::size_t len, std::size_t alphabet_size) noexcept {
  const auto n = static_cast<std::int64_t>(data.size());
  std::uint64_t key = 0;
  if (start >= 0 && start + static_cast<std::int64_t>(len) <= n) {
    for (std::size_t j = 0; j < len; ++j) {
      key = key * alphabet_size + data[static_cast<std::size_t>(start) + j];
    }
    return key;
  }
  std::int64_t pos = start % n;
  if (pos < 0) pos += n;
  for (std::size_t j = 0; j < len; ++j) {
    key = key * alphabet_size + data[static_cast<std::size_t>(pos)];
    if (++pos == n) pos = 0;
  }
  return key;
}

/// Number of learn() calls in this process. Lets callers assert that a
/// model is learned exactly once.
inline std::atomic<std::uint64_t>& learn_call_counter() {
  static std::atomic<std::uint64_t> counter{0};
  return counter;
}

struct ModelStats {
  std::size_t context_count = 0;
  std::size_t entry_count = 0;
  std::uint64_t trained_on = 0;
  std::size_t estimated_bytes = 0;
};

class ModelBuilder;

/// Frozen count table. Contexts are stored sorted by packed key with a hash
/// index over them; each context owns a sorted run of (word, count) entries.
/// All member functions are const and safe to call concurrently.
class XaModel {
 public:
  XaModel() = default;

  const ModelParams& params() const noexcept { return params_; }
  std::uint64_t trained_on() const noexcept { return trained_on_; }
  std::size_t context_count() const noexcept { return context_keys_.size(); }
  std::size_t entry_count() const noexcept { return words_.size(); }

  std::span<const std::uint64_t> context_keys() const noexcept { return context_keys_; }

  /// v(c), zero when the context was never seen.
  std::uint64_t total(std::uint64_t context_key) const noexcept {
    auto ci = index_.find(context_keys_, context_key);
    return ci ? totals_[*ci] : 0;
  }

  /// v(w|c), zero when absent.
  std::uint64_t count(std::uint64_t context_key, std::uint64_t word_key) const noexcept {
    auto ci = index_.find(context_keys_, context_key);
    return ci ? count_in(*ci, word_key) : 0;
  }

  /// (v(w|c) + a) / (v(c) + a |A|^d) on packed keys.
  double probability_packed(std::uint64_t context_key, std::uint64_t word_key) const noexcept {
    const double a = params_.alpha();
    auto ci = index_.find(context_keys_, context_key);
    if (!ci) return 1.0 / word_space_;
    return (static_cast<double>(count_in(*ci, word_key)) + a) /
           (static_cast<double>(totals_[*ci]) + a * word_space_);
  }

  /// -log2 of probability_packed. Unseen contexts cost exactly log2 |A|^d.
  double cost_bits(std::uint64_t context_key, std::uint64_t word_key) const noexcept {
    const double a = params_.alpha();
    auto ci = index_.find(context_keys_, context_key);
    if (!ci) return uniform_bits_;
    return std::log2(static_cast<double>(totals_[*ci]) + a * word_space_) -
           std::log2(static_cast<double>(count_in(*ci, word_key)) + a);
  }

  double probability(std::span<const Symbol> context, std::span<const Symbol> word) const {
    check_lengths(context, word);
    return probability_packed(pack_symbols(context, params_.alphabet().size()),
                              pack_symbols(word, params_.alphabet().size()));
  }

  std::uint64_t count(std::span<const Symbol> context, std::span<const Symbol> word) const {
    check_lengths(context, word);
    return count(pack_symbols(context, params_.alphabet().size()),
                 pack_symbols(word, params_.alphabet().size()));
  }

  std::uint64_t total(std::span<const Symbol> context) const {
    if (context.size() != params_.k()) {
      throw Error(ErrorCode::LengthMismatch, "context length must equal k");
    }
    return total(pack_symbols(context, params_.alphabet().size()));
  }

  /// Visits (context key, word key, count) in ascending key order.
  template <typename Fn>
  void for_each_entry(Fn&& fn) const {
    for (std::size_t c = 0; c < context_keys_.size(); ++c) {
      for (std::size_t e = offsets_[c]; e < offsets_[c + 1]; ++e) {
        fn(context_keys_[c], static_cast<std::uint64_t>(words_[e]), counts_[e]);
      }
    }
  }

  ModelStats stats() const noexcept {
    ModelStats s;
    s.context_count = context_count();
    s.entry_count = entry_count();
    s.trained_on = trained_on_;
    s.estimated_bytes = context_keys_.capacity() * sizeof(std::uint64_t) +
                        totals_.capacity() * sizeof(std::uint64_t) +
                        offsets_.capacity() * sizeof(std::uint64_t) +
                        words_.capacity() * sizeof(std::uint32_t) +
                        counts_.capacity() * sizeof(std::uint64_t) + index_.bytes() +
                        sizeof(XaModel);
    return s;
  }

  friend bool operator==(const XaModel& a, const XaModel& b) {
    return a.params_ == b.params_ && a.trained_on_ == b.trained_on_ &&
           a.context_keys_ == b.context_keys_ && a.totals_ == b.totals_ &&
           a.offsets_ == b.offsets_ && a.words_ == b.words_ && a.counts_ == b.counts_;
  }

 private:
  friend class ModelBuilder;

  void check_lengths(std::span<const Symbol> context, std::span<const Symbol> word) const {
    if (context.size() != params_.k() || word.size() != params_.d()) {
      throw Error(ErrorCode::LengthMismatch,
                  "expected context length " + std::to_string(params_.k()) +
                      " and word length " + std::to_string(params_.d()) + ", got " +
                      std::to_string(context.size()) + " and " +
                      std::to_string(word.size()));
    }
  }

  std::uint64_t count_in(std::uint32_t ci, std::uint64_t word_key) const noexcept {
    const std::uint32_t* first = words_.data() + offsets_[ci];
    const std::uint32_t* last = words_.data() + offsets_[ci + 1];
    const auto w = static_cast<std::uint32_t>(word_key);
    if (last - first <= 8) {
      for (const std::uint32_t* p = first; p != last; ++p) {
        if (*p == w) return counts_[static_cast<std::size_t>(p - words_.data())];
      }
      return 0;
    }
    const std::uint32_t* p = std::lower_bound(first, last, w);
    if (p != last && *p == w) return counts_[static_cast<std::size_t>(p - words_.data())];
    return 0;
  }

  ModelParams params_;
  std::uint64_t trained_on_ = 0;
  double word_space_ = 0;
  double uniform_bits_ = 0;
  std::vector<std::uint64_t> context_keys_;
  std::vector<std::uint64_t> totals_;
  std::vector<std::uint64_t> offsets_;
  std::vector<std::uint32_t> words_;
  std::vector<std::uint64_t> counts_;
  detail::FlatIndex index_;
};

/// Single-writer accumulator. freeze() is the irreversible transition to an
/// immutable XaModel.
class ModelBuilder {
 public:
  explicit ModelBuilder(ModelParams params) : params_(std::move(params)) {}

  const ModelParams& params() const noexcept { return params_; }

  /// One (context, word) pair per position i of the circular sequence:
  /// context = x[i-k .. i-1], word = x[i .. i+d-1].
  void add_sequence(const SymbolSequence& seq) {
    if (seq.empty()) throw Error(ErrorCode::EmptyReference, "reference is empty");
    if (!(seq.alphabet() == params_.alphabet())) {
      throw Error(ErrorCode::AlphabetMismatch,
                  "reference alphabet '" + std::string(seq.alphabet().symbols()) +
                      "' differs from model alphabet '" +
                      std::string(params_.alphabet().symbols()) + "'");
    }
    const auto data = seq.data();
    const auto n = static_cast<std::int64_t>(data.size());
    const std::size_t a = params_.alphabet().size();
    const std::size_t k = params_.k();
    const std::size_t d = params_.d();
    // Weight of the leading symbol in each window, for rolling updates.
    std::uint64_t ctx_lead = 1;
    for (std::size_t i = 1; i < k; ++i) ctx_lead *= a;
    std::uint64_t word_lead = 1;
    for (std::size_t i = 1; i < d; ++i) word_lead *= a;

    std::uint64_t ctx = pack_circular(data, -static_cast<std::int64_t>(k), k, a);
    std::uint64_t word = pack_circular(data, 0, d, a);
    entries_.reserve(entries_.size() + data.size());
    auto at = [&](std::int64_t i) {
      i %= n;
      if (i < 0) i += n;
      return static_cast<std::uint64_t>(data[static_cast<std::size_t>(i)]);
    };
    for (std::int64_t i = 0; i < n; ++i) {
      entries_.push_back({ctx, static_cast<std::uint32_t>(word), 1});
      ctx = (ctx - at(i - static_cast<std::int64_t>(k)) * ctx_lead) * a + at(i);
      word = (word - at(i) * word_lead) * a + at(i + static_cast<std::int64_t>(d));
    }
    trained_on_ += static_cast<std::uint64_t>(n);
  }

  void add_count(std::uint64_t context_key, std::uint64_t word_key, std::uint64_t count) {
    entries_.push_back({context_key, static_cast<std::uint32_t>(word_key), count});
    trained_on_ += count;
  }

  std::uint64_t trained_on() const noexcept { return trained_on_; }

  XaModel freeze() && {
    std::sort(entries_.begin(), entries_.end(), [](const Entry& x, const Entry& y) {
      return x.context != y.context ? x.context < y.context : x.word < y.word;
    });
    XaModel m;
    m.params_ = params_;
    m.trained_on_ = trained_on_;
    m.word_space_ = static_cast<double>(params_.word_space());
    m.uniform_bits_ = std::log2(m.word_space_);
    m.offsets_.push_back(0);
    for (std::size_t i = 0; i < entries_.size();) {
      const std::uint64_t c = entries_[i].context;
      std::uint64_t total = 0;
      while (i < entries_.size() && entries_[i].context == c) {
        const std::uint32_t w = entries_[i].word;
        std::uint64_t cnt = 0;
        while (i < entries_.size() && entries_[i].context == c && entries_[i].word == w) {
          cnt += entries_[i].count;
          ++i;
        }
        m.words_.push_back(w);
        m.counts_.push_back(cnt);
        total += cnt;
      }
      m.context_keys_.push_back(c);
      m.totals_.push_back(total);
      m.offsets_.push_back(m.words_.size());
    }
    if (m.context_keys_.size() >= detail::FlatIndex::kEmpty) {
      throw Error(ErrorCode::InvalidParams, "too many distinct contexts for one model");
    }
    entries_.clear();
    entries_.shrink_to_fit();
    m.context_keys_.shrink_to_fit();
    m.totals_.shrink_to_fit();
    m.offsets_.shrink_to_fit();
    m.words_.shrink_to_fit();
    m.counts_.shrink_to_fit();
    m.index_ = detail::FlatIndex(m.context_keys_);
    return m;
  }

 private:
  struct Entry {
    std::uint64_t context;
    std::uint32_t word;
    std::uint64_t count;
  };

  ModelParams params_;
  std::vector<Entry> entries_;
  std::uint64_t trained_on_ = 0;
};

inline XaModel learn(const SymbolSequence& reference, const ModelParams& params) {
  if (reference.empty()) throw Error(ErrorCode::EmptyReference, "reference is empty");
  ModelBuilder builder(params);
  builder.add_sequence(reference);
  learn_call_counter().fetch_add(1, std::memory_order_relaxed);
  return std::move(builder).freeze();
}

inline ModelStats model_stats(const XaModel& model) { return model.stats(); }

// ---------------------------------------------------------------------------
// Model file: "xafcm 1 <symbols> <k> <d> <alpha> <trained_on>" then one
// "<context>\t<word>\t<count>" line per entry, sorted by context then word.

inline constexpr int kModelFormatVersion = 1;

namespace detail {

inline std::string format_decimal(double v) {
  char buf[128];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
  if (ec != std::errc()) return std::to_string(v);
  return std::string(buf, ptr);
}

inline std::string symbols_text(std::span<const Symbol> s, const Alphabet& a) {
  std::string out;
  out.reserve(s.size());
  for (Symbol x : s) out.push_back(a.symbol(x));
  return out;
}

}  // namespace detail

inline void save_model(const XaModel& model, std::ostream& out) {
  const ModelParams& p = model.params();
  const Alphabet& a = p.alphabet();
  out << "xafcm " << kModelFormatVersion << ' ' << a.symbols() << ' ' << p.k() << ' '
      << p.d() << ' ' << detail::format_decimal(p.alpha()) << ' ' << model.trained_on()
      << '\n';
  auto row = [&](std::uint64_t c, std::uint64_t w) {
    return detail::symbols_text(unpack_symbols(c, p.k(), a.size()), a) + '\t' +
           detail::symbols_text(unpack_symbols(w, p.d(), a.size()), a);
  };
  if (a.sorted()) {
    model.for_each_entry([&](std::uint64_t c, std::uint64_t w, std::uint64_t n) {
      out << row(c, w) << '\t' << n << '\n';
    });
  } else {
    std::vector<std::pair<std::string, std::uint64_t>> rows;
    rows.reserve(model.entry_count());
    model.for_each_entry([&](std::uint64_t c, std::uint64_t w, std::uint64_t n) {
      rows.emplace_back(row(c, w), n);
    });
    std::sort(rows.begin(), rows.end());
    for (const auto& [text, n] : rows) out << text << '\t' << n << '\n';
  }
  if (!out) throw Error(ErrorCode::IoError, "failed writing model");
}

inline XaModel load_model(std::istream& in) {
  auto fail = [](std::size_t line, const std::string& why) -> Error {
    return Error(ErrorCode::FormatError, "line " + std::to_string(line) + ": " + why, line);
  };
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (content.empty()) throw fail(1, "empty model file");
  if (content.back() != '\n') throw fail(0, "truncated model file (no final newline)");

  std::size_t line_no = 0;
  std::size_t pos = 0;
  auto next_line = [&]() -> std::optional<std::string_view> {
    if (pos >= content.size()) return std::nullopt;
    std::size_t eol = content.find('\n', pos);
    std::string_view line(content.data() + pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    return line;
  };
  auto parse_uint = [&](std::string_view tok, const char* what) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) {
      throw fail(line_no, std::string("bad ") + what + " '" + std::string(tok) + "'");
    }
    return v;
  };

  auto header = next_line();
  std::vector<std::string_view> tok;
  {
    std::string_view h = *header;
    std::size_t i = 0;
    while (i < h.size()) {
      std::size_t sp = h.find(' ', i);
      if (sp == std::string_view::npos) sp = h.size();
      tok.push_back(h.substr(i, sp - i));
      i = sp + 1;
    }
  }
  if (tok.empty() || tok[0] != "xafcm") throw fail(1, "missing 'xafcm' magic");
  if (tok.size() < 2) throw fail(1, "missing version");
  if (tok[1] != std::to_string(kModelFormatVersion)) {
    throw Error(ErrorCode::VersionMismatch,
                "unsupported model file version '" + std::string(tok[1]) + "'");
  }
  if (tok.size() != 7) throw fail(1, "header must have 7 fields");

  ModelParams params;
  double alpha = 0;
  {
    auto [ptr, ec] = std::from_chars(tok[5].data(), tok[5].data() + tok[5].size(), alpha);
    if (ec != std::errc() || ptr != tok[5].data() + tok[5].size()) {
      throw fail(1, "bad alpha '" + std::string(tok[5]) + "'");
    }
  }
  try {
    params = ModelParams::make(Alphabet::from_symbols(tok[2]),
                               static_cast<std::size_t>(parse_uint(tok[3], "k")),
                               static_cast<std::size_t>(parse_uint(tok[4], "d")),
                               AlphaSetting::fixed(alpha));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::FormatError) throw;
    throw fail(1, e.what());
  }
  const std::uint64_t trained_on = parse_uint(tok[6], "trained_on");

  const Alphabet& a = params.alphabet();
  auto pack_field = [&](std::string_view field, std::size_t len, const char* what) {
    if (field.size() != len) {
      throw fail(line_no, std::string(what) + " must have length " + std::to_string(len));
    }
    std::uint64_t key = 0;
    for (char c : field) {
      auto idx = a.index_of(c);
      if (!idx) throw fail(line_no, std::string("symbol '") + c + "' not in alphabet");
      key = key * a.size() + *idx;
    }
    return key;
  };

  ModelBuilder builder(params);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> seen;
  while (auto line = next_line()) {
    std::size_t t1 = line->find('\t');
    std::size_t t2 = t1 == std::string_view::npos ? t1 : line->find('\t', t1 + 1);
    if (t2 == std::string_view::npos || line->find('\t', t2 + 1) != std::string_view::npos) {
      throw fail(line_no, "expected '<context>\\t<word>\\t<count>'");
    }
    const auto c = pack_field(line->substr(0, t1), params.k(), "context");
    const auto w = pack_field(line->substr(t1 + 1, t2 - t1 - 1), params.d(), "word");
    const auto n = parse_uint(line->substr(t2 + 1), "count");
    if (n == 0) throw fail(line_no, "counts must be >= 1");
    seen.emplace_back(c, w);
    builder.add_count(c, w, n);
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    throw fail(line_no, "duplicate (context, word) entry");
  }
  if (builder.trained_on() != trained_on) {
    throw fail(line_no, "counts sum to " + std::to_string(builder.trained_on()) +
                            " but header records " + std::to_string(trained_on));
  }
  return std::move(builder).freeze();
}

inline void save_model_file(const XaModel& model, const std::filesystem::path& path) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
    save_model(model, out);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot rename to " + path.string() + ": " + ec.message());
}

inline XaModel load_model_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return load_model(in);
}

}  // namespace xafcm

#endif  // XAFCM_MODEL_HPP
