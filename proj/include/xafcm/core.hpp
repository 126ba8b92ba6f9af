#ifndef XAFCM_CORE_HPP
#define XAFCM_CORE_HPP

// Alphabets, symbol sequences with circular indexing, and text/FASTA ingestion.

#include <array>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xafcm/error.hpp"

namespace xafcm {

using Symbol = std::uint8_t;

/// Ordered set of distinct single-character symbols. Index order is the
/// order the symbols were given in.
class Alphabet {
 public:
  static constexpr std::size_t kMaxSize = 256;

  Alphabet() = default;

  /// Throws InvalidAlphabet on duplicates, whitespace symbols or size < 2.
  static Alphabet from_symbols(std::string_view symbols) {
    if (symbols.size() < 2) {
      throw Error(ErrorCode::InvalidAlphabet,
                  "alphabet needs at least 2 symbols, got " +
                      std::to_string(symbols.size()));
    }
    Alphabet a;
    a.lookup_.fill(-1);
    for (std::size_t i = 0; i < symbols.size(); ++i) {
      auto byte = static_cast<unsigned char>(symbols[i]);
      if (std::isspace(byte) || !std::isprint(byte)) {
        throw Error(ErrorCode::InvalidAlphabet,
                    "alphabet symbols must be printable, non-whitespace");
      }
      if (a.lookup_[byte] >= 0) {
        throw Error(ErrorCode::InvalidAlphabet,
                    std::string("duplicate symbol '") + symbols[i] + "'");
      }
      a.lookup_[byte] = static_cast<std::int16_t>(i);
    }
    a.symbols_ = std::string(symbols);
    return a;
  }

  static Alphabet dna() { return from_symbols("ACGT"); }

  /// Lowercase letters a, b, c, ... as emitted by the SAX quantizer.
  static Alphabet letters(std::size_t size) {
    if (size < 2 || size > 26) {
      throw Error(ErrorCode::InvalidAlphabet,
                  "letter alphabets support 2..26 symbols");
    }
    std::string s;
    for (std::size_t i = 0; i < size; ++i) s.push_back(static_cast<char>('a' + i));
    return from_symbols(s);
  }

  /// Accepts the presets "dna" and "sax<N>" or an inline symbol list.
  static Alphabet parse_spec(std::string_view spec) {
    if (spec == "dna") return dna();
    if (spec.size() > 3 && spec.substr(0, 3) == "sax") {
      std::size_t n = 0;
      for (char c : spec.substr(3)) {
        if (c < '0' || c > '9') return from_symbols(spec);
        n = n * 10 + static_cast<std::size_t>(c - '0');
      }
      return letters(n);
    }
    return from_symbols(spec);
  }

  std::size_t size() const noexcept { return symbols_.size(); }
  std::string_view symbols() const noexcept { return symbols_; }
  char symbol(Symbol index) const { return symbols_.at(index); }

  std::optional<Symbol> index_of(char c) const noexcept {
    auto v = lookup_[static_cast<unsigned char>(c)];
    if (v < 0) return std::nullopt;
    return static_cast<Symbol>(v);
  }

  bool sorted() const noexcept {
    for (std::size_t i = 1; i < symbols_.size(); ++i) {
      if (static_cast<unsigned char>(symbols_[i - 1]) >
          static_cast<unsigned char>(symbols_[i])) {
        return false;
      }
    }
    return true;
  }

  friend bool operator==(const Alphabet& a, const Alphabet& b) noexcept {
    return a.symbols_ == b.symbols_;
  }

 private:
  std::string symbols_;
  std::array<std::int16_t, 256> lookup_{};
};

/// Dense index sequence over an alphabet. Immutable once built.
class SymbolSequence {
 public:
  SymbolSequence() = default;

  /// Throws UnknownSymbol if an index is out of range for the alphabet.
  SymbolSequence(Alphabet alphabet, std::vector<Symbol> data)
      : alphabet_(std::move(alphabet)), data_(std::move(data)) {
    for (std::size_t i = 0; i < data_.size(); ++i) {
      if (data_[i] >= alphabet_.size()) {
        throw Error(ErrorCode::UnknownSymbol,
                    "symbol index " + std::to_string(data_[i]) +
                        " out of range at position " + std::to_string(i),
                    i);
      }
    }
  }

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }
  std::span<const Symbol> data() const noexcept { return data_; }
  Symbol operator[](std::size_t i) const { return data_[i]; }

  /// data[i mod n] for any integer i, negative included.
  Symbol circular(std::int64_t i) const {
    if (data_.empty()) {
      throw Error(ErrorCode::EmptyInput, "circular access on empty sequence");
    }
    auto n = static_cast<std::int64_t>(data_.size());
    auto r = i % n;
    if (r < 0) r += n;
    return data_[static_cast<std::size_t>(r)];
  }

  std::string to_string() const {
    std::string out;
    out.reserve(data_.size());
    for (Symbol s : data_) out.push_back(alphabet_.symbol(s));
    return out;
  }

  friend bool operator==(const SymbolSequence& a, const SymbolSequence& b) {
    return a.alphabet_ == b.alphabet_ && a.data_ == b.data_;
  }

 private:
  Alphabet alphabet_;
  std::vector<Symbol> data_;
};

enum class UnknownSymbolPolicy { Reject, Drop };

struct FastaParse {
  SymbolSequence sequence;
  std::size_t dropped = 0;
};

/// seq[start mod n], ..., seq[(start + len - 1) mod n].
inline std::vector<Symbol> circular_window(const SymbolSequence& seq,
                                           std::int64_t start,
                                           std::size_t len) {
  std::vector<Symbol> out;
  out.reserve(len);
  for (std::size_t j = 0; j < len; ++j) {
    out.push_back(seq.circular(start + static_cast<std::int64_t>(j)));
  }
  return out;
}

/// Rotate left by `shift` positions (negative shifts rotate right).
inline SymbolSequence rotate(const SymbolSequence& seq, std::int64_t shift) {
  if (seq.empty()) return seq;
  return SymbolSequence(
      seq.alphabet(),
      circular_window(seq, shift, seq.size()));
}

/// Raw symbol text. Whitespace anywhere is ignored; any other byte must be in
/// the alphabet.
inline SymbolSequence parse_raw(std::string_view text, const Alphabet& alphabet) {
  std::vector<Symbol> data;
  data.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    auto idx = alphabet.index_of(c);
    if (!idx) {
      throw Error(ErrorCode::UnknownSymbol,
                  std::string("byte '") + c + "' at position " +
                      std::to_string(i) + " is not in alphabet '" +
                      std::string(alphabet.symbols()) + "'",
                  i);
    }
    data.push_back(*idx);
  }
  if (data.empty()) {
    throw Error(ErrorCode::EmptyInput, "no symbols in input");
  }
  return SymbolSequence(alphabet, std::move(data));
}

/// FASTA (or headerless sequence text). Record bodies are concatenated and
/// uppercased before lookup. Positions in UnknownSymbol errors are offsets
/// into the concatenated body.
inline FastaParse parse_fasta(std::string_view text, const Alphabet& alphabet,
                              UnknownSymbolPolicy policy) {
  FastaParse result;
  std::vector<Symbol> data;
  data.reserve(text.size());
  std::size_t body_pos = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t eol = text.find('\n', i);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(i, eol - i);
    i = eol + 1;
    if (!line.empty() && (line.front() == '>' || line.front() == ';')) continue;
    for (char raw : line) {
      if (std::isspace(static_cast<unsigned char>(raw))) continue;
      char c = static_cast<char>(std::toupper(static_cast<unsigned char>(raw)));
      auto idx = alphabet.index_of(c);
      if (!idx) idx = alphabet.index_of(raw);
      if (!idx) {
        if (policy == UnknownSymbolPolicy::Reject) {
          throw Error(ErrorCode::UnknownSymbol,
                      std::string("byte '") + raw + "' at sequence position " +
                          std::to_string(body_pos) + " is not in alphabet '" +
                          std::string(alphabet.symbols()) + "'",
                      body_pos);
        }
        ++result.dropped;
      } else {
        data.push_back(*idx);
      }
      ++body_pos;
    }
  }
  if (data.empty()) {
    throw Error(ErrorCode::EmptyInput, "no sequence symbols remain");
  }
  result.sequence = SymbolSequence(alphabet, std::move(data));
  return result;
}

/// Concatenate sequences over a shared alphabet.
inline SymbolSequence concatenate(std::span<const SymbolSequence> parts) {
  if (parts.empty()) throw Error(ErrorCode::EmptyInput, "nothing to concatenate");
  std::vector<Symbol> data;
  for (const auto& p : parts) {
    if (!(p.alphabet() == parts.front().alphabet())) {
      throw Error(ErrorCode::AlphabetMismatch,
                  "cannot concatenate sequences over different alphabets");
    }
    data.insert(data.end(), p.data().begin(), p.data().end());
  }
  return SymbolSequence(parts.front().alphabet(), std::move(data));
}

}  // namespace xafcm

#endif  // XAFCM_CORE_HPP
