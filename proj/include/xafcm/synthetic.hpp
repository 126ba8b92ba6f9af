#ifndef XAFCM_SYNTHETIC_HPP
#define XAFCM_SYNTHETIC_HPP

// Seeded generators for synthetic test data: uniform sequences, point
// mutations, and order-n Markov sources.

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "xafcm/core.hpp"
#include "xafcm/error.hpp"

namespace xafcm::synthetic {

inline SymbolSequence uniform(const Alphabet& alphabet, std::size_t length, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<unsigned> pick(0, static_cast<unsigned>(alphabet.size() - 1));
  std::vector<Symbol> data(length);
  for (auto& s : data) s = static_cast<Symbol>(pick(rng));
  return SymbolSequence(alphabet, std::move(data));
}

/// Each position is replaced, with probability `rate`, by a different symbol.
inline SymbolSequence mutate(const SymbolSequence& seq, double rate, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution hit(rate);
  const auto a = static_cast<unsigned>(seq.alphabet().size());
  std::uniform_int_distribution<unsigned> shift(1, a - 1);
  std::vector<Symbol> data(seq.data().begin(), seq.data().end());
  for (auto& s : data) {
    if (hit(rng)) s = static_cast<Symbol>((s + shift(rng)) % a);
  }
  return SymbolSequence(seq.alphabet(), std::move(data));
}

/// Order-n Markov source with transition rows drawn from a symmetric
/// Dirichlet(concentration); small concentrations give peaked rows.
class MarkovSource {
 public:
  MarkovSource(Alphabet alphabet, std::size_t order, double concentration, std::uint64_t seed)
      : alphabet_(std::move(alphabet)), order_(order) {
    if (order < 1) throw Error(ErrorCode::InvalidParams, "Markov order must be >= 1");
    std::mt19937_64 rng(seed);
    std::gamma_distribution<double> gamma(concentration, 1.0);
    std::size_t states = 1;
    for (std::size_t i = 0; i < order; ++i) states *= alphabet_.size();
    rows_.resize(states);
    for (auto& row : rows_) {
      std::vector<double> w(alphabet_.size());
      for (auto& x : w) x = gamma(rng) + 1e-12;
      row = std::discrete_distribution<unsigned>(w.begin(), w.end());
    }
  }

  SymbolSequence generate(std::size_t length, std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<unsigned> pick(0, static_cast<unsigned>(alphabet_.size() - 1));
    std::size_t states = rows_.size();
    std::size_t state = 0;
    for (std::size_t i = 0; i < order_; ++i) state = (state * alphabet_.size() + pick(rng)) % states;
    std::vector<Symbol> data(length);
    for (auto& s : data) {
      auto next = rows_[state](rng);
      s = static_cast<Symbol>(next);
      state = (state * alphabet_.size() + next) % states;
    }
    return SymbolSequence(alphabet_, std::move(data));
  }

 private:
  Alphabet alphabet_;
  std::size_t order_;
  mutable std::vector<std::discrete_distribution<unsigned>> rows_;
};

}  // namespace xafcm::synthetic

#endif  // XAFCM_SYNTHETIC_HPP
