#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "xafcm/model.hpp"
#include "xafcm/nrc.hpp"

using namespace xafcm;

namespace {

const Alphabet kABC = Alphabet::from_symbols("ABC");

XaModel worked(std::size_t d) {
  return learn(parse_raw("AAABCC", kABC), ModelParams::make(kABC, 2, d, AlphaSetting::fixed(0.01)));
}

SymbolSequence to_seq(const oracle::Seq& s, const Alphabet& a) {
  return SymbolSequence(a, std::vector<Symbol>(s.begin(), s.end()));
}

XaModel empty_model(const ModelParams& p) { return ModelBuilder(p).freeze(); }

Alphabet alphabet_of_size(int n) { return Alphabet::from_symbols(std::string("ABCDEF").substr(0, n)); }

}  // namespace

TEST(CompressBits, FcmWorkedExample) {
  const auto r = compress_bits(parse_raw("AAABCC", kABC), worked(1));
  EXPECT_NEAR(r.total_bits, 2.1272, 5e-4);
  EXPECT_EQ(r.block_bits.size(), 6u);
  EXPECT_EQ(r.query_count, 6u);
}

TEST(CompressBits, DepthTwoWorkedExample) {
  const auto r = compress_bits(parse_raw("AAABCC", kABC), worked(2));
  ASSERT_EQ(r.block_bits.size(), 3u);
  EXPECT_NEAR(r.block_bits[0], 0.110, 5e-4);
  EXPECT_NEAR(r.block_bits[1], 1.049, 5e-4);
  EXPECT_NEAR(r.block_bits[2], 0.110, 5e-4);
  EXPECT_NEAR(r.total_bits, 1.269, 5e-4);
  EXPECT_EQ(r.query_count, 3u);
}

TEST(Nrc, WorkedExample) {
  const auto x = parse_raw("AAABCC", kABC);
  EXPECT_NEAR(nrc(x, worked(1)), 0.2237, 5e-4);
  EXPECT_NEAR(nrc(x, worked(2)), 0.1334, 5e-4);
}

TEST(Nrc, UninformativeModelGivesExactlyOne) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const int a = 2 + static_cast<int>(rng() % 5);
    const auto alphabet = alphabet_of_size(a);
    const auto p = ModelParams::make(alphabet, 1 + rng() % 4, 1 + rng() % 5, AlphaSetting::solve());
    const auto target = to_seq(oracle::random_seq(rng, 1 + rng() % 300, a), alphabet);
    const auto r = compress_bits(target, empty_model(p));
    EXPECT_NEAR(r.total_bits, static_cast<double>(target.size()) * std::log2(a),
                1e-9 * static_cast<double>(target.size()));
    EXPECT_NEAR(r.nrc(), 1.0, 1e-12);
  }
}

TEST(CompressBits, DepthOneEqualsBruteForceFcm) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const int a = std::vector<int>{2, 4, 6}[rng() % 3];
    const std::size_t k = 1 + rng() % 6;
    const auto alphabet = alphabet_of_size(a);
    const auto ref = oracle::random_seq(rng, 1 + rng() % 200, a);
    const auto tgt = oracle::random_seq(rng, 1 + rng() % 200, a);
    const double alpha = std::vector<double>{0.01, 0.5, 1.0, solve_alpha(a, 1)}[rng() % 4];
    const auto m = learn(to_seq(ref, alphabet),
                         ModelParams::make(alphabet, k, 1, AlphaSetting::fixed(alpha)));
    const double expected = oracle::fcm_bits(tgt, ref, a, k, alpha);
    ASSERT_NEAR(compress_bits(to_seq(tgt, alphabet), m).total_bits, expected, 1e-9);
  }
}

TEST(CompressBits, QueryCountIsCeilMOverD) {
  const auto alphabet = Alphabet::dna();
  std::mt19937_64 rng(4);
  const auto ref = to_seq(oracle::random_seq(rng, 300, 4), alphabet);
  for (std::size_t d = 1; d <= 9; ++d) {
    const auto m = learn(ref, ModelParams::make(alphabet, 4, d, AlphaSetting::solve()));
    for (std::size_t len = 1; len <= 40; ++len) {
      const auto t = to_seq(oracle::random_seq(rng, len, 4), alphabet);
      const auto r = compress_bits(t, m);
      ASSERT_EQ(r.query_count, (len + d - 1) / d);
      ASSERT_EQ(r.block_bits.size(), r.query_count);
    }
  }
}

TEST(CompressBits, TotalIsSumOfNonNegativeBlocks) {
  const auto alphabet = Alphabet::letters(6);
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const auto m = learn(to_seq(oracle::random_seq(rng, 500, 6), alphabet),
                         ModelParams::make(alphabet, 3, 1 + rng() % 6, AlphaSetting::solve()));
    const auto r = compress_bits(to_seq(oracle::random_seq(rng, 1 + rng() % 500, 6), alphabet), m);
    double sum = 0;
    for (double b : r.block_bits) {
      ASSERT_GE(b, 0.0);
      sum += b;
    }
    EXPECT_NEAR(r.total_bits, sum, 1e-9);
  }
}

TEST(CompressBits, RemainderBlockIsScaled) {
  // m = 7, d = 3: last block covers target[6], target[0], target[1] and is
  // charged one third of its cost.
  const auto a = Alphabet::dna();
  const auto m = learn(parse_raw("ACGTTGCAACGG", a), ModelParams::make(a, 2, 3, AlphaSetting::fixed(0.1)));
  const auto t = parse_raw("ACGTACG", a);
  const auto r = compress_bits(t, m);
  ASSERT_EQ(r.block_bits.size(), 3u);
  const auto ctx = circular_window(t, 4, 2);
  const auto word = circular_window(t, 6, 3);
  EXPECT_NEAR(r.block_bits[2], -std::log2(m.probability(ctx, word)) / 3.0, 1e-12);
}

TEST(CompressBits, BlockShiftSymmetry) {
  const auto alphabet = Alphabet::dna();
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t d = 1 + rng() % 5;
    const auto m = learn(to_seq(oracle::random_seq(rng, 400, 4), alphabet),
                         ModelParams::make(alphabet, 3, d, AlphaSetting::solve()));
    const auto x = to_seq(oracle::random_seq(rng, d * (1 + rng() % 40), 4), alphabet);
    const double base = compress_bits(x, m).total_bits;
    for (long long j : {-3LL, -1LL, 1LL, 2LL, 7LL}) {
      ASSERT_NEAR(compress_bits(rotate(x, j * static_cast<long long>(d)), m).total_bits, base,
                  1e-9);
    }
  }
}

TEST(Nrc, SelfNeverLosesToUniform) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const int a = std::vector<int>{2, 4, 6}[rng() % 3];
    const auto alphabet = alphabet_of_size(a);
    const auto p = ModelParams::make(alphabet, 1 + rng() % 6, 1 + rng() % 4, AlphaSetting::solve());
    const auto x = to_seq(oracle::random_seq(rng, 1 + rng() % 300, a), alphabet);
    const double self = nrc(x, learn(x, p));
    EXPECT_GE(self, 0.0);
    EXPECT_LE(self, nrc(x, empty_model(p)) + 1e-12);
  }
}

TEST(CompressBits, Errors) {
  const auto m = worked(1);
  try {
    compress_bits(SymbolSequence(kABC, {}), m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyTarget);
  }
  try {
    compress_bits(parse_raw("ACGT", Alphabet::dna()), m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AlphabetMismatch);
  }
}

TEST(Profile, WorkedExampleWindowOne) {
  const auto p = information_profile(parse_raw("AAABCC", kABC), worked(2), 1);
  ASSERT_EQ(p.size(), 3u);
  EXPECT_EQ(p[0].position, 0u);
  EXPECT_EQ(p[1].position, 2u);
  EXPECT_EQ(p[2].position, 4u);
  EXPECT_NEAR(p[0].bits_per_symbol, 0.055, 5e-4);
  EXPECT_NEAR(p[1].bits_per_symbol, 0.5245, 5e-4);
  EXPECT_NEAR(p[2].bits_per_symbol, 0.055, 5e-4);
}

TEST(Profile, WorkedExampleWindowThree) {
  const auto x = parse_raw("AAABCC", kABC);
  const auto p = information_profile(x, worked(2), 3);
  for (const auto& pt : p) EXPECT_NEAR(pt.bits_per_symbol, 0.2115, 5e-4);
}

TEST(Profile, FullWidthWindowIsMeanBitsPerSymbol) {
  const auto alphabet = Alphabet::dna();
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = 1 + rng() % 4;
    const auto m = learn(to_seq(oracle::random_seq(rng, 200, 4), alphabet),
                         ModelParams::make(alphabet, 3, d, AlphaSetting::solve()));
    const auto x = to_seq(oracle::random_seq(rng, d * (1 + rng() % 50), 4), alphabet);
    const auto total = compress_bits(x, m).total_bits;
    const std::size_t blocks = x.size() / d;
    for (const auto& pt : information_profile(x, m, blocks)) {
      ASSERT_NEAR(pt.bits_per_symbol, total / static_cast<double>(x.size()), 1e-9);
    }
  }
}

TEST(Profile, MatchesDirectMovingAverage) {
  const auto alphabet = Alphabet::dna();
  std::mt19937_64 rng(78);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t d = 1 + rng() % 4;
    const auto m = learn(to_seq(oracle::random_seq(rng, 300, 4), alphabet),
                         ModelParams::make(alphabet, 3, d, AlphaSetting::solve()));
    const auto x = to_seq(oracle::random_seq(rng, 20 + rng() % 200, 4), alphabet);
    const auto r = compress_bits(x, m);
    std::vector<double> per_symbol;
    for (std::size_t i = 0; i < r.block_bits.size(); ++i) {
      const std::size_t span = std::min(d, x.size() - i * d);
      per_symbol.push_back(r.block_bits[i] / static_cast<double>(span));
    }
    const std::size_t window = 1 + rng() % std::min<std::size_t>(per_symbol.size(), 15);
    const auto expected = oracle::circular_moving_average(per_symbol, window);
    const auto got = information_profile(x, m, window);
    ASSERT_EQ(got.size(), expected.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      ASSERT_EQ(got[i].position, i * d);
      ASSERT_NEAR(got[i].bits_per_symbol, expected[i], 1e-9);
    }
  }
}

TEST(Profile, ZeroWindowRejected) {
  EXPECT_THROW(information_profile(parse_raw("AAABCC", kABC), worked(2), 0), Error);
}
