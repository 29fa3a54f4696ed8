// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 PABSA Contributors

#include <gtest/gtest.h>

#include "pabsa/random.hpp"

namespace pabsa {
namespace {

// Reference values from tests/oracles/oracles.py.
TEST(SplitMix64, MatchesReferenceStream) {
  SplitMix64 a(42);
  EXPECT_EQ(a.next(), 13679457532755275413ULL);
  EXPECT_EQ(a.next(), 2949826092126892291ULL);
  EXPECT_EQ(a.next(), 5139283748462763858ULL);
  SplitMix64 b(1234567);
  EXPECT_EQ(b.next(), 6457827717110365317ULL);
  EXPECT_EQ(b.next(), 3203168211198807973ULL);
  EXPECT_EQ(b.next(), 9817491932198370423ULL);
}

TEST(SplitMix64, FisherYatesMatchesReference) {
  std::vector<int> v{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  SplitMix64 rng(42);
  fisher_yates(v, rng);
  EXPECT_EQ(v, (std::vector<int>{0, 9, 5, 8, 6, 4, 7, 2, 1, 3}));
}

TEST(SplitMix64, UniformInUnitInterval) {
  SplitMix64 rng(7);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(SplitMix64, DerivedSeedsDependOnInstanceAndCopy) {
  EXPECT_EQ(derive_seed(42, 3, 0), derive_seed(42, 3, 0));
  EXPECT_NE(derive_seed(42, 3, 0), derive_seed(42, 4, 0));
  EXPECT_NE(derive_seed(42, 3, 0), derive_seed(42, 3, 1));
  EXPECT_NE(derive_seed(42, 3, 0), derive_seed(43, 3, 0));
  EXPECT_NE(derive_seed(42, 0, 0), derive_seed(42, 1, 1));
}

}  // namespace
}  // namespace pabsa
