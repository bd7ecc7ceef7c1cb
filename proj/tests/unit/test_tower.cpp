#include <algorithm>
#include <vector>

#include "gtest/gtest.h"

#include "mhg/sampling.hpp"
#include "mhg/tower.hpp"

using namespace mhg;

namespace {

// Oracle: scan j upward testing divisibility by g_j built by multiplication,
// never by division.
std::uint64_t valuation_by_scan(const Integer& x, const Integer& m)
{
  std::uint64_t j = 0;
  Integer g = m;
  while (x % g == 0) {
    ++j;
    g *= m;
  }
  return j;
}

const RadiusProfile half = RadiusProfile::geometric(Rational(1, 2));

}  // namespace

TEST(Valuation, IdealPowerExamples)
{
  EXPECT_EQ(Valuation(2), valuation(12, ChainSpec::ideal_power(2)));
  EXPECT_EQ(Valuation(0), valuation(5, ChainSpec::ideal_power(3)));
  EXPECT_TRUE(valuation(0, ChainSpec::ideal_power(7)).is_infinite());
  EXPECT_TRUE(valuation(0, ChainSpec::explicit_moduli({1, 2, 6})).is_infinite());
}

TEST(Valuation, MatchesScanOracle)
{
  Rng rng(11);
  for (int m : {2, 3, 6, 10}) {
    auto chain = ChainSpec::ideal_power(m);
    for (int i = 0; i < 2000; ++i) {
      Integer x = random_between(rng, -1000000, 1000000);
      if (x == 0)
        continue;
      EXPECT_EQ(Valuation(valuation_by_scan(x, m)), valuation(x, chain)) << "x=" << x << " m=" << m;
    }
  }
}

TEST(Valuation, ExplicitChainWithRepeatsAndTail)
{
  // 1 | 2 | 2 | 12, then times 6 per step.
  auto chain = ChainSpec::explicit_moduli({1, 2, 2, 12});
  EXPECT_EQ(Integer(72), chain.generator(4));
  EXPECT_EQ(Valuation(0), valuation(3, chain));
  EXPECT_EQ(Valuation(2), valuation(4, chain));  // A_1 = A_2 = 2Z
  EXPECT_EQ(Valuation(3), valuation(24, chain));
  EXPECT_EQ(Valuation(4), valuation(144, chain));
}

TEST(Valuation, UltrametricLaws)
{
  Rng rng(12);
  auto chain = ChainSpec::ideal_power(3);
  for (int i = 0; i < 5000; ++i) {
    Integer x = random_between(rng, -50000, 50000), y = random_between(rng, -50000, 50000);
    EXPECT_GE(valuation(x + y, chain), std::min(valuation(x, chain), valuation(y, chain)));
    EXPECT_EQ(valuation(-x, chain), valuation(x, chain));
  }
}

TEST(ChainSpec, RejectsMalformed)
{
  EXPECT_THROW(ChainSpec::ideal_power(1), Error);
  EXPECT_THROW(ChainSpec::explicit_moduli({2, 4}), Error);
  EXPECT_THROW(ChainSpec::explicit_moduli({1, 2, 3}), Error);
  EXPECT_THROW(ChainSpec::explicit_moduli({1, 2, 2}), Error);
}

TEST(RadiusProfile, GeometricAndExplicit)
{
  EXPECT_EQ(Rational(1), half.radius(0));
  EXPECT_EQ(Rational(1, 8), half.radius(3));
  EXPECT_EQ(Rational(0), half.radius(Valuation::infinite()));

  auto p = RadiusProfile::explicit_values({Rational(1), Rational(1, 3), Rational(1, 9)});
  EXPECT_EQ(Rational(1, 27), p.radius(3));
  auto q = RadiusProfile::explicit_values({Rational(5)}, Rational(1, 10));
  EXPECT_EQ(Rational(1, 20), q.radius(2));

  EXPECT_THROW(RadiusProfile::geometric(1), Error);
  EXPECT_THROW(RadiusProfile::explicit_values({Rational(1), Rational(2)}), Error);
  EXPECT_THROW(RadiusProfile::explicit_values({Rational(1), Rational(1)}), Error);
  EXPECT_THROW(RadiusProfile::explicit_values({Rational(1)}), Error);
}

TEST(Distance, Examples)
{
  auto chain = ChainSpec::ideal_power(2);
  EXPECT_EQ((UltraDistance{Valuation(3), Rational(1, 8)}), distance(5, 13, chain, half));
  EXPECT_EQ((UltraDistance{Valuation::infinite(), Rational(0)}), distance(42, 42, chain, half));
  EXPECT_EQ((UltraDistance{Valuation(0), Rational(1)}), distance(0, 1, chain, half));
}

TEST(Distance, UltrametricProperties)
{
  Rng rng(13);
  for (int m : {2, 3, 10}) {
    auto chain = ChainSpec::ideal_power(m);
    for (int i = 0; i < 3000; ++i) {
      Integer x = random_between(rng, -9999, 9999), y = random_between(rng, -9999, 9999),
              z = random_between(rng, -9999, 9999);
      auto xz = distance(x, z, chain, half).radius;
      EXPECT_LE(xz, std::max(distance(x, y, chain, half).radius, distance(y, z, chain, half).radius));
      EXPECT_EQ(distance(x, y, chain, half), distance(y, x, chain, half));
      EXPECT_EQ(distance(x - z, y - z, chain, half), distance(x, y, chain, half));
    }
  }
}

TEST(ProductDisagreement, Examples)
{
  auto chain = ChainSpec::ideal_power(2);
  std::vector<Integer> a{1, 3, 5}, b{1, 3, 7};
  EXPECT_EQ((AgreementIndex{2, false}), product_disagreement(a, b, chain));
  EXPECT_EQ((AgreementIndex{3, true}), product_disagreement(a, a, chain));
  EXPECT_TRUE(product_disagreement(a, a, chain).as_valuation().is_infinite());

  std::vector<Integer> c{0, 2}, d{1, 3};
  EXPECT_EQ((AgreementIndex{0, false}), product_disagreement(c, d, chain));

  std::vector<Integer> shorter{1, 3};
  EXPECT_THROW(product_disagreement(a, shorter, chain), Error);
}

TEST(ProductDisagreement, UltrametricOnSamples)
{
  Rng rng(14);
  auto chain = ChainSpec::ideal_power(3);
  auto sample = [&] {
    // Coherent residues of a random integer, so agreement is prefix-closed.
    Integer v = random_below(rng, 729);
    std::vector<Integer> out;
    for (std::uint64_t j = 1; j <= 6; ++j)
      out.push_back(v % chain.generator(j));
    return out;
  };
  for (int i = 0; i < 3000; ++i) {
    auto x = sample(), y = sample(), z = sample();
    auto xz = product_disagreement(x, z, chain).as_valuation();
    auto xy = product_disagreement(x, y, chain).as_valuation();
    auto yz = product_disagreement(y, z, chain).as_valuation();
    EXPECT_GE(xz, std::min(xy, yz));
  }
}

TEST(ChainEquivalence, PowersOfTwoAndFour)
{
  auto report = check_chain_equivalence(ChainSpec::ideal_power(2), ChainSpec::ideal_power(4), 6);
  ASSERT_TRUE(report.equivalent);
  // Oracle: 4^l Z <= 2^j Z iff 2l >= j; 2^n Z <= 4^k Z iff n >= 2k.
  for (std::uint64_t j = 1; j <= 6; ++j) {
    EXPECT_EQ((j + 1) / 2, report.b_in_a[j - 1]);
    EXPECT_EQ(2 * j, report.a_in_b[j - 1]);
  }
}

TEST(ChainEquivalence, IdentityWitnesses)
{
  for (int m : {2, 3, 5, 12}) {
    auto report = check_chain_equivalence(ChainSpec::ideal_power(m), ChainSpec::ideal_power(m), 3);
    ASSERT_TRUE(report.equivalent);
    EXPECT_EQ((std::vector<std::uint64_t>{1, 2, 3}), report.b_in_a);
    EXPECT_EQ((std::vector<std::uint64_t>{1, 2, 3}), report.a_in_b);
  }
}

TEST(ChainEquivalence, TwoVersusSixFails)
{
  auto report = check_chain_equivalence(ChainSpec::ideal_power(2), ChainSpec::ideal_power(6), 8);
  EXPECT_FALSE(report.equivalent);
  EXPECT_EQ(8u, report.depth);
  ASSERT_TRUE(report.failure.has_value());
  EXPECT_EQ(EquivalenceDirection::AInB, report.failure->first);
  EXPECT_EQ(1u, report.failure->second);
  // 6^l Z <= 2^j Z holds with l = j.
  EXPECT_EQ(8u, report.b_in_a.size());
}

TEST(ChainEquivalence, NonStrictChainHasShallowerWitness)
{
  auto c = ChainSpec::explicit_moduli({1, 2, 2, 4});
  auto report = check_chain_equivalence(c, c, 3);
  ASSERT_TRUE(report.equivalent);
  EXPECT_EQ((std::vector<std::uint64_t>{1, 1, 3}), report.b_in_a);
}
