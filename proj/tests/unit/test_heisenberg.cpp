#include <optional>
#include <vector>

#include "gtest/gtest.h"

#include "mhg/heisenberg.hpp"
#include "mhg/sampling.hpp"
#include "mhg/tower.hpp"

using namespace mhg;

namespace {

// Plain-integer model of the group law, reduced mod m^n at the end.
struct Naive {
  IntMatrix b;
  Integer mod;

  Integer form(const std::vector<Integer>& x, const std::vector<Integer>& y) const
  {
    Integer acc = 0;
    for (std::size_t p = 0; p < b.size(); ++p)
      for (std::size_t q = 0; q < b.size(); ++q)
        acc += b[p][q] * x[p] * y[q];
    return acc;
  }

  IntegralPoint reduce(IntegralPoint g) const
  {
    for (auto& c : g.x)
      c = floor_mod(c, mod);
    g.s = floor_mod(g.s, mod);
    return g;
  }

  IntegralPoint mul(const IntegralPoint& g, const IntegralPoint& h) const
  {
    IntegralPoint out{g.x, g.s + h.s + form(g.x, h.x)};
    for (std::size_t i = 0; i < out.x.size(); ++i)
      out.x[i] += h.x[i];
    return reduce(out);
  }
};

IntegralPoint lower(const HPoint& g)
{
  IntegralPoint out{{}, g.s.value()};
  for (const auto& c : g.x.coords())
    out.x.push_back(c.value());
  return out;
}

// Every point of the group at precision n (small cases only).
std::vector<HPoint> all_points(const HeisenbergContext& ctx)
{
  DigitBox box(ctx, 1, ipow(ctx.modulus(), ctx.precision()), 1, ipow(ctx.modulus(), ctx.precision()));
  std::vector<HPoint> out;
  for (std::uint64_t i = 0; i < box.size(); ++i)
    out.push_back(box.at(i));
  return out;
}

bool divides_all(const Integer& d, const std::vector<Integer>& xs)
{
  for (const auto& x : xs) {
    if (x % d != 0)
      return false;
  }
  return true;
}

const IntMatrix kForms[] = {{{1}}, {{0, 1}, {0, 0}}, {{0, 1}, {-1, 0}}};

}  // namespace

TEST(Heisenberg, NoncommutativityExample)
{
  HeisenbergContext ctx(3, BilinearForm{{0, 1}, {0, 0}}, 2);
  auto g = ctx.point({1, 0}, 0), h = ctx.point({0, 1}, 0);
  EXPECT_EQ(ctx.point({1, 1}, 1), ctx.mul(g, h));
  EXPECT_EQ(ctx.point({1, 1}, 0), ctx.mul(h, g));
  EXPECT_EQ(g, ctx.mul(g, ctx.identity()));
  EXPECT_EQ(g, ctx.mul(ctx.identity(), g));
}

TEST(Heisenberg, InverseExamples)
{
  HeisenbergContext ctx(10, BilinearForm{{1}}, 2);
  EXPECT_EQ(ctx.point({98}, 1), ctx.inv(ctx.point({2}, 3)));
  EXPECT_EQ(ctx.identity(), ctx.inv(ctx.identity()));

  HeisenbergContext alt(5, BilinearForm{{0, 1}, {-1, 0}}, 3);
  Rng rng(41);
  for (int i = 0; i < 200; ++i) {
    HPoint g = random_point(rng, alt);
    EXPECT_EQ((HPoint{-g.x, -g.s}), alt.inv(g));
  }
}

TEST(Heisenberg, ConjugateExamples)
{
  HeisenbergContext ctx(3, BilinearForm{{0, 1}, {0, 0}}, 2);
  auto g = ctx.point({1, 0}, 0), h = ctx.point({0, 1}, 0);
  EXPECT_EQ(ctx.point({0, 1}, 1), ctx.conjugate(g, h));
  EXPECT_EQ(h, ctx.conjugate(ctx.identity(), h));
  auto central = ctx.point({0, 0}, 7);
  EXPECT_EQ(central, ctx.conjugate(g, central));
}

TEST(Heisenberg, DilateExamples)
{
  HeisenbergContext ctx(10, BilinearForm{{0, 1}, {0, 0}}, 3);
  auto g = ctx.point({1, 2}, 1);
  EXPECT_EQ(ctx.point({3, 6}, 9), ctx.dilate(3, g));
  EXPECT_EQ(g, ctx.dilate(1, g));
  EXPECT_EQ(ctx.dilate(6, g), ctx.dilate(2, ctx.dilate(3, g)));
}

TEST(Heisenberg, MatchesNaiveModel)
{
  Rng rng(42);
  for (const auto& mat : kForms) {
    for (int m : {2, 3, 10}) {
      HeisenbergContext ctx(m, BilinearForm(mat), 6);
      Naive naive{mat, ipow(m, 6)};
      for (int i = 0; i < 1000; ++i) {
        HPoint g = random_point(rng, ctx), h = random_point(rng, ctx);
        ASSERT_EQ(naive.mul(lower(g), lower(h)), lower(ctx.mul(g, h)));
        ASSERT_EQ(lower(ctx.identity()), naive.mul(lower(g), lower(ctx.inv(g))));
      }
    }
  }
}

TEST(Heisenberg, GroupLawProperties)
{
  Rng rng(43);
  for (const auto& mat : kForms) {
    for (int m : {2, 3}) {
      HeisenbergContext ctx(m, BilinearForm(mat), 6);
      for (int i = 0; i < 1000; ++i) {
        HPoint g = random_point(rng, ctx), h = random_point(rng, ctx), k = random_point(rng, ctx);
        ASSERT_EQ(ctx.mul(ctx.mul(g, h), k), ctx.mul(g, ctx.mul(h, k)));
        ASSERT_EQ(ctx.identity(), ctx.mul(ctx.inv(g), g));
        ASSERT_EQ(ctx.mul(ctx.mul(g, h), ctx.inv(g)), ctx.conjugate(g, h));
        Integer r = random_between(rng, -100, 100);
        ASSERT_EQ(ctx.dilate(r, ctx.mul(g, h)), ctx.mul(ctx.dilate(r, g), ctx.dilate(r, h)));
      }
    }
  }
}

TEST(Heisenberg, ContextMismatch)
{
  HeisenbergContext a(2, BilinearForm{{1}}, 3), b(2, BilinearForm{{1}}, 4);
  try {
    a.mul(a.identity(), b.identity());
    FAIL() << "expected ContextMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(Errc::ContextMismatch, e.code());
  }
  EXPECT_THROW(a.point({1, 2}, 0), Error);
}

TEST(Membership, Examples)
{
  HeisenbergContext ctx(2, BilinearForm{{1}}, 5);
  EXPECT_EQ(Membership::Yes, ctx.member(ctx.point({4}, 16), ChainFamily::G, 2));
  EXPECT_EQ(Membership::No, ctx.member(ctx.point({4}, 8), ChainFamily::G, 2));
  EXPECT_EQ(Membership::Yes, ctx.member(ctx.point({4}, 8), ChainFamily::H, 2));
  for (std::uint64_t j = 0; j <= 2; ++j)
    EXPECT_EQ(Membership::Yes, ctx.member(ctx.identity(), ChainFamily::G, j));
  for (std::uint64_t j = 0; j <= 5; ++j)
    EXPECT_EQ(Membership::Yes, ctx.member(ctx.identity(), ChainFamily::H, j));
  EXPECT_EQ(Membership::Inconclusive, ctx.member(ctx.identity(), ChainFamily::G, 3));
  EXPECT_EQ(Membership::Inconclusive, ctx.member(ctx.identity(), ChainFamily::H, 6));
}

TEST(Membership, MatchesDivisibilityOracle)
{
  HeisenbergContext ctx(3, BilinearForm{{0, 1}, {0, 0}}, 4);
  Rng rng(44);
  for (int i = 0; i < 3000; ++i) {
    HPoint g = ctx.dilate(ipow(3, rng() % 3), random_point(rng, ctx));
    IntegralPoint p = lower(g);
    for (std::uint64_t j = 0; j <= 2; ++j) {
      bool h = divides_all(ipow(3, j), p.x) && p.s % ipow(3, j) == 0;
      bool gg = divides_all(ipow(3, j), p.x) && p.s % ipow(3, 2 * j) == 0;
      ASSERT_EQ(h ? Membership::Yes : Membership::No, ctx.member(g, ChainFamily::H, j));
      ASSERT_EQ(gg ? Membership::Yes : Membership::No, ctx.member(g, ChainFamily::G, j));
    }
  }
}

TEST(Membership, SandwichAndDilationChain)
{
  for (int m : {2, 3}) {
    const std::uint32_t n = 4;
    HeisenbergContext ctx(m, BilinearForm{{1}}, n);
    for (const HPoint& g : all_points(ctx)) {
      for (std::uint64_t j = 0; 2 * j <= n; ++j) {
        if (ctx.member(g, ChainFamily::H, 2 * j) == Membership::Yes) {
          ASSERT_EQ(Membership::Yes, ctx.member(g, ChainFamily::G, j));
        }
        if (ctx.member(g, ChainFamily::G, j) != Membership::Yes)
          continue;
        ASSERT_EQ(Membership::Yes, ctx.member(g, ChainFamily::H, j));
        for (std::uint64_t l = 0; 2 * (j + l) <= n; ++l)
          ASSERT_EQ(Membership::Yes, ctx.member(ctx.dilate(ipow(m, l), g), ChainFamily::G, j + l));
      }
    }
  }
}

TEST(GroupDistance, Examples)
{
  HeisenbergContext ctx(2, BilinearForm{{1}}, 5);
  auto d = ctx.distance(ctx.point({2}, 0), ctx.identity(), ChainFamily::H);
  EXPECT_EQ(ValuationResult::exact(1), d.valuation);
  EXPECT_EQ(Rational(1, 2), d.radius);

  auto g = ctx.point({3}, 9);
  auto self = ctx.distance(g, g, ChainFamily::H);
  EXPECT_EQ(ValuationResult::at_least(5), self.valuation);
  EXPECT_EQ(Rational(0), self.radius);
  EXPECT_EQ(ValuationResult::at_least(2), ctx.distance(g, g, ChainFamily::G).valuation);
}

TEST(GroupDistance, InvarianceAndRhoLaws)
{
  Rng rng(45);
  for (const auto& mat : kForms) {
    HeisenbergContext ctx(2, BilinearForm(mat), 6);
    for (int i = 0; i < 1000; ++i) {
      HPoint g = random_point(rng, ctx), h = random_point(rng, ctx), a = random_point(rng, ctx);
      for (ChainFamily fam : {ChainFamily::H, ChainFamily::G}) {
        ASSERT_EQ(ctx.distance(g, h, fam), ctx.distance(ctx.mul(a, g), ctx.mul(a, h), fam));
        auto e = ctx.identity();
        ASSERT_EQ(ctx.distance(g, e, fam).radius, ctx.distance(ctx.inv(g), e, fam).radius);
        ASSERT_LE(ctx.distance(ctx.mul(g, h), e, fam).radius,
                  std::max(ctx.distance(g, e, fam).radius, ctx.distance(h, e, fam).radius));
      }
      ASSERT_EQ(ctx.distance(g, h, ChainFamily::H),
                ctx.distance(ctx.mul(g, a), ctx.mul(h, a), ChainFamily::H));
    }
  }
}

TEST(GroupDistance, RightTranslationCanFailForG)
{
  // G is not normal, so the G-distance is not right invariant in general.
  HeisenbergContext ctx(2, BilinearForm{{0, 1}, {0, 0}}, 6);
  auto g = ctx.point({0, 2}, 0), h = ctx.identity(), a = ctx.point({1, 0}, 0);
  EXPECT_NE(ctx.distance(g, h, ChainFamily::G), ctx.distance(ctx.mul(g, a), ctx.mul(h, a), ChainFamily::G));
}

TEST(Project, HomomorphismExhaustive)
{
  HeisenbergContext ctx(2, BilinearForm{{1}}, 2);
  HeisenbergContext low = ctx.at_precision(1);
  std::vector<HPoint> level1;
  for (int x = 0; x < 2; ++x)
    for (int s = 0; s < 4; ++s)
      level1.push_back(ctx.point({x}, s));
  ASSERT_EQ(8u, level1.size());
  int pairs = 0;
  for (const auto& g : level1) {
    for (const auto& h : level1) {
      EXPECT_EQ(ctx.project(ctx.mul(g, h), 1), low.mul(ctx.project(g, 1), ctx.project(h, 1)));
      ++pairs;
    }
  }
  EXPECT_EQ(64, pairs);
  EXPECT_EQ(low.identity(), ctx.project(ctx.identity(), 1));
  for (const auto& g : all_points(ctx)) {
    bool trivial = ctx.project(g, 1) == low.identity();
    EXPECT_EQ(trivial, ctx.member(g, ChainFamily::H, 1) == Membership::Yes);
  }
  EXPECT_THROW(ctx.project(ctx.identity(), 3), Error);
}

TEST(Project, IsometricEmbedding)
{
  Rng rng(46);
  HeisenbergContext ctx(2, BilinearForm{{1}}, 5);
  for (int i = 0; i < 1000; ++i) {
    HPoint g = random_point(rng, ctx), h = random_point(rng, ctx);
    if (i % 3 == 0)
      h = ctx.mul(g, ctx.dilate(ipow(2, rng() % 5), random_point(rng, ctx)));
    std::vector<HPoint> qg, qh;
    for (std::uint32_t j = 1; j <= 5; ++j) {
      qg.push_back(ctx.project(g, j));
      qh.push_back(ctx.project(h, j));
    }
    AgreementIndex agree = agreement_index(qg, qh);
    ValuationResult v = ctx.distance(g, h, ChainFamily::H).valuation;
    ASSERT_EQ(agree.through_end, !v.is_exact());
    ASSERT_EQ(agree.index, v.bound());
  }
}

TEST(CanonicalRep, IdentifiesLeftCosets)
{
  // Brute-force coset partition at m=2, N=1, n=4 for both families.
  HeisenbergContext ctx(2, BilinearForm{{1}}, 4);
  auto pts = all_points(ctx);
  for (ChainFamily fam : {ChainFamily::H, ChainFamily::G}) {
    for (std::uint64_t l = 0; central_depth(fam, l) <= 4; ++l) {
      for (std::size_t i = 0; i < pts.size(); i += 7) {
        for (std::size_t k = 0; k < pts.size(); k += 3) {
          bool same = ctx.member(ctx.mul(ctx.inv(pts[i]), pts[k]), fam, l) == Membership::Yes;
          ASSERT_EQ(same, ctx.canonical_rep(pts[i], fam, l) == ctx.canonical_rep(pts[k], fam, l));
        }
      }
    }
  }
}

TEST(Normality, FamilyHIsNormal)
{
  HeisenbergContext ctx(2, BilinearForm{{1}}, 4);
  for (std::uint64_t j = 0; j <= 2; ++j) {
    auto report = check_normality(ctx, ChainFamily::H, j, 4);
    EXPECT_EQ(NormalityVerdict::Normal, report.verdict);
    EXPECT_FALSE(report.witness.has_value());
    EXPECT_NE(std::string::npos, report.certificate_scope.find("G/H_4"));
  }
}

TEST(Normality, FamilyGWitness)
{
  HeisenbergContext ctx(2, BilinearForm{{0, 1}, {0, 0}}, 4);
  auto report = check_normality(ctx, ChainFamily::G, 1, 4);
  ASSERT_EQ(NormalityVerdict::NotNormal, report.verdict);
  ASSERT_TRUE(report.witness.has_value());
  const auto& w = *report.witness;
  EXPECT_EQ(Membership::Yes, ctx.member(w.element, ChainFamily::G, 1));
  EXPECT_EQ(Membership::No, ctx.member(w.conjugate, ChainFamily::G, 1));
  EXPECT_EQ(ctx.mul(ctx.mul(w.conjugator, w.element), ctx.inv(w.conjugator)), w.conjugate);
  // First escape in lexicographic order: x = (0, 1) precedes x = (1, 0).
  EXPECT_EQ(ctx.point({0, 1}, 0), w.conjugator);
  EXPECT_EQ(ctx.point({2, 0}, 0), w.element);
  EXPECT_EQ(ctx.point({2, 0}, 14), w.conjugate);

  // The pair ((1,0),0), ((0,2),0) is another witness.
  auto c = ctx.conjugate(ctx.point({1, 0}, 0), ctx.point({0, 2}, 0));
  EXPECT_EQ(ctx.point({0, 2}, 2), c);
  EXPECT_EQ(Membership::No, ctx.member(c, ChainFamily::G, 1));

  EXPECT_EQ(NormalityVerdict::Normal, check_normality(ctx, ChainFamily::G, 0, 4).verdict);
}

// Oracle: every conjugator and element of the quotient, central coordinates
// included, scanned in lexicographic order.
TEST(Normality, MatchesFullEnumeration)
{
  const BilinearForm forms[] = {BilinearForm{{0, 1}, {0, 0}}, BilinearForm{{1, 1}, {0, 2}}};
  for (const auto& b : forms) {
    HeisenbergContext ctx(2, b, 3);
    for (ChainFamily fam : {ChainFamily::H, ChainFamily::G}) {
      for (std::uint64_t j = 0; central_depth(fam, j) <= 3; ++j) {
        DigitBox as = DigitBox::subgroup_mod(ctx, fam, 0, 3), hs = DigitBox::subgroup_mod(ctx, fam, j, 3);
        std::optional<std::pair<HPoint, HPoint>> first;
        for (std::uint64_t ai = 0; ai < as.size() && !first; ++ai)
          for (std::uint64_t hi = 0; hi < hs.size() && !first; ++hi)
            if (ctx.member(ctx.conjugate(as.at(ai), hs.at(hi)), fam, j) != Membership::Yes)
              first.emplace(as.at(ai), hs.at(hi));
        auto report = check_normality(ctx, fam, j, 3);
        ASSERT_EQ(first.has_value(), report.verdict == NormalityVerdict::NotNormal);
        if (first) {
          EXPECT_EQ(first->first, report.witness->conjugator);
          EXPECT_EQ(first->second, report.witness->element);
        }
      }
    }
  }
}

TEST(Normality, ParallelMatchesSerial)
{
  HeisenbergContext ctx(2, BilinearForm{{0, 1}, {0, 0}}, 4);
  auto serial = check_normality(ctx, ChainFamily::G, 1, 4, 1);
  for (unsigned jobs : {2u, 3u, 8u}) {
    auto par = check_normality(ctx, ChainFamily::G, 1, 4, jobs);
    ASSERT_TRUE(par.witness.has_value());
    EXPECT_EQ(serial.witness->conjugator, par.witness->conjugator);
    EXPECT_EQ(serial.witness->element, par.witness->element);
  }
}

TEST(Normality, Errors)
{
  HeisenbergContext ctx(2, BilinearForm{{1}}, 4);
  try {
    check_normality(ctx, ChainFamily::G, 3, 4);
    FAIL() << "expected LevelTooShallow";
  } catch (const Error& e) {
    EXPECT_EQ(Errc::LevelTooShallow, e.code());
  }
  try {
    check_normality(ctx, ChainFamily::H, 1, 5);
    FAIL() << "expected PrecisionExceeded";
  } catch (const Error& e) {
    EXPECT_EQ(Errc::PrecisionExceeded, e.code());
  }
}

TEST(WeakNormality, Examples)
{
  HeisenbergContext ctx(2, BilinearForm{{0, 1}, {0, 0}}, 4);
  auto id = check_weak_normality(ctx, ChainFamily::G, ctx.identity(), 1, 2, 4);
  ASSERT_TRUE(id.found_level.has_value());
  EXPECT_EQ(1u, *id.found_level);

  auto a = ctx.point({1, 0}, 0);
  auto r = check_weak_normality(ctx, ChainFamily::G, a, 1, 2, 4);
  ASSERT_TRUE(r.found_level.has_value());
  EXPECT_EQ(2u, *r.found_level);
  // Depth 1 is too shallow for this conjugator.
  EXPECT_FALSE(check_weak_normality(ctx, ChainFamily::G, a, 1, 1, 4).found_level.has_value());

  for (std::uint64_t j = 0; j <= 2; ++j) {
    auto h = check_weak_normality(ctx, ChainFamily::H, a, j, j, 4);
    ASSERT_TRUE(h.found_level.has_value());
    EXPECT_EQ(j, *h.found_level);
  }
}

TEST(IntegralGroup, MatchesCompletedLaw)
{
  Rng rng(47);
  BilinearForm b{{0, 1}, {-1, 2}};
  HeisenbergContext ctx(3, b, 5);
  for (int i = 0; i < 500; ++i) {
    IntegralPoint g{{random_between(rng, -500, 500), random_between(rng, -500, 500)}, random_between(rng, -500, 500)};
    IntegralPoint h{{random_between(rng, -500, 500), random_between(rng, -500, 500)}, random_between(rng, -500, 500)};
    IntegralPoint gh = integral_mul(b, g, h);
    ASSERT_EQ(ctx.point(gh.x, gh.s), ctx.mul(ctx.point(g.x, g.s), ctx.point(h.x, h.s)));
    IntegralPoint d = integral_dilate(4, g);
    ASSERT_EQ(ctx.point(d.x, d.s), ctx.dilate(4, ctx.point(g.x, g.s)));
  }
}
