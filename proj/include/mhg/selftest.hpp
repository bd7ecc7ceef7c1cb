#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "core.hpp"
#include "fractions.hpp"
#include "haar.hpp"
#include "heisenberg.hpp"
#include "hmodule.hpp"
#include "madic.hpp"
#include "sampling.hpp"
#include "tower.hpp"

namespace mhg {

struct SelftestResult {
  std::string name;
  bool passed = true;
  std::string detail;
};

/// Randomized property sweep over every module, sized to run in a few
/// seconds. Deterministic for a given seed.
inline std::vector<SelftestResult> run_selftest(std::uint64_t seed, std::size_t samples = 500)
{
  using Check = std::function<std::optional<std::string>(Rng&)>;
  std::vector<std::pair<std::string, Check>> checks;

  checks.emplace_back("tower.ultrametric", [samples](Rng& rng) -> std::optional<std::string> {
    auto profile = RadiusProfile::geometric(Rational(1, 2));
    for (int m : {2, 3, 10}) {
      auto chain = ChainSpec::ideal_power(m);
      for (std::size_t i = 0; i < samples; ++i) {
        Integer x = random_between(rng, -100000, 100000);
        Integer y = random_between(rng, -100000, 100000);
        Integer z = random_between(rng, -100000, 100000);
        auto xz = distance(x, z, chain, profile).radius;
        auto xy = distance(x, y, chain, profile).radius;
        auto yz = distance(y, z, chain, profile).radius;
        if (xz > std::max(xy, yz))
          return "triangle max-inequality fails at m=" + std::to_string(m);
        if (distance(x, y, chain, profile) != distance(y, x, chain, profile))
          return "asymmetric distance";
        if (distance(x - z, y - z, chain, profile) != distance(x, y, chain, profile))
          return "distance not translation invariant";
      }
    }
    return std::nullopt;
  });

  checks.emplace_back("madic.ring", [samples](Rng& rng) -> std::optional<std::string> {
    for (auto [m, n] : {std::pair<int, std::uint32_t>{2, 6}, {3, 4}, {10, 3}}) {
      for (std::size_t i = 0; i < samples; ++i) {
        auto a = random_madic(rng, m, n), b = random_madic(rng, m, n), c = random_madic(rng, m, n);
        if (!((a + b) + c == a + (b + c)) || !((a * b) * c == a * (b * c)) || !(a * (b + c) == a * b + a * c) ||
            !(a * b == b * a) || !(a + b == b + a))
          return "ring axiom fails at m=" + std::to_string(m);
        std::uint32_t j = 1 + static_cast<std::uint32_t>(rng() % n);
        if (!((a * b).truncate(j) == a.truncate(j) * b.truncate(j)) ||
            !((a + b).truncate(j) == a.truncate(j) + b.truncate(j)))
          return "truncation is not a ring homomorphism";
      }
    }
    return std::nullopt;
  });

  checks.emplace_back("madic.geometric_inverse", [samples](Rng& rng) -> std::optional<std::string> {
    for (std::size_t i = 0; i < samples; ++i) {
      Integer m = random_between(rng, 2, 12);
      std::uint32_t n = 1 + static_cast<std::uint32_t>(rng() % 6);
      MadicInt x = random_madic(rng, m, n).scale(m);
      MadicInt one = MadicInt::one(m, n);
      if (!((one - x) * geom_inverse_one_minus(x) == one))
        return "(1 - x) * s != 1 for x = " + x.str();
    }
    return std::nullopt;
  });

  checks.emplace_back("heisenberg.group_law", [samples](Rng& rng) -> std::optional<std::string> {
    for (const IntMatrix& b : {IntMatrix{{1}}, IntMatrix{{0, 1}, {0, 0}}, IntMatrix{{0, 1}, {-1, 0}}}) {
      for (int m : {2, 3}) {
        HeisenbergContext ctx(m, BilinearForm(b), 6);
        for (std::size_t i = 0; i < samples; ++i) {
          HPoint g = random_point(rng, ctx), h = random_point(rng, ctx), k = random_point(rng, ctx);
          if (!(ctx.mul(ctx.mul(g, h), k) == ctx.mul(g, ctx.mul(h, k))))
            return std::string("associativity fails");
          if (!(ctx.mul(g, ctx.inv(g)) == ctx.identity()) || !(ctx.mul(ctx.inv(g), g) == ctx.identity()))
            return std::string("inverse fails");
          if (!(ctx.conjugate(g, h) == ctx.mul(ctx.mul(g, h), ctx.inv(g))))
            return std::string("conjugation closed form fails");
          Integer r = random_between(rng, -50, 50);
          if (!(ctx.dilate(r, ctx.mul(g, h)) == ctx.mul(ctx.dilate(r, g), ctx.dilate(r, h))))
            return std::string("dilation is not a homomorphism");
        }
      }
    }
    return std::nullopt;
  });

  checks.emplace_back("heisenberg.sandwich", [samples](Rng& rng) -> std::optional<std::string> {
    HeisenbergContext ctx(2, BilinearForm({{0, 1}, {0, 0}}), 6);
    for (std::size_t i = 0; i < samples; ++i) {
      // Dilating by 2^k pushes samples into the deeper levels.
      HPoint g = ctx.dilate(ipow(2, rng() % 4), random_point(rng, ctx));
      for (std::uint64_t j = 0; 2 * j <= ctx.precision(); ++j) {
        if (ctx.member(g, ChainFamily::H, 2 * j) == Membership::Yes && ctx.member(g, ChainFamily::G, j) != Membership::Yes)
          return "H_2j not inside G_j at j=" + std::to_string(j);
        if (ctx.member(g, ChainFamily::G, j) == Membership::Yes && ctx.member(g, ChainFamily::H, j) != Membership::Yes)
          return "G_j not inside H_j at j=" + std::to_string(j);
      }
    }
    return std::nullopt;
  });

  checks.emplace_back("heisenberg.normality", [](Rng&) -> std::optional<std::string> {
    HeisenbergContext line(2, BilinearForm({{1}}), 4);
    for (std::uint64_t j = 0; j <= 2; ++j) {
      if (check_normality(line, ChainFamily::H, j, 4).verdict != NormalityVerdict::Normal)
        return "H_" + std::to_string(j) + " reported non-normal";
    }
    HeisenbergContext plane(2, BilinearForm({{0, 1}, {0, 0}}), 4);
    if (check_normality(plane, ChainFamily::G, 1, 4).verdict != NormalityVerdict::NotNormal)
      return std::string("G_1 reported normal");
    return std::nullopt;
  });

  checks.emplace_back("heisenberg.isometry", [samples](Rng& rng) -> std::optional<std::string> {
    HeisenbergContext ctx(2, BilinearForm({{1}}), 5);
    for (std::size_t i = 0; i < samples; ++i) {
      HPoint g = random_point(rng, ctx), h = random_point(rng, ctx);
      std::vector<HPoint> qg, qh;
      for (std::uint32_t j = 1; j <= ctx.precision(); ++j) {
        qg.push_back(ctx.project(g, j));
        qh.push_back(ctx.project(h, j));
      }
      AgreementIndex agree = agreement_index(qg, qh);
      ValuationResult v = ctx.distance(g, h, ChainFamily::H).valuation;
      if (agree.through_end != !v.is_exact() || agree.index != v.bound())
        return std::string("distance valuation differs from first disagreement");
    }
    return std::nullopt;
  });

  checks.emplace_back("haar.invariance", [](Rng& rng) -> std::optional<std::string> {
    HeisenbergContext ctx(2, BilinearForm({{1}}), 4);
    for (ChainFamily fam : {ChainFamily::G, ChainFamily::H}) {
      CylinderFunction f = CylinderFunction::tabulate(ctx, fam, 1, [&rng](const HPoint&) {
        return Rational(Integer(rng() % 7), Integer(1 + rng() % 5));
      });
      Rational total = integrate(ctx, f);
      if (integrate(ctx, f, 2) != total)
        return std::string("integral depends on the level");
      if (integrate(ctx, CylinderFunction::constant(ctx, fam, 1, 1)) != 1)
        return std::string("total mass is not 1");
      for (const auto& a : enumerate_cosets(ctx, fam, 1).reps) {
        if (integrate(ctx, translate(ctx, f, a, Side::Left)) != total)
          return std::string("left translation changes the integral");
        if (integrate(ctx, translate(ctx, f, a, Side::Right)) != total)
          return std::string("right translation changes the integral");
      }
    }
    return std::nullopt;
  });

  checks.emplace_back("fractions.rational_oracle", [samples](Rng& rng) -> std::optional<std::string> {
    Localization loc(BaseRing::integers(), MultSet::generated({2}));
    for (std::size_t i = 0; i < samples; ++i) {
      Integer a = random_between(rng, -1000, 1000), b = random_between(rng, -1000, 1000);
      Integer s = ipow(2, rng() % 8), t = ipow(2, rng() % 8);
      Fraction p = loc.make(a, s), q = loc.make(b, t);
      Rational rp(a, s), rq(b, t);
      Fraction sum = loc.add(p, q), prod = loc.mul(p, q);
      if (Rational(sum.num, sum.den) != rp + rq || Rational(prod.num, prod.den) != rp * rq)
        return std::string("fraction arithmetic disagrees with rationals");
      if (loc.equal(p, q) != (rp == rq))
        return std::string("fraction equality disagrees with rationals");
    }
    return std::nullopt;
  });

  checks.emplace_back("fractions.heisenberg_hom", [samples](Rng& rng) -> std::optional<std::string> {
    BilinearForm b({{0, 1}, {-1, 2}});
    FractionHeisenberg group(b, Localization(BaseRing::integers(), MultSet::generated({3})));
    for (std::size_t i = 0; i < samples; ++i) {
      IntegralPoint g{{random_between(rng, -99, 99), random_between(rng, -99, 99)}, random_between(rng, -99, 99)};
      IntegralPoint h{{random_between(rng, -99, 99), random_between(rng, -99, 99)}, random_between(rng, -99, 99)};
      if (!group.equal(group.hom(integral_mul(b, g, h)), group.mul(group.hom(g), group.hom(h))))
        return std::string("canonical map is not a homomorphism");
      Integer r = random_between(rng, -9, 9);
      if (!group.equal(group.hom(integral_dilate(r, g)),
                       group.dilate(group.localization().canonical(r), group.hom(g))))
        return std::string("canonical map does not intertwine dilations");
    }
    return std::nullopt;
  });

  std::vector<SelftestResult> results;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    Rng rng(seed + i);
    SelftestResult r{checks[i].first, true, {}};
    try {
      if (auto failure = checks[i].second(rng)) {
        r.passed = false;
        r.detail = *failure;
      }
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = e.what();
    }
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace mhg
