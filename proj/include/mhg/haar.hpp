#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "heisenberg.hpp"

namespace mhg {

/// Number of left cosets of family_l: m^{lN} * m^{e(l)}.
inline Integer coset_count(const HeisenbergContext& ctx, ChainFamily family, std::uint64_t l)
{
  return ipow(ctx.modulus(), l * ctx.rank() + central_depth(family, l));
}

namespace detail {

inline void require_level(const HeisenbergContext& ctx, ChainFamily family, std::uint64_t l)
{
  if (central_depth(family, l) > ctx.precision())
    throw Error(Errc::PrecisionExceeded, "family " + std::string(family_name(family)) + " level " + std::to_string(l) +
                                           " needs precision " + std::to_string(central_depth(family, l)) +
                                           ", have " + std::to_string(ctx.precision()));
}

}  // namespace detail

/// Canonical left-coset representatives of family_n, one per coset, in
/// lexicographic digit order.
struct CosetReps {
  ChainFamily family = ChainFamily::G;
  std::uint64_t level = 0;
  std::vector<HPoint> reps;
};

inline CosetReps enumerate_cosets(const HeisenbergContext& ctx, ChainFamily family, std::uint64_t n)
{
  detail::require_level(ctx, family, n);
  const Integer& m = ctx.modulus();
  DigitBox box(ctx, 1, ipow(m, n), 1, ipow(m, central_depth(family, n)));
  CosetReps out{family, n, {}};
  out.reps.reserve(box.size());
  for (std::uint64_t i = 0; i < box.size(); ++i)
    out.reps.push_back(box.at(i));
  return out;
}

/// Position of g's left coset of family_l in the canonical enumeration.
inline std::uint64_t coset_index(const HeisenbergContext& ctx, const HPoint& g, ChainFamily family, std::uint64_t l)
{
  if (l == 0)
    return 0;
  HPoint rep = ctx.canonical_rep(g, family, l);
  Integer ml = ipow(ctx.modulus(), l);
  Integer idx = 0;
  for (std::size_t i = 0; i < ctx.rank(); ++i)
    idx = idx * ml + rep.x[i].value();
  idx = idx * ipow(ctx.modulus(), central_depth(family, l)) + rep.s.value();
  return idx.convert_to<std::uint64_t>();
}

/// A function on G that factors through G / family_l, tabulated over the
/// canonical coset representatives.
class CylinderFunction {
public:
  CylinderFunction(const HeisenbergContext& ctx, ChainFamily family, std::uint64_t level, std::vector<Rational> table)
    : family_(family), level_(level), table_(std::move(table))
  {
    if (level_ < 1)
      throw Error(Errc::InvalidArgument, "cylinder functions need level >= 1");
    detail::require_level(ctx, family, level);
    Integer expected = coset_count(ctx, family, level);
    if (Integer(table_.size()) != expected)
      throw Error(Errc::LengthMismatch, "table has " + std::to_string(table_.size()) + " entries, G/" +
                                          std::string(family_name(family)) + "_" + std::to_string(level) + " has " +
                                          to_string(expected) + " cosets");
  }

  static CylinderFunction tabulate(const HeisenbergContext& ctx, ChainFamily family, std::uint64_t level,
                                   const std::function<Rational(const HPoint&)>& f)
  {
    CosetReps reps = enumerate_cosets(ctx, family, level);
    std::vector<Rational> table;
    table.reserve(reps.reps.size());
    for (const auto& r : reps.reps)
      table.push_back(f(r));
    return CylinderFunction(ctx, family, level, std::move(table));
  }

  static CylinderFunction constant(const HeisenbergContext& ctx, ChainFamily family, std::uint64_t level,
                                   const Rational& value)
  {
    detail::require_level(ctx, family, level);
    return CylinderFunction(ctx, family, level,
                            std::vector<Rational>(coset_count(ctx, family, level).convert_to<std::size_t>(), value));
  }

  /// Indicator of family_l itself (the identity coset).
  static CylinderFunction identity_indicator(const HeisenbergContext& ctx, ChainFamily family, std::uint64_t level)
  {
    CylinderFunction f = constant(ctx, family, level, 0);
    f.table_[0] = 1;
    return f;
  }

  ChainFamily family() const noexcept { return family_; }
  std::uint64_t level() const noexcept { return level_; }
  const std::vector<Rational>& table() const noexcept { return table_; }

  const Rational& operator()(const HeisenbergContext& ctx, const HPoint& g) const
  {
    return table_[coset_index(ctx, g, family_, level_)];
  }

  bool operator==(const CylinderFunction&) const = default;

private:
  ChainFamily family_;
  std::uint64_t level_;
  std::vector<Rational> table_;
};

/// Average of f over a representative system of G / family_n. The system is
/// checked to hit every level-n coset exactly once.
inline Rational integrate_over(const HeisenbergContext& ctx, const CylinderFunction& f, const CosetReps& reps)
{
  if (reps.family != f.family())
    throw Error(Errc::InvalidArgument, "representatives belong to a different chain family");
  if (reps.level < f.level())
    throw Error(Errc::InvalidArgument, "representative level " + std::to_string(reps.level) +
                                         " is below the function level " + std::to_string(f.level()));
  Integer count = coset_count(ctx, reps.family, reps.level);
  if (Integer(reps.reps.size()) != count)
    throw Error(Errc::LengthMismatch, "expected " + to_string(count) + " representatives");
  std::vector<bool> seen(reps.reps.size(), false);
  Rational sum = 0;
  for (const auto& a : reps.reps) {
    std::uint64_t idx = coset_index(ctx, a, reps.family, reps.level);
    if (seen[idx])
      throw Error(Errc::InvalidArgument, "two representatives share a coset");
    seen[idx] = true;
    sum += f(ctx, a);
  }
  return sum / Rational(count);
}

/// I(f) as the exact average over the canonical level-n representatives.
inline Rational integrate(const HeisenbergContext& ctx, const CylinderFunction& f, std::uint64_t n)
{
  if (n < f.level())
    throw Error(Errc::InvalidArgument, "integration level " + std::to_string(n) + " is below the function level " +
                                         std::to_string(f.level()));
  CosetReps reps = enumerate_cosets(ctx, f.family(), n);
  Rational sum = 0;
  for (const auto& a : reps.reps)
    sum += f(ctx, a);
  return sum / Rational(reps.reps.size());
}

inline Rational integrate(const HeisenbergContext& ctx, const CylinderFunction& f)
{
  return integrate(ctx, f, f.level());
}

enum class Side { Left, Right };

/// Left: g -> f(a <> g) at the same level. Right: g -> f(g <> a); for
/// family H the level is unchanged, for family G the result lives at level
/// 2l because G_{2l} <= H_{2l} = a^{-1} H_{2l} a <= a^{-1} G_l a.
inline CylinderFunction translate(const HeisenbergContext& ctx, const CylinderFunction& f, const HPoint& a, Side side)
{
  ctx.require(a);
  if (side == Side::Left)
    return CylinderFunction::tabulate(ctx, f.family(), f.level(),
                                      [&](const HPoint& g) { return f(ctx, ctx.mul(a, g)); });
  std::uint64_t level = f.family() == ChainFamily::H ? f.level() : 2 * f.level();
  return CylinderFunction::tabulate(ctx, f.family(), level, [&](const HPoint& g) { return f(ctx, ctx.mul(g, a)); });
}

/// The same function tabulated over the finer cosets of family_n.
inline CylinderFunction pushforward_table(const HeisenbergContext& ctx, const CylinderFunction& f, std::uint64_t n)
{
  if (n <= f.level())
    throw Error(Errc::InvalidArgument, "target level must exceed " + std::to_string(f.level()));
  return CylinderFunction::tabulate(ctx, f.family(), n, [&](const HPoint& g) { return f(ctx, g); });
}

}  // namespace mhg
