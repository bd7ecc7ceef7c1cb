#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <ranges>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "core.hpp"

namespace mhg {

/// Nonnegative integer or +infinity. +infinity compares above every finite
/// value; it is the valuation of zero / the identity.
class Valuation {
public:
  constexpr Valuation() = default;
  constexpr explicit Valuation(std::uint64_t j) : finite_(j) {}

  static constexpr Valuation infinite()
  {
    Valuation v;
    v.infinite_ = true;
    return v;
  }

  constexpr bool is_infinite() const noexcept { return infinite_; }

  std::uint64_t value() const
  {
    if (infinite_)
      throw Error(Errc::InvalidArgument, "valuation is infinite");
    return finite_;
  }

  std::string str() const { return infinite_ ? "inf" : std::to_string(finite_); }

  // infinite_ is compared first, so every finite value sorts below +inf.
  constexpr auto operator<=>(const Valuation&) const = default;

private:
  bool infinite_ = false;
  std::uint64_t finite_ = 0;
};

inline Rational rational_pow(const Rational& base, std::uint64_t exp)
{
  Rational result = 1;
  Rational b = base;
  while (exp != 0) {
    if (exp & 1u)
      result *= b;
    exp >>= 1u;
    if (exp != 0)
      b *= b;
  }
  return result;
}

/// The sequence r_0 >= r_1 >= ... > 0 tending to 0 that turns valuations
/// into distances. Geometric profiles have r_j = base^j. Explicit profiles
/// list r_0..r_{L-1} and continue geometrically with `tail_ratio`.
class RadiusProfile {
public:
  static RadiusProfile geometric(Rational base)
  {
    if (base <= 0 || base >= 1)
      throw Error(Errc::InvalidArgument, "geometric base must lie in (0, 1), got " + to_string(base));
    RadiusProfile p;
    p.tail_ratio_ = std::move(base);
    return p;
  }

  /// When `tail_ratio` is omitted it is the ratio of the last two values.
  static RadiusProfile explicit_values(std::vector<Rational> values, std::optional<Rational> tail_ratio = {})
  {
    if (values.empty())
      throw Error(Errc::InvalidArgument, "explicit radius profile needs at least one value");
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] <= 0)
        throw Error(Errc::InvalidArgument, "radius values must be positive");
      if (i > 0 && values[i] > values[i - 1])
        throw Error(Errc::InvalidArgument, "radius values must be non-increasing");
    }
    if (!tail_ratio) {
      if (values.size() < 2)
        throw Error(Errc::InvalidArgument, "a one-element explicit profile needs a tail ratio");
      tail_ratio = values.back() / values[values.size() - 2];
    }
    if (*tail_ratio <= 0 || *tail_ratio >= 1)
      throw Error(Errc::InvalidArgument,
                  "tail ratio must lie in (0, 1) so radii tend to 0, got " + to_string(*tail_ratio));
    RadiusProfile p;
    p.values_ = std::move(values);
    p.tail_ratio_ = std::move(*tail_ratio);
    return p;
  }

  bool is_geometric() const noexcept { return values_.empty(); }
  const Rational& base() const noexcept { return tail_ratio_; }
  const Rational& tail_ratio() const noexcept { return tail_ratio_; }
  const std::vector<Rational>& values() const noexcept { return values_; }

  Rational radius(std::uint64_t j) const
  {
    if (is_geometric())
      return rational_pow(tail_ratio_, j);
    if (j < values_.size())
      return values_[j];
    return values_.back() * rational_pow(tail_ratio_, j - values_.size() + 1);
  }

  Rational radius(Valuation v) const { return v.is_infinite() ? Rational(0) : radius(v.value()); }

  bool operator==(const RadiusProfile&) const = default;

private:
  RadiusProfile() = default;

  std::vector<Rational> values_;
  Rational tail_ratio_;
};

/// Decreasing chain of subgroups A_j = g_j Z of the integers, described by
/// generators g_0 = 1 | g_1 | g_2 | ...
///
/// ideal_power(m) is g_j = m^j. An explicit chain lists g_0..g_{L-1} and
/// continues by multiplying with the last step ratio g_{L-1}/g_{L-2}, which
/// must be at least 2 so the generators are unbounded.
class ChainSpec {
public:
  static ChainSpec ideal_power(Integer m)
  {
    if (m < 2)
      throw Error(Errc::InvalidArgument, "ideal_power chain needs m >= 2, got " + to_string(m));
    ChainSpec c;
    c.m_ = std::move(m);
    return c;
  }

  static ChainSpec explicit_moduli(std::vector<Integer> moduli)
  {
    if (moduli.size() < 2)
      throw Error(Errc::InvalidArgument, "explicit chain needs at least g_0 and g_1");
    if (moduli[0] != 1)
      throw Error(Errc::InvalidArgument, "explicit chain must start with g_0 = 1");
    for (std::size_t i = 1; i < moduli.size(); ++i) {
      if (moduli[i] <= 0 || moduli[i] % moduli[i - 1] != 0)
        throw Error(Errc::InvalidArgument, "each generator must be a positive multiple of the previous one");
    }
    Integer ratio = moduli.back() / moduli[moduli.size() - 2];
    if (ratio < 2)
      throw Error(Errc::InvalidArgument, "last step of an explicit chain must be strict (ratio >= 2)");
    ChainSpec c;
    c.moduli_ = std::move(moduli);
    c.m_ = std::move(ratio);
    return c;
  }

  bool is_ideal_power() const noexcept { return moduli_.empty(); }

  /// m for ideal_power chains; the tail step ratio for explicit chains.
  const Integer& base() const noexcept { return m_; }
  const std::vector<Integer>& moduli() const noexcept { return moduli_; }

  Integer generator(std::uint64_t j) const
  {
    if (is_ideal_power())
      return ipow(m_, j);
    if (j < moduli_.size())
      return moduli_[j];
    return moduli_.back() * ipow(m_, j - moduli_.size() + 1);
  }

  bool contains(std::uint64_t j, const Integer& x) const { return x % generator(j) == 0; }

  bool operator==(const ChainSpec&) const = default;

private:
  ChainSpec() = default;

  std::vector<Integer> moduli_;
  Integer m_;
};

/// Largest j with x in A_j; +inf for x = 0.
inline Valuation valuation(const Integer& x, const ChainSpec& chain)
{
  if (x == 0)
    return Valuation::infinite();
  std::uint64_t j = 0;
  if (chain.is_ideal_power()) {
    Integer y = iabs(x);
    const Integer& m = chain.base();
    while (y % m == 0) {
      y /= m;
      ++j;
    }
    return Valuation(j);
  }
  // Generators are unbounded, so this stops once g_{j+1} exceeds |x|.
  while (chain.contains(j + 1, x))
    ++j;
  return Valuation(j);
}

struct UltraDistance {
  Valuation valuation;
  Rational radius;

  bool operator==(const UltraDistance&) const = default;
};

inline UltraDistance distance(const Integer& x, const Integer& y, const ChainSpec& chain,
                              const RadiusProfile& profile)
{
  Valuation v = valuation(x - y, chain);
  return {v, profile.radius(v)};
}

/// Length of the common prefix of two equal-length sequences. `through_end`
/// is set when the sequences agree everywhere (the +inf case).
struct AgreementIndex {
  std::size_t index = 0;
  bool through_end = false;

  Valuation as_valuation() const { return through_end ? Valuation::infinite() : Valuation(index); }
  bool operator==(const AgreementIndex&) const = default;
};

template<std::ranges::forward_range A, std::ranges::forward_range B, typename Eq = std::equal_to<>>
AgreementIndex agreement_index(const A& a, const B& b, Eq eq = {})
{
  if (std::ranges::distance(a) != std::ranges::distance(b))
    throw Error(Errc::LengthMismatch, "sequences have different lengths");
  std::size_t j = 0;
  auto ib = std::ranges::begin(b);
  for (auto ia = std::ranges::begin(a); ia != std::ranges::end(a); ++ia, ++ib, ++j) {
    if (!eq(*ia, *ib))
      return {j, false};
  }
  return {j, true};
}

/// First-disagreement index for points of the product of quotients Z/A_j.
/// Entry k of each list is the level-(k+1) residue.
inline AgreementIndex product_disagreement(std::span<const Integer> a, std::span<const Integer> b,
                                           const ChainSpec& chain)
{
  if (a.size() != b.size())
    throw Error(Errc::LengthMismatch,
                "residue lists have lengths " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
  std::vector<Integer> ra, rb;
  ra.reserve(a.size());
  rb.reserve(b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    Integer g = chain.generator(k + 1);
    ra.push_back(floor_mod(a[k], g));
    rb.push_back(floor_mod(b[k], g));
  }
  return agreement_index(ra, rb);
}

enum class EquivalenceDirection { AInB, BInA };

struct EquivalenceReport {
  bool equivalent = false;
  std::uint64_t depth = 0;
  std::uint64_t search_depth = 0;
  /// b_in_a[j-1] = least l with B_l contained in A_j.
  std::vector<std::uint64_t> b_in_a;
  /// a_in_b[k-1] = least n with A_n contained in B_k.
  std::vector<std::uint64_t> a_in_b;
  /// Set when a witness search failed.
  std::optional<std::pair<EquivalenceDirection, std::uint64_t>> failure;
};

/// Bounded search for topological equivalence of two chains in Z. Every
/// index j <= depth must have a witness level within `search_depth`
/// (default 2 * depth); otherwise the report is not-equivalent-up-to-depth.
inline EquivalenceReport check_chain_equivalence(const ChainSpec& a, const ChainSpec& b, std::uint64_t depth,
                                                 std::optional<std::uint64_t> search_depth = {})
{
  EquivalenceReport report;
  report.depth = depth;
  report.search_depth = search_depth.value_or(2 * depth);

  // Least l in [1, search] with inner_l Z contained in outer_j Z.
  auto witness = [&](const ChainSpec& outer, const ChainSpec& inner, std::uint64_t j) -> std::optional<std::uint64_t> {
    Integer g = outer.generator(j);
    for (std::uint64_t l = 1; l <= report.search_depth; ++l) {
      if (inner.generator(l) % g == 0)
        return l;
    }
    return std::nullopt;
  };

  for (std::uint64_t j = 1; j <= depth; ++j) {
    auto l = witness(a, b, j);
    if (!l) {
      report.failure = {EquivalenceDirection::BInA, j};
      return report;
    }
    report.b_in_a.push_back(*l);
  }
  for (std::uint64_t k = 1; k <= depth; ++k) {
    auto n = witness(b, a, k);
    if (!n) {
      report.failure = {EquivalenceDirection::AInB, k};
      return report;
    }
    report.a_in_b.push_back(*n);
  }
  report.equivalent = true;
  return report;
}

}  // namespace mhg
