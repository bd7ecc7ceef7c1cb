#pragma once

#include <algorithm>
#include <cstdint>
#include <future>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "core.hpp"
#include "hmodule.hpp"
#include "madic.hpp"
#include "tower.hpp"

namespace mhg {

/// Chain families of subgroups of G = (m-adic)^N x (m-adic):
///   H_j = I_j^N x I_j      (normal)
///   G_j = I_j^N x I_{2j}   (weakly normal, sandwiched H_{2j} <= G_j <= H_j)
enum class ChainFamily { H, G };

constexpr std::string_view family_name(ChainFamily f) noexcept
{
  return f == ChainFamily::H ? "H" : "G";
}

/// Depth of the central-coordinate ideal for level j of a family.
constexpr std::uint64_t central_depth(ChainFamily f, std::uint64_t j) noexcept
{
  return f == ChainFamily::H ? j : 2 * j;
}

struct HPoint {
  ModuleVec x;
  MadicInt s;

  bool operator==(const HPoint&) const = default;
};

enum class Membership { No, Yes, Inconclusive };

constexpr std::string_view membership_name(Membership m) noexcept
{
  switch (m) {
  case Membership::No: return "false";
  case Membership::Yes: return "true";
  case Membership::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

/// Distance under the left-invariant ultrametric of a chain family. When the
/// valuation is only a lower bound, `radius` is 0 if the two points are
/// equal at the working precision and otherwise the bound's radius.
struct GroupDistance {
  ValuationResult valuation;
  Rational radius;

  bool operator==(const GroupDistance&) const = default;
};

/// Fixes one Heisenberg group: modulus m, bilinear form B of rank N, working
/// precision n and a radius profile. Immutable once built.
class HeisenbergContext {
public:
  HeisenbergContext(Integer m, BilinearForm form, std::uint32_t precision,
                    RadiusProfile profile = RadiusProfile::geometric(Rational(1, 2)))
    : m_(std::move(m)), form_(std::move(form)), n_(precision), profile_(std::move(profile))
  {
    if (m_ < 2)
      throw Error(Errc::InvalidArgument, "modulus must be >= 2, got " + to_string(m_));
    if (n_ < 1)
      throw Error(Errc::InvalidArgument, "precision must be positive");
  }

  const Integer& modulus() const noexcept { return m_; }
  std::size_t rank() const noexcept { return form_.rank(); }
  const BilinearForm& form() const noexcept { return form_; }
  std::uint32_t precision() const noexcept { return n_; }
  const RadiusProfile& profile() const noexcept { return profile_; }

  /// Same group at a lower precision; the target of the level maps.
  HeisenbergContext at_precision(std::uint32_t j) const
  {
    if (j < 1 || j > n_)
      throw Error(Errc::PrecisionExceeded, "level " + std::to_string(j) + " outside [1, " + std::to_string(n_) + "]");
    return HeisenbergContext(m_, form_, j, profile_);
  }

  HPoint point(std::span<const Integer> x, const Integer& s) const
  {
    if (x.size() != rank())
      throw Error(Errc::RankMismatch, "point has " + std::to_string(x.size()) + " coordinates, rank is " +
                                        std::to_string(rank()));
    return {ModuleVec::from_integers(x, m_, n_), MadicInt::from_integer(s, m_, n_)};
  }

  HPoint point(std::initializer_list<Integer> x, const Integer& s) const
  {
    std::vector<Integer> v(x);
    return point(std::span<const Integer>(v), s);
  }

  HPoint identity() const { return {ModuleVec::zero(rank(), m_, n_), MadicInt::zero(m_, n_)}; }

  bool owns(const HPoint& g) const
  {
    return g.x.rank() == rank() && g.x.modulus() == m_ && g.x.precision() == n_ && g.s.modulus() == m_ &&
           g.s.precision() == n_;
  }

  void require(const HPoint& g) const
  {
    if (!owns(g))
      throw Error(Errc::ContextMismatch, "point does not belong to this group (m=" + to_string(m_) +
                                           ", N=" + std::to_string(rank()) + ", n=" + std::to_string(n_) + ")");
  }

  /// (x, s) <> (y, t) = (x + y, s + t + B(x, y))
  HPoint mul(const HPoint& g, const HPoint& h) const
  {
    require(g);
    require(h);
    return {g.x + h.x, g.s + h.s + form_(g.x, h.x)};
  }

  /// (x, s)^{-1} = (-x, -s + B(x, x))
  HPoint inv(const HPoint& g) const
  {
    require(g);
    return {-g.x, -g.s + form_(g.x, g.x)};
  }

  /// g <> h <> g^{-1} = (y, t + B(x, y) - B(y, x))
  HPoint conjugate(const HPoint& g, const HPoint& h) const
  {
    require(g);
    require(h);
    return {h.x, h.s + form_(g.x, h.x) - form_(h.x, g.x)};
  }

  /// delta_r(x, s) = (r x, r^2 s)
  HPoint dilate(const Integer& r, const HPoint& g) const
  {
    require(g);
    return {g.x.scale(r), g.s.scale(r * r)};
  }

  Membership member(const HPoint& g, ChainFamily family, std::uint64_t j) const
  {
    require(g);
    std::uint64_t depth = central_depth(family, j);
    if (depth > n_)
      return Membership::Inconclusive;
    return g.x.valuation().reaches(j) && g.s.valuation().reaches(depth) ? Membership::Yes : Membership::No;
  }

  /// Largest j with g in family_j, as far as the precision determines it.
  ValuationResult level(const HPoint& g, ChainFamily family) const
  {
    require(g);
    ValuationResult vx = g.x.valuation();
    ValuationResult vs = g.s.valuation();
    if (family == ChainFamily::G)
      vs = vs.is_exact() ? ValuationResult::exact(vs.bound() / 2) : ValuationResult::at_least(vs.bound() / 2);
    return min_valuation(vx, vs);
  }

  /// d(g, h) = rho(h^{-1} g)
  GroupDistance distance(const HPoint& g, const HPoint& h, ChainFamily family) const
  {
    HPoint q = mul(inv(h), g);
    ValuationResult v = level(q, family);
    if (v.is_exact())
      return {v, profile_.radius(v.bound())};
    bool trivial = q.x.is_zero() && q.s.is_zero();
    return {v, trivial ? Rational(0) : profile_.radius(v.bound())};
  }

  /// Level-j quotient map for family H: reduce every coordinate mod m^j. The
  /// image lives in `at_precision(j)`, whose law is the induced one.
  HPoint project(const HPoint& g, std::uint32_t j) const
  {
    require(g);
    if (j < 1 || j > n_)
      throw Error(Errc::PrecisionExceeded, "level " + std::to_string(j) + " outside [1, " + std::to_string(n_) + "]");
    return {g.x.truncate(j), g.s.truncate(j)};
  }

  /// Canonical representative of the left coset g family_l: x-digits in
  /// [0, m^l), central digit in [0, m^e) with e = l (H) or 2l (G). The
  /// central digit is read off the unique coset element with those x-digits.
  HPoint canonical_rep(const HPoint& g, ChainFamily family, std::uint64_t l) const
  {
    require(g);
    std::uint64_t e = central_depth(family, l);
    if (e > n_)
      throw Error(Errc::PrecisionExceeded, "family " + std::string(family_name(family)) + " level " +
                                             std::to_string(l) + " needs precision " + std::to_string(e));
    Integer ml = ipow(m_, l);
    Integer me = ipow(m_, e);
    std::vector<Integer> xv, xbar, shift;
    for (std::size_t i = 0; i < rank(); ++i) {
      xv.push_back(g.x[i].value());
      xbar.push_back(g.x[i].value() % ml);
      shift.push_back(xbar.back() - xv.back());
    }
    Integer sbar = floor_mod(g.s.value() + form_.eval(xv, shift), me);
    return point(xbar, sbar);
  }

  bool operator==(const HeisenbergContext&) const = default;

private:
  Integer m_;
  BilinearForm form_;
  std::uint32_t n_;
  RadiusProfile profile_;
};

/// Points whose coordinates are digit multiples: x_i = x_step * d_i with
/// d_i < x_count, s = s_step * d with d < s_count. Indexed lexicographically
/// with x_1 most significant and s least.
class DigitBox {
public:
  DigitBox(const HeisenbergContext& ctx, Integer x_step, Integer x_count, Integer s_step, Integer s_count)
    : ctx_(ctx), x_step_(std::move(x_step)), x_count_(std::move(x_count)), s_step_(std::move(s_step)),
      s_count_(std::move(s_count))
  {
    Integer total = s_count_ * ipow(x_count_, ctx.rank());
    if (total > Integer(std::numeric_limits<std::uint64_t>::max() / 2))
      throw Error(Errc::InvalidArgument, "enumeration too large: " + to_string(total) + " points");
    size_ = total.convert_to<std::uint64_t>();
    xc_ = x_count_.convert_to<std::uint64_t>();
    sc_ = s_count_.convert_to<std::uint64_t>();
  }

  /// Representatives of G / H_L lying in family_j (all of G / H_L for j = 0).
  static DigitBox subgroup_mod(const HeisenbergContext& ctx, ChainFamily family, std::uint64_t j, std::uint64_t L)
  {
    std::uint64_t e = central_depth(family, j);
    const Integer& m = ctx.modulus();
    return DigitBox(ctx, ipow(m, j), ipow(m, L - j), ipow(m, e), ipow(m, L - e));
  }

  /// As subgroup_mod, keeping only the points with central coordinate 0.
  static DigitBox horizontal_mod(const HeisenbergContext& ctx, std::uint64_t j, std::uint64_t L)
  {
    const Integer& m = ctx.modulus();
    return DigitBox(ctx, ipow(m, j), ipow(m, L - j), 1, 1);
  }

  std::uint64_t size() const noexcept { return size_; }

  HPoint at(std::uint64_t idx) const
  {
    std::uint64_t sd = idx % sc_;
    idx /= sc_;
    std::vector<Integer> x(ctx_.rank());
    for (std::size_t i = x.size(); i-- > 0;) {
      x[i] = x_step_ * (idx % xc_);
      idx /= xc_;
    }
    return ctx_.point(x, s_step_ * sd);
  }

private:
  HeisenbergContext ctx_;
  Integer x_step_, x_count_, s_step_, s_count_;
  std::uint64_t size_ = 0, xc_ = 0, sc_ = 0;
};

enum class NormalityVerdict { Normal, NotNormal };

struct ConjugationWitness {
  HPoint conjugator;
  HPoint element;
  HPoint conjugate;
};

struct NormalityReport {
  NormalityVerdict verdict = NormalityVerdict::Normal;
  ChainFamily family = ChainFamily::H;
  std::uint64_t j = 0;
  std::uint64_t level = 0;
  std::optional<ConjugationWitness> witness;
  std::string certificate_scope;
};

namespace detail {

inline void require_visible(const HeisenbergContext& ctx, ChainFamily family, std::uint64_t j, std::uint64_t L)
{
  if (L > ctx.precision())
    throw Error(Errc::PrecisionExceeded,
                "quotient level " + std::to_string(L) + " exceeds precision " + std::to_string(ctx.precision()));
  if (central_depth(family, j) > L)
    throw Error(Errc::LevelTooShallow, "family " + std::string(family_name(family)) + " level " + std::to_string(j) +
                                         " is not visible in G/H_" + std::to_string(L));
}

/// First index in [0, count) satisfying `pred`, scanning `jobs` contiguous
/// chunks concurrently; the lowest hit wins so the answer is deterministic.
template<typename Pred>
std::optional<std::uint64_t> first_index(std::uint64_t count, unsigned jobs, Pred pred)
{
  auto scan = [&pred](std::uint64_t lo, std::uint64_t hi) -> std::optional<std::uint64_t> {
    for (std::uint64_t i = lo; i < hi; ++i) {
      if (pred(i))
        return i;
    }
    return std::nullopt;
  };
  if (jobs <= 1 || count < 2)
    return scan(0, count);
  std::uint64_t chunk = (count + jobs - 1) / jobs;
  std::vector<std::future<std::optional<std::uint64_t>>> parts;
  for (std::uint64_t lo = 0; lo < count; lo += chunk)
    parts.push_back(std::async(std::launch::async, scan, lo, std::min(count, lo + chunk)));
  std::optional<std::uint64_t> best;
  for (auto& p : parts) {
    auto hit = p.get();
    if (hit && !best)
      best = hit;
  }
  return best;
}

}  // namespace detail

/// Exhaustive normality test of family_j inside the finite quotient G/H_L.
/// Conjugators run over all of G/H_L, elements over family_j / H_L, both in
/// canonical order; the first conjugate escaping family_j is the witness.
inline NormalityReport check_normality(const HeisenbergContext& ctx, ChainFamily family, std::uint64_t j,
                                       std::uint64_t L, unsigned jobs = 1)
{
  detail::require_visible(ctx, family, j, L);
  NormalityReport report;
  report.family = family;
  report.j = j;
  report.level = L;

  // Conjugation fixes the centre and ignores the conjugator's central
  // coordinate, so whether (a, h) escapes depends on the horizontal parts
  // alone. Dropping central coordinates keeps the lexicographic first escape.
  DigitBox conjugators = DigitBox::horizontal_mod(ctx, 0, L);
  DigitBox elements = DigitBox::horizontal_mod(ctx, j, L);
  auto escapes = [&](std::uint64_t ai, std::uint64_t hi) {
    return ctx.member(ctx.conjugate(conjugators.at(ai), elements.at(hi)), family, j) != Membership::Yes;
  };
  auto hit = detail::first_index(conjugators.size(), jobs, [&](std::uint64_t ai) {
    for (std::uint64_t hi = 0; hi < elements.size(); ++hi) {
      if (escapes(ai, hi))
        return true;
    }
    return false;
  });

  std::string quotient = "G/H_" + std::to_string(L);
  if (!hit) {
    report.verdict = NormalityVerdict::Normal;
    report.certificate_scope = "image of " + std::string(family_name(family)) + "_" + std::to_string(j) +
                               " is normal in the finite quotient " + quotient + " only";
    return report;
  }
  for (std::uint64_t hi = 0; hi < elements.size(); ++hi) {
    if (escapes(*hit, hi)) {
      HPoint a = conjugators.at(*hit);
      HPoint h = elements.at(hi);
      report.witness = ConjugationWitness{a, h, ctx.conjugate(a, h)};
      break;
    }
  }
  report.verdict = NormalityVerdict::NotNormal;
  report.certificate_scope = "witness is an exact counterexample in G, found by enumerating " + quotient;
  return report;
}

struct WeakNormalityReport {
  std::optional<std::uint64_t> found_level;
  ChainFamily family = ChainFamily::H;
  std::uint64_t j = 0;
  std::uint64_t depth = 0;
  std::uint64_t level = 0;
  std::string certificate_scope;
};

/// Least l <= depth with family_l contained in a family_j a^{-1}, verified on
/// the representatives of family_l / H_L.
inline WeakNormalityReport check_weak_normality(const HeisenbergContext& ctx, ChainFamily family, const HPoint& a,
                                                std::uint64_t j, std::uint64_t depth, std::uint64_t L)
{
  ctx.require(a);
  detail::require_visible(ctx, family, std::max(j, depth), L);
  WeakNormalityReport report;
  report.family = family;
  report.j = j;
  report.depth = depth;
  report.level = L;
  report.certificate_scope = "containment checked in the finite quotient G/H_" + std::to_string(L);

  HPoint a_inv = ctx.inv(a);
  for (std::uint64_t l = 0; l <= depth; ++l) {
    DigitBox elements = DigitBox::subgroup_mod(ctx, family, l, L);
    bool contained = true;
    for (std::uint64_t i = 0; i < elements.size() && contained; ++i)
      contained = ctx.member(ctx.conjugate(a_inv, elements.at(i)), family, j) == Membership::Yes;
    if (contained) {
      report.found_level = l;
      return report;
    }
  }
  return report;
}

/// The same group law over R = Z itself, before completion.
struct IntegralPoint {
  std::vector<Integer> x;
  Integer s;

  bool operator==(const IntegralPoint&) const = default;
};

inline IntegralPoint integral_mul(const BilinearForm& b, const IntegralPoint& g, const IntegralPoint& h)
{
  if (g.x.size() != b.rank() || h.x.size() != b.rank())
    throw Error(Errc::RankMismatch, "point rank does not match form rank");
  IntegralPoint out{g.x, g.s + h.s + b.eval(g.x, h.x)};
  for (std::size_t i = 0; i < out.x.size(); ++i)
    out.x[i] += h.x[i];
  return out;
}

inline IntegralPoint integral_dilate(const Integer& r, const IntegralPoint& g)
{
  IntegralPoint out{g.x, r * r * g.s};
  for (auto& c : out.x)
    c *= r;
  return out;
}

}  // namespace mhg
