#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "heisenberg.hpp"
#include "hmodule.hpp"

namespace mhg {

/// Z, or Z/kZ with elements stored as least nonnegative residues.
class BaseRing {
public:
  static BaseRing integers() { return BaseRing(); }

  static BaseRing integers_mod(Integer k)
  {
    if (k < 2)
      throw Error(Errc::InvalidArgument, "Z/kZ needs k >= 2, got " + to_string(k));
    BaseRing r;
    r.k_ = std::move(k);
    return r;
  }

  bool is_integers() const noexcept { return k_ == 0; }
  const Integer& modulus() const noexcept { return k_; }

  Integer normalize(const Integer& x) const { return is_integers() ? x : floor_mod(x, k_); }

  std::string name() const { return is_integers() ? "Z" : "Z/" + k_.str(); }

  bool operator==(const BaseRing&) const = default;

private:
  BaseRing() = default;

  Integer k_ = 0;
};

/// Multiplicatively closed set: all finite products of `gens` (the empty
/// product is e), or e + mZ.
class MultSet {
public:
  enum class Kind { Generated, OnePlusIdeal };

  static MultSet generated(std::vector<Integer> gens)
  {
    MultSet s;
    s.kind_ = Kind::Generated;
    s.gens_ = std::move(gens);
    return s;
  }

  static MultSet one_plus_ideal(Integer m)
  {
    if (m < 2)
      throw Error(Errc::InvalidArgument, "e + mZ needs m >= 2, got " + to_string(m));
    MultSet s;
    s.kind_ = Kind::OnePlusIdeal;
    s.m_ = std::move(m);
    return s;
  }

  Kind kind() const noexcept { return kind_; }
  const std::vector<Integer>& gens() const noexcept { return gens_; }
  const Integer& ideal_generator() const noexcept { return m_; }

  bool operator==(const MultSet&) const = default;

private:
  MultSet() = default;

  Kind kind_ = Kind::Generated;
  std::vector<Integer> gens_;
  Integer m_ = 0;
};

/// a / s, kept unreduced. Equality is the localization relation, decided by
/// the owning Localization.
struct Fraction {
  Integer num;
  Integer den;
};

/// x / s for x in R^N.
struct ModuleFraction {
  std::vector<Integer> num;
  Integer den;
};

/// The ring S^{-1} R for R = Z or Z/kZ. Over Z/kZ the set S is finite and
/// is closed up front; the object is immutable afterwards.
class Localization {
public:
  Localization(BaseRing ring, MultSet set) : ring_(std::move(ring)), set_(std::move(set))
  {
    if (!ring_.is_integers())
      closure_ = close_finite();
    zero_in_set_ = contains(0);
  }

  const BaseRing& ring() const noexcept { return ring_; }
  const MultSet& set() const noexcept { return set_; }
  bool zero_in_set() const noexcept { return zero_in_set_; }

  /// Elements of S over Z/kZ: e first, then ascending.
  const std::vector<Integer>& closure() const
  {
    if (!closure_)
      throw Error(Errc::InvalidArgument, "S is infinite over Z");
    return *closure_;
  }

  bool contains(const Integer& v) const
  {
    if (closure_)
      return std::binary_search(closure_->begin() + 1, closure_->end(), ring_.normalize(v)) ||
             ring_.normalize(v) == closure_->front();
    if (set_.kind() == MultSet::Kind::OnePlusIdeal)
      return floor_mod(v - 1, set_.ideal_generator()) == 0;
    return generated_over_z(v);
  }

  Fraction make(const Integer& a, const Integer& s) const
  {
    if (!contains(s))
      throw Error(Errc::NotInMultSet, to_string(s) + " is not in S");
    return {ring_.normalize(a), ring_.normalize(s)};
  }

  Fraction canonical(const Integer& a) const { return {ring_.normalize(a), ring_.normalize(1)}; }

  /// (a t - b s) v = 0 for some v in S.
  bool equal(const Fraction& p, const Fraction& q) const
  {
    Integer d = p.num * q.den - q.num * p.den;
    return annihilated({d});
  }

  Fraction add(const Fraction& p, const Fraction& q) const
  {
    return {ring_.normalize(p.num * q.den + q.num * p.den), ring_.normalize(p.den * q.den)};
  }

  Fraction mul(const Fraction& p, const Fraction& q) const
  {
    return {ring_.normalize(p.num * q.num), ring_.normalize(p.den * q.den)};
  }

  Fraction neg(const Fraction& p) const { return {ring_.normalize(-p.num), p.den}; }

  /// Some s in S with a s = 0, if one exists (e is tried first).
  std::optional<Integer> kernel_witness(const Integer& a) const
  {
    Integer x = ring_.normalize(a);
    if (closure_) {
      for (const auto& s : *closure_) {
        if (ring_.normalize(x * s) == 0)
          return s;
      }
      return std::nullopt;
    }
    if (x == 0)
      return Integer(1);
    if (zero_in_set_)
      return Integer(0);
    return std::nullopt;
  }

  ModuleFraction make_vector(std::vector<Integer> x, const Integer& s) const
  {
    if (!contains(s))
      throw Error(Errc::NotInMultSet, to_string(s) + " is not in S");
    for (auto& c : x)
      c = ring_.normalize(c);
    return {std::move(x), ring_.normalize(s)};
  }

  /// t (s' x - s x') = 0 for some t in S, one t for all coordinates.
  bool module_equal(const ModuleFraction& p, const ModuleFraction& q) const
  {
    if (p.num.size() != q.num.size())
      throw Error(Errc::RankMismatch, "ranks " + std::to_string(p.num.size()) + " and " + std::to_string(q.num.size()));
    std::vector<Integer> d;
    d.reserve(p.num.size());
    for (std::size_t i = 0; i < p.num.size(); ++i)
      d.push_back(q.den * p.num[i] - p.den * q.num[i]);
    return annihilated(d);
  }

  ModuleFraction module_add(const ModuleFraction& p, const ModuleFraction& q) const
  {
    if (p.num.size() != q.num.size())
      throw Error(Errc::RankMismatch, "ranks " + std::to_string(p.num.size()) + " and " + std::to_string(q.num.size()));
    ModuleFraction out{{}, ring_.normalize(p.den * q.den)};
    for (std::size_t i = 0; i < p.num.size(); ++i)
      out.num.push_back(ring_.normalize(q.den * p.num[i] + p.den * q.num[i]));
    return out;
  }

  /// (a / u) (x / s) = (a x) / (u s)
  ModuleFraction module_scale(const Fraction& r, const ModuleFraction& p) const
  {
    ModuleFraction out{{}, ring_.normalize(r.den * p.den)};
    for (const auto& c : p.num)
      out.num.push_back(ring_.normalize(r.num * c));
    return out;
  }

private:
  bool annihilated(const std::vector<Integer>& d) const
  {
    auto kills = [&](const Integer& v) {
      return std::all_of(d.begin(), d.end(), [&](const Integer& c) { return ring_.normalize(c * v) == 0; });
    };
    if (closure_)
      return std::any_of(closure_->begin(), closure_->end(), kills);
    // Z has no zero divisors: only v = 0 can help.
    return zero_in_set_ || kills(1);
  }

  /// Membership in the product closure of the generators over Z, by peeling
  /// generator factors off v. |v| never grows, so the search is finite.
  bool generated_over_z(const Integer& v) const
  {
    const auto& gens = set_.gens();
    bool has_zero = std::find(gens.begin(), gens.end(), Integer(0)) != gens.end();
    bool has_minus_one = std::find(gens.begin(), gens.end(), Integer(-1)) != gens.end();
    if (v == 0)
      return has_zero;
    std::set<Integer> seen;
    std::vector<Integer> stack{v};
    while (!stack.empty()) {
      Integer cur = std::move(stack.back());
      stack.pop_back();
      if (cur == 1)
        return true;
      if (!seen.insert(cur).second)
        continue;
      if (has_minus_one)
        stack.push_back(-cur);
      for (const auto& g : gens) {
        if (iabs(g) >= 2 && cur % g == 0)
          stack.push_back(cur / g);
      }
    }
    return false;
  }

  std::vector<Integer> close_finite() const
  {
    const Integer& k = ring_.modulus();
    std::set<Integer> members;
    if (set_.kind() == MultSet::Kind::OnePlusIdeal) {
      // e + mR in Z/k is the residue class of 1 modulo gcd(m, k).
      Integer step = igcd(set_.ideal_generator(), k);
      for (Integer v = 0; v < k; ++v) {
        if ((v - 1) % step == 0)
          members.insert(v);
      }
    } else {
      std::vector<Integer> frontier{floor_mod(1, k)};
      members.insert(frontier.front());
      while (!frontier.empty()) {
        Integer cur = std::move(frontier.back());
        frontier.pop_back();
        for (const auto& g : set_.gens()) {
          Integer next = floor_mod(cur * g, k);
          if (members.insert(next).second)
            frontier.push_back(next);
        }
      }
    }
    std::vector<Integer> out{floor_mod(1, k)};
    for (const auto& v : members) {
      if (v != out.front())
        out.push_back(v);
    }
    return out;
  }

  BaseRing ring_;
  MultSet set_;
  std::optional<std::vector<Integer>> closure_;
  bool zero_in_set_ = false;
};

/// Element (x / s, a / u) of S^{-1} G.
struct FracPoint {
  ModuleFraction x;
  Fraction s;
};

/// The Heisenberg group S^{-1} G built from S^{-1} B(x/s, y/t) = B(x, y)/(st),
/// for R = Z with 0 outside S.
class FractionHeisenberg {
public:
  FractionHeisenberg(BilinearForm form, Localization loc) : form_(std::move(form)), loc_(std::move(loc))
  {
    if (!loc_.ring().is_integers())
      throw Error(Errc::InvalidArgument, "Heisenberg groups of fractions are built over Z");
    if (loc_.zero_in_set())
      throw Error(Errc::InvalidArgument, "S contains 0, so S^{-1} Z is the zero ring");
  }

  const Localization& localization() const noexcept { return loc_; }
  const BilinearForm& form() const noexcept { return form_; }

  /// (x, s) -> (x / e, s / e)
  FracPoint hom(const IntegralPoint& g) const
  {
    if (g.x.size() != form_.rank())
      throw Error(Errc::RankMismatch, "point rank does not match form rank");
    return {{g.x, 1}, loc_.canonical(g.s)};
  }

  FracPoint mul(const FracPoint& g, const FracPoint& h) const
  {
    Fraction cross{form_.eval(g.x.num, h.x.num), g.x.den * h.x.den};
    return {loc_.module_add(g.x, h.x), loc_.add(loc_.add(g.s, h.s), cross)};
  }

  FracPoint dilate(const Fraction& r, const FracPoint& g) const
  {
    return {loc_.module_scale(r, g.x), loc_.mul(loc_.mul(r, r), g.s)};
  }

  bool equal(const FracPoint& g, const FracPoint& h) const
  {
    return loc_.module_equal(g.x, h.x) && loc_.equal(g.s, h.s);
  }

private:
  BilinearForm form_;
  Localization loc_;
};

inline FracPoint heis_frac_hom(const FractionHeisenberg& group, const IntegralPoint& g)
{
  return group.hom(g);
}

}  // namespace mhg
