#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"

namespace mhg {

/// Finite-precision valuation: Exact(j) when m^j exactly divides a nonzero
/// residue, AtLeast(n) when the residue is zero at precision n.
class ValuationResult {
public:
  enum class Kind { Exact, AtLeast };

  static ValuationResult exact(std::uint64_t j) { return {Kind::Exact, j}; }
  static ValuationResult at_least(std::uint64_t n) { return {Kind::AtLeast, n}; }

  Kind kind() const noexcept { return kind_; }
  bool is_exact() const noexcept { return kind_ == Kind::Exact; }
  /// The exact value, or the guaranteed lower bound.
  std::uint64_t bound() const noexcept { return j_; }

  /// Whether the true valuation is known to be >= k. Only AtLeast(n) with
  /// k > n is undetermined; callers keep k within the precision.
  bool reaches(std::uint64_t k) const noexcept { return j_ >= k; }

  std::string str() const
  {
    return (is_exact() ? "Exact(" : "AtLeast(") + std::to_string(j_) + ")";
  }

  bool operator==(const ValuationResult&) const = default;

private:
  ValuationResult(Kind k, std::uint64_t j) : kind_(k), j_(j) {}

  Kind kind_;
  std::uint64_t j_;
};

/// min(a, b) of two finite-precision valuations. An exact value below every
/// lower bound is exact; otherwise only a lower bound is known.
inline ValuationResult min_valuation(const ValuationResult& a, const ValuationResult& b)
{
  if (a.bound() != b.bound())
    return a.bound() < b.bound() ? a : b;
  return a.is_exact() ? a : b;
}

/// Element of the m-adic completion of Z known modulo m^n: the residue
/// `value` in [0, m^n). Composite m is allowed.
class MadicInt {
public:
  MadicInt(Integer m, std::uint32_t n, Integer value)
    : m_(std::move(m)), n_(n), value_(std::move(value))
  {
    if (m_ < 2)
      throw Error(Errc::InvalidArgument, "modulus must be >= 2, got " + to_string(m_));
    if (n_ < 1)
      throw Error(Errc::InvalidArgument, "precision must be positive");
    mn_ = ipow(m_, n_);
    if (value_ < 0 || value_ >= mn_)
      throw Error(Errc::InvalidArgument, "residue " + to_string(value_) + " not in [0, " + to_string(mn_) + ")");
  }

  static MadicInt from_integer(const Integer& x, const Integer& m, std::uint32_t n)
  {
    if (m < 2)
      throw Error(Errc::InvalidArgument, "modulus must be >= 2, got " + to_string(m));
    if (n < 1)
      throw Error(Errc::InvalidArgument, "precision must be positive");
    Integer mn = ipow(m, n);
    return MadicInt(Trusted{}, m, n, mn, floor_mod(x, mn));
  }

  /// Same modulus and precision as this element, new residue reduced mod m^n.
  MadicInt with_value(const Integer& x) const { return MadicInt(Trusted{}, m_, n_, mn_, floor_mod(x, mn_)); }

  static MadicInt zero(const Integer& m, std::uint32_t n) { return MadicInt(m, n, 0); }
  static MadicInt one(const Integer& m, std::uint32_t n) { return MadicInt(m, n, 1); }

  const Integer& modulus() const noexcept { return m_; }
  std::uint32_t precision() const noexcept { return n_; }
  const Integer& value() const noexcept { return value_; }
  /// m^precision.
  const Integer& order() const noexcept { return mn_; }

  bool is_zero() const noexcept { return value_ == 0; }

  /// Reduction to precision j (the map from level n down to level j).
  MadicInt truncate(std::uint32_t j) const
  {
    if (j > n_)
      throw Error(Errc::PrecisionExceeded,
                  "cannot truncate precision " + std::to_string(n_) + " to " + std::to_string(j));
    if (j == n_)
      return *this;
    Integer mj = ipow(m_, j);
    return MadicInt(Trusted{}, m_, j, mj, value_ % mj);
  }

  ValuationResult valuation() const
  {
    if (value_ == 0)
      return ValuationResult::at_least(n_);
    std::uint64_t j = 0;
    Integer y = value_;
    while (y % m_ == 0) {
      y /= m_;
      ++j;
    }
    return ValuationResult::exact(j);
  }

  /// Multiplication by a plain integer scalar.
  MadicInt scale(const Integer& r) const { return with_value(value_ * r); }

  MadicInt operator-() const { return with_value(-value_); }

  friend MadicInt operator+(const MadicInt& a, const MadicInt& b)
  {
    return combine(a, b, [](const Integer& x, const Integer& y) { return Integer(x + y); });
  }
  friend MadicInt operator-(const MadicInt& a, const MadicInt& b)
  {
    return combine(a, b, [](const Integer& x, const Integer& y) { return Integer(x - y); });
  }
  friend MadicInt operator*(const MadicInt& a, const MadicInt& b)
  {
    return combine(a, b, [](const Integer& x, const Integer& y) { return Integer(x * y); });
  }

  MadicInt& operator+=(const MadicInt& b) { return *this = *this + b; }
  MadicInt& operator-=(const MadicInt& b) { return *this = *this - b; }
  MadicInt& operator*=(const MadicInt& b) { return *this = *this * b; }

  bool operator==(const MadicInt& o) const { return n_ == o.n_ && m_ == o.m_ && value_ == o.value_; }

  /// "v mod m^n"
  std::string str() const { return value_.str() + " mod " + m_.str() + "^" + std::to_string(n_); }

private:
  template<typename Op>
  static MadicInt combine(const MadicInt& a, const MadicInt& b, Op op)
  {
    if (a.m_ != b.m_)
      throw Error(Errc::ModulusMismatch, "moduli " + to_string(a.m_) + " and " + to_string(b.m_));
    const MadicInt& low = a.n_ <= b.n_ ? a : b;
    return low.with_value(op(a.value_, b.value_));
  }

  struct Trusted {};
  MadicInt(Trusted, const Integer& m, std::uint32_t n, const Integer& mn, Integer value)
    : m_(m), n_(n), value_(std::move(value)), mn_(mn)
  {}

  Integer m_;
  std::uint32_t n_;
  Integer value_;
  Integer mn_;
};

inline MadicInt from_integer(const Integer& x, const Integer& m, std::uint32_t n)
{
  return MadicInt::from_integer(x, m, n);
}

/// Inverse of a modulo `mod` by the extended Euclidean algorithm; returns 0
/// when gcd(a, mod) != 1.
inline Integer inverse_mod(const Integer& a, const Integer& mod)
{
  Integer old_r = floor_mod(a, mod), r = mod;
  Integer old_s = 1, s = 0;
  while (r != 0) {
    Integer q = old_r / r;
    Integer t = old_r - q * r;
    old_r = std::move(r);
    r = std::move(t);
    t = old_s - q * s;
    old_s = std::move(s);
    s = std::move(t);
  }
  if (old_r != 1)
    return 0;
  return floor_mod(old_s, mod);
}

inline MadicInt invert_unit(const MadicInt& u)
{
  if (igcd(u.value(), u.modulus()) != 1)
    throw Error(Errc::NotAUnit, u.str() + " shares a factor with the modulus");
  return MadicInt(u.modulus(), u.precision(), inverse_mod(u.value(), u.order()));
}

/// (1 - x)^{-1} as the partial geometric sum 1 + x + ... + x^K, with the
/// least K for which x^{K+1} vanishes at x's precision.
inline MadicInt geom_inverse_one_minus(const MadicInt& x)
{
  ValuationResult v = x.valuation();
  if (!v.is_exact())
    return MadicInt::one(x.modulus(), x.precision());
  if (v.bound() == 0)
    throw Error(Errc::NotTopologicallyNilpotent, x.str() + " has valuation 0");
  // (K + 1) * v >= n, i.e. K + 1 = ceil(n / v).
  std::uint64_t terms = (x.precision() + v.bound() - 1) / v.bound();
  const MadicInt one = x.with_value(1);
  MadicInt sum = one;
  for (std::uint64_t k = 1; k < terms; ++k)
    sum = one + x * sum;
  return sum;
}

/// Raised by from_residues; carries the first incoherent level pair.
class IncoherentSequenceError : public Error {
public:
  IncoherentSequenceError(std::uint32_t j, std::uint32_t l)
    : Error(Errc::IncoherentSequence, "levels " + std::to_string(j) + " and " + std::to_string(l)), j_(j), l_(l)
  {}

  std::uint32_t lower() const noexcept { return j_; }
  std::uint32_t upper() const noexcept { return l_; }

private:
  std::uint32_t j_, l_;
};

struct LevelResidue {
  std::uint32_t level;
  Integer residue;
};

/// Rebuilds an element from residues at increasing levels, checking that
/// each deeper residue reduces to every shallower one.
inline MadicInt from_residues(const Integer& m, std::span<const LevelResidue> rs)
{
  if (rs.empty())
    throw Error(Errc::InvalidArgument, "no residues supplied");
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (rs[i].level < 1 || (i > 0 && rs[i].level <= rs[i - 1].level))
      throw Error(Errc::InvalidArgument, "levels must be positive and strictly increasing");
    if (rs[i].residue < 0 || rs[i].residue >= ipow(m, rs[i].level))
      throw Error(Errc::InvalidArgument, "residue at level " + std::to_string(rs[i].level) + " is not reduced");
  }
  for (std::size_t i = 0; i < rs.size(); ++i) {
    Integer mj = ipow(m, rs[i].level);
    for (std::size_t k = i + 1; k < rs.size(); ++k) {
      if (rs[k].residue % mj != rs[i].residue)
        throw IncoherentSequenceError(rs[i].level, rs[k].level);
    }
  }
  return MadicInt(m, rs.back().level, rs.back().residue);
}

}  // namespace mhg
