#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "madic.hpp"

namespace mhg {

using IntMatrix = std::vector<std::vector<Integer>>;

/// Element of the free module (m-adic)^N. All coordinates share one modulus
/// and precision. Membership in M_j = I_j^N is `valuation().reaches(j)`.
class ModuleVec {
public:
  explicit ModuleVec(std::vector<MadicInt> coords) : coords_(std::move(coords))
  {
    if (coords_.empty())
      throw Error(Errc::RankMismatch, "module vectors need rank >= 1");
    for (const auto& c : coords_) {
      if (c.modulus() != coords_[0].modulus())
        throw Error(Errc::ModulusMismatch, "coordinates use different moduli");
      if (c.precision() != coords_[0].precision())
        throw Error(Errc::InvalidArgument, "coordinates use different precisions");
    }
  }

  static ModuleVec from_integers(std::span<const Integer> xs, const Integer& m, std::uint32_t n)
  {
    std::vector<MadicInt> cs;
    cs.reserve(xs.size());
    for (const auto& x : xs)
      cs.push_back(MadicInt::from_integer(x, m, n));
    return ModuleVec(std::move(cs));
  }

  static ModuleVec zero(std::size_t rank, const Integer& m, std::uint32_t n)
  {
    return ModuleVec(std::vector<MadicInt>(rank, MadicInt::zero(m, n)));
  }

  std::size_t rank() const noexcept { return coords_.size(); }
  const Integer& modulus() const noexcept { return coords_[0].modulus(); }
  std::uint32_t precision() const noexcept { return coords_[0].precision(); }
  const MadicInt& operator[](std::size_t i) const { return coords_[i]; }
  const std::vector<MadicInt>& coords() const noexcept { return coords_; }

  bool is_zero() const
  {
    for (const auto& c : coords_) {
      if (!c.is_zero())
        return false;
    }
    return true;
  }

  ModuleVec truncate(std::uint32_t j) const
  {
    return map([j](const MadicInt& c) { return c.truncate(j); });
  }

  ModuleVec scale(const Integer& r) const
  {
    return map([&r](const MadicInt& c) { return c.scale(r); });
  }

  ModuleVec scale(const MadicInt& r) const
  {
    return map([&r](const MadicInt& c) { return r * c; });
  }

  ModuleVec operator-() const
  {
    return map([](const MadicInt& c) { return -c; });
  }

  friend ModuleVec operator+(const ModuleVec& a, const ModuleVec& b) { return zip(a, b, std::plus<>{}); }
  friend ModuleVec operator-(const ModuleVec& a, const ModuleVec& b) { return zip(a, b, std::minus<>{}); }

  bool operator==(const ModuleVec&) const = default;

  /// Minimum coordinate valuation.
  ValuationResult valuation() const
  {
    ValuationResult v = coords_[0].valuation();
    for (std::size_t i = 1; i < coords_.size(); ++i)
      v = min_valuation(v, coords_[i].valuation());
    return v;
  }

private:
  template<typename F>
  ModuleVec map(F f) const
  {
    std::vector<MadicInt> out;
    out.reserve(coords_.size());
    for (const auto& c : coords_)
      out.push_back(f(c));
    return ModuleVec(std::move(out));
  }

  template<typename F>
  static ModuleVec zip(const ModuleVec& a, const ModuleVec& b, F f)
  {
    if (a.rank() != b.rank())
      throw Error(Errc::RankMismatch, "ranks " + std::to_string(a.rank()) + " and " + std::to_string(b.rank()));
    std::vector<MadicInt> out;
    out.reserve(a.rank());
    for (std::size_t i = 0; i < a.rank(); ++i)
      out.push_back(f(a.coords_[i], b.coords_[i]));
    return ModuleVec(std::move(out));
  }

  std::vector<MadicInt> coords_;
};

inline ValuationResult module_valuation(const ModuleVec& x)
{
  return x.valuation();
}

/// B(x, y) = sum_{p,q} b_pq x_p y_q with integer coefficients, so one form
/// serves every modulus and precision.
class BilinearForm {
public:
  explicit BilinearForm(IntMatrix b) : b_(std::move(b))
  {
    if (b_.empty())
      throw Error(Errc::RankMismatch, "bilinear form needs rank >= 1");
    for (const auto& row : b_) {
      if (row.size() != b_.size())
        throw Error(Errc::RankMismatch, "coefficient matrix must be square");
    }
  }

  BilinearForm(std::initializer_list<std::initializer_list<Integer>> rows)
      : BilinearForm(IntMatrix(rows.begin(), rows.end()))
  {
  }

  static BilinearForm zero(std::size_t rank) { return BilinearForm(IntMatrix(rank, std::vector<Integer>(rank, 0))); }

  std::size_t rank() const noexcept { return b_.size(); }
  const IntMatrix& coefficients() const noexcept { return b_; }

  /// Evaluated over Z; reduce the result into whichever ring is needed.
  Integer eval(std::span<const Integer> x, std::span<const Integer> y) const
  {
    if (x.size() != rank() || y.size() != rank())
      throw Error(Errc::RankMismatch, "vector rank does not match form rank " + std::to_string(rank()));
    Integer acc = 0;
    for (std::size_t p = 0; p < rank(); ++p) {
      if (x[p] == 0)
        continue;
      Integer row = 0;
      for (std::size_t q = 0; q < rank(); ++q)
        row += b_[p][q] * y[q];
      acc += x[p] * row;
    }
    return acc;
  }

  MadicInt operator()(const ModuleVec& x, const ModuleVec& y) const
  {
    if (x.rank() != rank() || y.rank() != rank())
      throw Error(Errc::RankMismatch, "vector rank does not match form rank " + std::to_string(rank()));
    if (x.modulus() != y.modulus())
      throw Error(Errc::ModulusMismatch, "moduli " + to_string(x.modulus()) + " and " + to_string(y.modulus()));
    std::vector<Integer> xv, yv;
    xv.reserve(rank());
    yv.reserve(rank());
    for (std::size_t i = 0; i < rank(); ++i) {
      xv.push_back(x[i].value());
      yv.push_back(y[i].value());
    }
    // Residues mod m^a and m^b give a well-defined value mod m^min(a, b).
    const MadicInt& low = x.precision() <= y.precision() ? x[0] : y[0];
    return low.with_value(eval(xv, yv));
  }

  bool operator==(const BilinearForm&) const = default;

private:
  IntMatrix b_;
};

inline MadicInt bilinear_eval(const BilinearForm& b, const ModuleVec& x, const ModuleVec& y)
{
  return b(x, y);
}

/// Integer-matrix map (m-adic)^N -> (m-adic)^K. Integer matrices send M_j
/// into M_j for every j, so this also gives the induced level maps.
inline ModuleVec apply_linear(const IntMatrix& f, const ModuleVec& x)
{
  if (f.empty())
    throw Error(Errc::RankMismatch, "linear map needs at least one row");
  std::vector<MadicInt> out;
  out.reserve(f.size());
  for (const auto& row : f) {
    if (row.size() != x.rank())
      throw Error(Errc::RankMismatch,
                  "matrix has " + std::to_string(row.size()) + " columns, vector rank " + std::to_string(x.rank()));
    Integer acc = 0;
    for (std::size_t q = 0; q < row.size(); ++q)
      acc += row[q] * x[q].value();
    out.push_back(x[0].with_value(acc));
  }
  return ModuleVec(std::move(out));
}

}  // namespace mhg
