#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace mhg {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

enum class Errc {
  InvalidArgument,
  LengthMismatch,
  RankMismatch,
  ModulusMismatch,
  ContextMismatch,
  PrecisionExceeded,
  NotAUnit,
  NotTopologicallyNilpotent,
  IncoherentSequence,
  LevelTooShallow,
  NotInMultSet,
  ParseError,
};

constexpr std::string_view errc_name(Errc code) noexcept
{
  switch (code) {
  case Errc::InvalidArgument: return "InvalidArgument";
  case Errc::LengthMismatch: return "LengthMismatch";
  case Errc::RankMismatch: return "RankMismatch";
  case Errc::ModulusMismatch: return "ModulusMismatch";
  case Errc::ContextMismatch: return "ContextMismatch";
  case Errc::PrecisionExceeded: return "PrecisionExceeded";
  case Errc::NotAUnit: return "NotAUnit";
  case Errc::NotTopologicallyNilpotent: return "NotTopologicallyNilpotent";
  case Errc::IncoherentSequence: return "IncoherentSequence";
  case Errc::LevelTooShallow: return "LevelTooShallow";
  case Errc::NotInMultSet: return "NotInMultSet";
  case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Domain error raised by every module. `code()` names the failure class;
/// the CLI reports it verbatim.
class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code)
  {}

  Errc code() const noexcept { return code_; }
  std::string_view name() const noexcept { return errc_name(code_); }

private:
  Errc code_;
};

inline Integer ipow(const Integer& base, std::uint64_t exp)
{
  Integer result = 1;
  Integer b = base;
  while (exp != 0) {
    if (exp & 1u)
      result *= b;
    exp >>= 1u;
    if (exp != 0)
      b *= b;
  }
  return result;
}

/// Least nonnegative residue of `x` modulo `m` (m > 0).
inline Integer floor_mod(const Integer& x, const Integer& m)
{
  Integer r = x % m;
  if (r < 0)
    r += m;
  return r;
}

inline Integer igcd(const Integer& a, const Integer& b)
{
  return boost::multiprecision::gcd(a, b);
}

inline Integer iabs(const Integer& a)
{
  return a < 0 ? Integer(-a) : a;
}

inline std::string to_string(const Integer& x)
{
  return x.str();
}

/// Rationals are always written "p/q" with q > 0, including q = 1.
inline std::string to_string(const Rational& q)
{
  return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
}

inline Integer parse_integer(std::string_view text)
{
  std::string s(text);
  std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (i == s.size())
    throw Error(Errc::ParseError, "empty integer literal '" + s + "'");
  for (std::size_t k = i; k < s.size(); ++k) {
    if (s[k] < '0' || s[k] > '9')
      throw Error(Errc::ParseError, "bad integer literal '" + s + "'");
  }
  if (s[0] == '+')
    s.erase(0, 1);
  return Integer(s);
}

/// Accepts "p/q" or a bare integer "p".
inline Rational parse_rational(std::string_view text)
{
  auto slash = text.find('/');
  if (slash == std::string_view::npos)
    return Rational(parse_integer(text));
  Integer num = parse_integer(text.substr(0, slash));
  Integer den = parse_integer(text.substr(slash + 1));
  if (den == 0)
    throw Error(Errc::ParseError, "zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

/// Decimal rendering with a fixed number of fractional digits, truncated
/// toward zero. Used only for human-facing approximations.
inline std::string to_decimal(const Rational& q, unsigned digits = 12)
{
  Integer num = boost::multiprecision::numerator(q);
  Integer den = boost::multiprecision::denominator(q);
  bool negative = num < 0;
  if (negative)
    num = -num;
  Integer whole = num / den;
  Integer frac = ((num % den) * ipow(10, digits)) / den;
  std::string f = frac.str();
  if (f.size() < digits)
    f.insert(0, digits - f.size(), '0');
  std::string out = negative && (whole != 0 || frac != 0) ? "-" : "";
  out += whole.str();
  if (digits != 0)
    out += "." + f;
  return out;
}

template<typename T>
T to_native(const Integer& x)
{
  return x.convert_to<T>();
}

}  // namespace mhg
