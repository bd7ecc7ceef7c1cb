#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "core.hpp"
#include "fractions.hpp"
#include "haar.hpp"
#include "heisenberg.hpp"
#include "hmodule.hpp"
#include "madic.hpp"
#include "tower.hpp"

namespace mhg::io {

/// Insertion-ordered so output key order is fixed.
using json = nlohmann::ordered_json;

/// One-line rendering with ", " and ": " separators, e.g.
/// {"valuation": 3, "radius": "1/8"}.
inline void write_line(const json& j, std::string& out)
{
  switch (j.type()) {
  case json::value_t::object: {
    out += '{';
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first)
        out += ", ";
      first = false;
      out += json(it.key()).dump();
      out += ": ";
      write_line(it.value(), out);
    }
    out += '}';
    break;
  }
  case json::value_t::array: {
    out += '[';
    bool first = true;
    for (const auto& v : j) {
      if (!first)
        out += ", ";
      first = false;
      write_line(v, out);
    }
    out += ']';
    break;
  }
  default:
    out += j.dump();
  }
}

inline std::string dump_line(const json& j)
{
  std::string out;
  write_line(j, out);
  return out;
}

/// Small integers as JSON numbers, anything wider as a decimal string.
inline json integer_json(const Integer& x)
{
  if (x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max())
    return x.convert_to<std::int64_t>();
  return x.str();
}

inline Integer integer_from(const json& j)
{
  if (j.is_number_integer())
    return Integer(j.get<std::int64_t>());
  if (j.is_number_unsigned())
    return Integer(j.get<std::uint64_t>());
  if (j.is_string())
    return parse_integer(j.get<std::string>());
  throw Error(Errc::ParseError, "expected an integer, got " + j.dump());
}

inline Rational rational_from(const json& j)
{
  if (j.is_string())
    return parse_rational(j.get<std::string>());
  return Rational(integer_from(j));
}

inline const json& field(const json& j, const char* key)
{
  if (!j.is_object() || !j.contains(key))
    throw Error(Errc::ParseError, std::string("missing field '") + key + "' in " + j.dump());
  return j.at(key);
}

inline std::string string_field(const json& j, const char* key)
{
  const json& v = field(j, key);
  if (!v.is_string())
    throw Error(Errc::ParseError, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

// --- tower -----------------------------------------------------------------

inline json to_json(const ChainSpec& c)
{
  if (c.is_ideal_power())
    return json{{"kind", "ideal_power"}, {"m", integer_json(c.base())}};
  json moduli = json::array();
  for (const auto& g : c.moduli())
    moduli.push_back(integer_json(g));
  return json{{"kind", "explicit"}, {"moduli", moduli}};
}

inline ChainSpec chain_from(const json& j)
{
  std::string kind = string_field(j, "kind");
  if (kind == "ideal_power")
    return ChainSpec::ideal_power(integer_from(field(j, "m")));
  if (kind == "explicit") {
    std::vector<Integer> moduli;
    for (const auto& g : field(j, "moduli"))
      moduli.push_back(integer_from(g));
    return ChainSpec::explicit_moduli(std::move(moduli));
  }
  throw Error(Errc::ParseError, "unknown chain kind '" + kind + "'");
}

inline json to_json(const RadiusProfile& p)
{
  if (p.is_geometric())
    return json{{"kind", "geometric"}, {"base", to_string(p.base())}};
  json values = json::array();
  for (const auto& v : p.values())
    values.push_back(to_string(v));
  return json{{"kind", "explicit"}, {"values", values}, {"tail_ratio", to_string(p.tail_ratio())}};
}

inline RadiusProfile profile_from(const json& j)
{
  std::string kind = string_field(j, "kind");
  if (kind == "geometric")
    return RadiusProfile::geometric(rational_from(field(j, "base")));
  if (kind == "explicit") {
    std::vector<Rational> values;
    for (const auto& v : field(j, "values"))
      values.push_back(rational_from(v));
    std::optional<Rational> tail;
    if (j.contains("tail_ratio"))
      tail = rational_from(j.at("tail_ratio"));
    return RadiusProfile::explicit_values(std::move(values), std::move(tail));
  }
  throw Error(Errc::ParseError, "unknown profile kind '" + kind + "'");
}

inline json to_json(const Valuation& v)
{
  if (v.is_infinite())
    return "inf";
  return v.value();
}

inline json to_json(const UltraDistance& d)
{
  return json{{"valuation", to_json(d.valuation)}, {"radius", to_string(d.radius)}};
}

inline json to_json(const EquivalenceReport& r)
{
  json out{{"verdict", r.equivalent ? "Equivalent" : "NotEquivalentUpToDepth"},
           {"depth", r.depth},
           {"search_depth", r.search_depth},
           {"b_in_a", r.b_in_a},
           {"a_in_b", r.a_in_b}};
  if (r.failure) {
    out["failure"] = json{{"direction", r.failure->first == EquivalenceDirection::BInA ? "B_l in A_j" : "A_n in B_k"},
                          {"index", r.failure->second}};
  }
  return out;
}

// --- madic / hmodule ---------------------------------------------------------

inline json to_json(const MadicInt& x)
{
  return json{{"m", integer_json(x.modulus())}, {"n", x.precision()}, {"value", x.value().str()}};
}

inline MadicInt madic_from(const json& j)
{
  std::uint64_t n = field(j, "n").get<std::uint64_t>();
  if (n > std::numeric_limits<std::uint32_t>::max())
    throw Error(Errc::ParseError, "precision out of range");
  return MadicInt(integer_from(field(j, "m")), static_cast<std::uint32_t>(n), integer_from(field(j, "value")));
}

inline json to_json(const ValuationResult& v)
{
  return json{{"kind", v.is_exact() ? "Exact" : "AtLeast"}, {"value", v.bound()}};
}

inline json to_json(const ModuleVec& v)
{
  json out = json::array();
  for (const auto& c : v.coords())
    out.push_back(to_json(c));
  return out;
}

inline IntMatrix matrix_from(const json& j)
{
  if (!j.is_array())
    throw Error(Errc::ParseError, "matrix must be an array of rows");
  IntMatrix m;
  for (const auto& row : j) {
    if (!row.is_array())
      throw Error(Errc::ParseError, "matrix rows must be arrays");
    std::vector<Integer> r;
    for (const auto& v : row)
      r.push_back(integer_from(v));
    m.push_back(std::move(r));
  }
  return m;
}

inline json to_json(const BilinearForm& b)
{
  json rows = json::array();
  for (const auto& row : b.coefficients()) {
    json r = json::array();
    for (const auto& v : row)
      r.push_back(integer_json(v));
    rows.push_back(r);
  }
  return json{{"N", b.rank()}, {"b", rows}};
}

inline BilinearForm form_from(const json& j)
{
  BilinearForm b(matrix_from(field(j, "b")));
  if (j.contains("N") && j.at("N").get<std::size_t>() != b.rank())
    throw Error(Errc::RankMismatch, "declared N does not match the matrix");
  return b;
}

// --- heisenberg --------------------------------------------------------------

inline json to_json(const HPoint& g)
{
  return json{{"x", to_json(g.x)}, {"s", to_json(g.s)}};
}

/// Coordinates may be full MadicInt objects or plain integers, which are
/// reduced into the context.
inline HPoint point_from(const HeisenbergContext& ctx, const json& j)
{
  auto coord = [&](const json& c) -> Integer {
    if (c.is_object()) {
      MadicInt v = madic_from(c);
      if (v.modulus() != ctx.modulus())
        throw Error(Errc::ContextMismatch, "coordinate modulus " + to_string(v.modulus()) + " differs from context");
      if (v.precision() != ctx.precision())
        throw Error(Errc::ContextMismatch, "coordinate precision differs from context");
      return v.value();
    }
    return integer_from(c);
  };
  const json& xs = field(j, "x");
  if (!xs.is_array())
    throw Error(Errc::ParseError, "point field 'x' must be an array");
  std::vector<Integer> x;
  for (const auto& c : xs)
    x.push_back(coord(c));
  return ctx.point(x, coord(field(j, "s")));
}

inline ChainFamily family_from(const std::string& name)
{
  if (name == "H")
    return ChainFamily::H;
  if (name == "G" || name == "E")
    return ChainFamily::G;
  throw Error(Errc::ParseError, "unknown chain family '" + name + "' (expected H or G)");
}

inline json to_json(const GroupDistance& d)
{
  return json{{"valuation", to_json(d.valuation)}, {"radius", to_string(d.radius)}};
}

inline json to_json(const NormalityReport& r)
{
  json out{{"verdict", r.verdict == NormalityVerdict::Normal ? "Normal" : "NotNormal"}};
  if (r.witness) {
    out["witness"] = json{{"conjugator", to_json(r.witness->conjugator)},
                          {"element", to_json(r.witness->element)},
                          {"conjugate", to_json(r.witness->conjugate)}};
  } else {
    out["witness"] = nullptr;
  }
  out["family"] = std::string(family_name(r.family));
  out["j"] = r.j;
  out["level"] = r.level;
  out["certificate_scope"] = r.certificate_scope;
  return out;
}

inline json to_json(const WeakNormalityReport& r)
{
  json out{{"verdict", r.found_level ? "FoundLevel" : "NotFoundUpToDepth"}};
  out["witness"] = r.found_level ? json(*r.found_level) : json(nullptr);
  out["family"] = std::string(family_name(r.family));
  out["j"] = r.j;
  out["depth"] = r.depth;
  out["level"] = r.level;
  out["certificate_scope"] = r.certificate_scope;
  return out;
}

// --- haar --------------------------------------------------------------------

inline json to_json(const HeisenbergContext& ctx, const CylinderFunction& f)
{
  CosetReps reps = enumerate_cosets(ctx, f.family(), f.level());
  json entries = json::array();
  for (std::size_t i = 0; i < reps.reps.size(); ++i)
    entries.push_back(json{{"rep", to_json(reps.reps[i])}, {"value", to_string(f.table()[i])}});
  return json{{"level", f.level()}, {"family", std::string(family_name(f.family()))}, {"entries", entries}};
}

/// Entries may come in any order and with non-canonical representatives;
/// each is placed at its coset, and every coset must be covered once.
inline CylinderFunction cylinder_from(const HeisenbergContext& ctx, const json& j)
{
  std::uint64_t level = field(j, "level").get<std::uint64_t>();
  ChainFamily family = family_from(string_field(j, "family"));
  detail::require_level(ctx, family, level);
  std::size_t count = coset_count(ctx, family, level).convert_to<std::size_t>();
  std::vector<std::optional<Rational>> slots(count);
  for (const auto& e : field(j, "entries")) {
    HPoint rep = point_from(ctx, field(e, "rep"));
    std::uint64_t idx = coset_index(ctx, rep, family, level);
    if (slots[idx])
      throw Error(Errc::ParseError, "two entries name the same coset");
    slots[idx] = rational_from(field(e, "value"));
  }
  std::vector<Rational> table;
  table.reserve(count);
  for (auto& s : slots) {
    if (!s)
      throw Error(Errc::LengthMismatch, "cylinder function table misses a coset");
    table.push_back(std::move(*s));
  }
  return CylinderFunction(ctx, family, level, std::move(table));
}

// --- fractions ---------------------------------------------------------------

inline BaseRing ring_from(const std::string& name)
{
  if (name == "Z")
    return BaseRing::integers();
  if (name.rfind("Z/", 0) == 0)
    return BaseRing::integers_mod(parse_integer(name.substr(2)));
  throw Error(Errc::ParseError, "unknown ring '" + name + "' (expected Z or Z/k)");
}

inline json to_json(const MultSet& s)
{
  if (s.kind() == MultSet::Kind::OnePlusIdeal)
    return json{{"kind", "one_plus_ideal"}, {"m", integer_json(s.ideal_generator())}};
  json gens = json::array();
  for (const auto& g : s.gens())
    gens.push_back(integer_json(g));
  return json{{"kind", "generated"}, {"gens", gens}};
}

inline MultSet multset_from(const json& j)
{
  std::string kind = string_field(j, "kind");
  if (kind == "generated") {
    std::vector<Integer> gens;
    for (const auto& g : field(j, "gens"))
      gens.push_back(integer_from(g));
    return MultSet::generated(std::move(gens));
  }
  if (kind == "one_plus_ideal")
    return MultSet::one_plus_ideal(integer_from(field(j, "m")));
  throw Error(Errc::ParseError, "unknown multiplicative set kind '" + kind + "'");
}

inline json to_json(const Localization& loc, const Fraction& f)
{
  return json{{"ring", loc.ring().name()}, {"S", to_json(loc.set())}, {"num", f.num.str()}, {"den", f.den.str()}};
}

inline std::pair<Localization, Fraction> fraction_from(const json& j)
{
  Localization loc(ring_from(string_field(j, "ring")), multset_from(field(j, "S")));
  Fraction f = loc.make(integer_from(field(j, "num")), integer_from(field(j, "den")));
  return {std::move(loc), std::move(f)};
}

}  // namespace mhg::io
