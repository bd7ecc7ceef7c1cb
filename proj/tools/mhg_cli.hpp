#pragma once

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mhg/mhg.hpp"
#include "mhg/selftest.hpp"

namespace mhg::cli {

using io::json;

inline constexpr int kOk = 0;
inline constexpr int kDomainError = 1;
inline constexpr int kUsageError = 2;

/// Bad or missing flag; the message names the flag.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Flag values with fallbacks: command line, then --file, then the config
/// file (--config or $MHG_CONFIG).
class Inputs {
public:
  void bind(CLI::App& app, const std::string& key, const std::string& help)
  {
    options_[key] = app.add_option("--" + key, values_[key], help);
  }

  void load_sources()
  {
    if (auto path = flag("file"))
      file_ = read_json_file(*path, "--file");
    std::optional<std::string> config = flag("config");
    if (!config) {
      if (const char* env = std::getenv("MHG_CONFIG"); env && *env)
        config = env;
    }
    if (config)
      config_ = read_json_file(*config, "--config");
  }

  std::optional<std::string> raw(const std::string& key) const
  {
    if (auto v = flag(key))
      return v;
    for (const json* src : {&file_, &config_}) {
      if (src->is_object() && src->contains(key)) {
        const json& v = src->at(key);
        return v.is_string() ? v.get<std::string>() : v.dump();
      }
    }
    return std::nullopt;
  }

  bool has(const std::string& key) const { return raw(key).has_value(); }

  std::string text(const std::string& key) const
  {
    auto v = raw(key);
    if (!v)
      throw UsageError("missing required flag --" + key);
    return *v;
  }

  std::string text_or(const std::string& key, const std::string& fallback) const { return raw(key).value_or(fallback); }

  Integer integer(const std::string& key) const
  {
    try {
      return parse_integer(text(key));
    } catch (const Error& e) {
      throw UsageError("--" + key + ": " + e.what());
    }
  }

  Integer integer_or(const std::string& key, const Integer& fallback) const
  {
    return has(key) ? integer(key) : fallback;
  }

  std::uint64_t count(const std::string& key) const
  {
    Integer v = integer(key);
    if (v < 0 || v > Integer(std::numeric_limits<std::uint32_t>::max()))
      throw UsageError("--" + key + ": expected a non-negative integer, got " + to_string(v));
    return v.convert_to<std::uint64_t>();
  }

  std::uint64_t count_or(const std::string& key, std::uint64_t fallback) const
  {
    return has(key) ? count(key) : fallback;
  }

  json value(const std::string& key) const
  {
    std::string t = text(key);
    try {
      return json::parse(t);
    } catch (const json::parse_error&) {
      throw UsageError("--" + key + ": not valid JSON: " + t);
    }
  }

private:
  std::optional<std::string> flag(const std::string& key) const
  {
    auto it = options_.find(key);
    if (it == options_.end() || it->second->count() == 0)
      return std::nullopt;
    return values_.at(key);
  }

  static json read_json_file(const std::string& path, const std::string& flag)
  {
    std::ifstream in(path);
    if (!in)
      throw UsageError(flag + ": cannot open " + path);
    try {
      json j = json::parse(in);
      if (!j.is_object())
        throw UsageError(flag + ": " + path + " must hold a JSON object");
      return j;
    } catch (const json::parse_error& e) {
      throw UsageError(flag + ": " + path + " is not valid JSON: " + e.what());
    }
  }

  std::map<std::string, std::string> values_;
  std::map<std::string, CLI::Option*> options_;
  json file_ = json::object();
  json config_ = json::object();
};

namespace detail {

// Converts library parse failures on flag values into usage errors.
template<typename F>
auto from_flag(const std::string& key, F f) -> decltype(f())
{
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == Errc::ParseError)
      throw UsageError("--" + key + ": " + e.what());
    throw;
  } catch (const json::exception& e) {
    throw UsageError("--" + key + ": " + e.what());
  }
}

inline RadiusProfile profile(const Inputs& in)
{
  if (!in.has("profile"))
    return RadiusProfile::geometric(Rational(1, 2));
  std::string t = in.text("profile");
  return detail::from_flag("profile", [&] {
    // A bare rational is shorthand for a geometric profile.
    if (!t.empty() && t.front() != '{')
      return RadiusProfile::geometric(parse_rational(t));
    return io::profile_from(in.value("profile"));
  });
}

inline HeisenbergContext context(const Inputs& in, std::optional<std::uint64_t> default_precision = std::nullopt)
{
  Integer m = in.integer("m");
  BilinearForm form = from_flag("b", [&] { return BilinearForm(io::matrix_from(in.value("b"))); });
  if (in.has("N") && in.count("N") != form.rank())
    throw UsageError("--N " + in.text("N") + " does not match the " + std::to_string(form.rank()) + "x" +
                     std::to_string(form.rank()) + " matrix given by --b");
  std::uint64_t n = default_precision ? in.count_or("n", *default_precision) : in.count("n");
  return HeisenbergContext(m, std::move(form), static_cast<std::uint32_t>(n), profile(in));
}

inline HPoint point(const Inputs& in, const HeisenbergContext& ctx, const std::string& key)
{
  json j = in.value(key);
  return from_flag(key, [&] { return io::point_from(ctx, j); });
}

inline ChainFamily family(const Inputs& in, const std::string& fallback)
{
  std::string t = in.text_or("family", fallback);
  return from_flag("family", [&] { return io::family_from(t); });
}

inline ChainSpec chain(const Inputs& in, const std::string& key)
{
  std::string t = in.text(key);
  return from_flag(key, [&] {
    if (!t.empty() && t.front() == '{')
      return io::chain_from(in.value(key));
    return ChainSpec::ideal_power(parse_integer(t));
  });
}

inline Localization localization(const Inputs& in)
{
  BaseRing ring = from_flag("ring", [&] { return io::ring_from(in.text_or("ring", "Z")); });
  // A bare array [g1, g2, ...] is shorthand for the set those generate.
  MultSet set = from_flag("S", [&] {
    json j = in.value("S");
    return io::multset_from(j.is_array() ? json{{"kind", "generated"}, {"gens", j}} : j);
  });
  return Localization(std::move(ring), std::move(set));
}

/// "a/s" or "a" (denominator e), both kept as written.
inline Fraction fraction(const Inputs& in, const Localization& loc, const std::string& key)
{
  std::string t = in.text(key);
  auto slash = t.find('/');
  return from_flag(key, [&] {
    Integer a = parse_integer(t.substr(0, slash));
    Integer s = slash == std::string::npos ? Integer(1) : parse_integer(t.substr(slash + 1));
    return loc.make(a, s);
  });
}

inline void require_json(const Inputs& in)
{
  std::string f = in.text_or("format", "json");
  if (f != "json")
    throw UsageError("--format " + f + " is not available here (only json)");
}

}  // namespace detail

// --- subcommands -------------------------------------------------------------

inline json run_dist(const Inputs& in)
{
  if (in.has("g") || in.has("h")) {
    HeisenbergContext ctx = detail::context(in);
    HPoint g = detail::point(in, ctx, "g"), h = detail::point(in, ctx, "h");
    return io::to_json(ctx.distance(g, h, detail::family(in, "H")));
  }
  ChainSpec chain = in.has("chain") ? detail::chain(in, "chain") : ChainSpec::ideal_power(in.integer("m"));
  return io::to_json(distance(in.integer("x"), in.integer("y"), chain, detail::profile(in)));
}

inline json run_mul(const Inputs& in)
{
  HeisenbergContext ctx = detail::context(in);
  return io::to_json(ctx.mul(detail::point(in, ctx, "g"), detail::point(in, ctx, "h")));
}

inline json run_inv(const Inputs& in)
{
  HeisenbergContext ctx = detail::context(in);
  return io::to_json(ctx.inv(detail::point(in, ctx, "g")));
}

inline json run_conj(const Inputs& in)
{
  HeisenbergContext ctx = detail::context(in);
  return io::to_json(ctx.conjugate(detail::point(in, ctx, "g"), detail::point(in, ctx, "h")));
}

inline json run_dilate(const Inputs& in)
{
  HeisenbergContext ctx = detail::context(in);
  return io::to_json(ctx.dilate(in.integer("r"), detail::point(in, ctx, "g")));
}

inline json run_member(const Inputs& in)
{
  HeisenbergContext ctx = detail::context(in);
  ChainFamily fam = detail::family(in, "G");
  std::uint64_t j = in.count("j");
  Membership r = ctx.member(detail::point(in, ctx, "g"), fam, j);
  return json{{"family", std::string(family_name(fam))}, {"j", j}, {"member", std::string(membership_name(r))}};
}

inline void run_cosets(const Inputs& in, std::ostream& out)
{
  ChainFamily fam = detail::family(in, "G");
  std::uint64_t level = in.count("level");
  HeisenbergContext ctx = detail::context(in, std::max<std::uint64_t>(1, central_depth(fam, level)));
  CosetReps reps = enumerate_cosets(ctx, fam, level);
  std::string format = in.text_or("format", "csv");
  if (format == "json") {
    json list = json::array();
    for (const auto& r : reps.reps)
      list.push_back(io::to_json(r));
    out << io::dump_line(json{{"family", std::string(family_name(fam))},
                              {"level", level},
                              {"count", reps.reps.size()},
                              {"reps", list}})
        << '\n';
    return;
  }
  if (format != "csv")
    throw UsageError("--format must be csv or json, got " + format);
  out << "index";
  for (std::size_t i = 1; i <= ctx.rank(); ++i)
    out << ",x_" << i;
  out << ",s\n";
  for (std::size_t k = 0; k < reps.reps.size(); ++k) {
    out << k;
    for (const auto& c : reps.reps[k].x.coords())
      out << ',' << c.value();
    out << ',' << reps.reps[k].s.value() << '\n';
  }
}

inline json run_haar(const Inputs& in)
{
  std::string fn = in.text_or("function", "const1");
  json table;
  ChainFamily fam = ChainFamily::G;
  std::uint64_t level = 0;
  if (fn == "table") {
    table = in.value("table");
    fam = detail::from_flag("table", [&] { return io::family_from(io::string_field(table, "family")); });
    level = detail::from_flag("table", [&] { return io::field(table, "level").get<std::uint64_t>(); });
  } else if (fn == "const1" || fn == "indicator") {
    fam = detail::family(in, "G");
    level = in.count("level");
  } else {
    throw UsageError("--function must be const1, indicator or table, got " + fn);
  }
  std::uint64_t at = in.count_or("at", level);
  bool right = in.has("translate") && in.text_or("side", "left") == "right";
  std::uint64_t deepest = std::max(at, right && fam == ChainFamily::G ? 2 * level : level);
  HeisenbergContext ctx = detail::context(in, std::max<std::uint64_t>(1, central_depth(fam, deepest)));

  CylinderFunction f = fn == "table"       ? detail::from_flag("table", [&] { return io::cylinder_from(ctx, table); })
                       : fn == "indicator" ? CylinderFunction::identity_indicator(ctx, fam, level)
                                           : CylinderFunction::constant(ctx, fam, level, 1);
  if (in.has("translate")) {
    std::string side = in.text_or("side", "left");
    if (side != "left" && side != "right")
      throw UsageError("--side must be left or right, got " + side);
    f = translate(ctx, f, detail::point(in, ctx, "translate"), side == "left" ? Side::Left : Side::Right);
    at = std::max(at, f.level());
  }
  Rational value = integrate(ctx, f, at);
  json out{{"integral", to_string(value)}};
  if (in.has("decimal"))
    out["decimal"] = to_decimal(value, static_cast<int>(in.count("decimal")));
  return out;
}

inline json run_check_normal(const Inputs& in)
{
  ChainFamily fam = detail::family(in, "G");
  std::uint64_t j = in.count("j");
  std::uint64_t L = in.count("L");
  HeisenbergContext ctx = detail::context(in, L);
  if (in.has("a")) {
    std::uint64_t depth = in.count_or("depth", 2 * j);
    return io::to_json(check_weak_normality(ctx, fam, detail::point(in, ctx, "a"), j, depth, L));
  }
  return io::to_json(check_normality(ctx, fam, j, L, static_cast<unsigned>(in.count_or("jobs", 1))));
}

inline json run_check_equiv(const Inputs& in)
{
  ChainSpec a = detail::chain(in, "chain-a"), b = detail::chain(in, "chain-b");
  std::uint64_t depth = in.count("depth");
  std::optional<std::uint64_t> search;
  if (in.has("search-depth"))
    search = in.count("search-depth");
  return io::to_json(check_chain_equivalence(a, b, depth, search));
}

inline json run_frac(const Inputs& in)
{
  Localization loc = detail::localization(in);
  std::string op = in.text("op");
  if (op == "add" || op == "mul") {
    Fraction p = detail::fraction(in, loc, "p"), q = detail::fraction(in, loc, "q");
    return io::to_json(loc, op == "add" ? loc.add(p, q) : loc.mul(p, q));
  }
  if (op == "equal")
    return json{{"equal", loc.equal(detail::fraction(in, loc, "p"), detail::fraction(in, loc, "q"))}};
  if (op == "member")
    return json{{"member", loc.contains(in.integer("v"))}};
  if (op == "canonical")
    return io::to_json(loc, loc.canonical(in.integer("v")));
  if (op == "kernel") {
    auto w = loc.kernel_witness(in.integer("v"));
    return json{{"witness", w ? json(w->str()) : json(nullptr)}};
  }
  if (op == "closure") {
    json list = json::array();
    for (const auto& v : loc.closure())
      list.push_back(io::integer_json(v));
    return json{{"ring", loc.ring().name()}, {"closure", list}};
  }
  throw UsageError("--op must be add, mul, equal, member, canonical, kernel or closure, got " + op);
}

inline int run_selftest(const Inputs& in, std::ostream& out)
{
  std::uint64_t seed = in.count_or("seed", 0);
  std::uint64_t samples = in.count_or("samples", 500);
  bool all = true;
  json checks = json::array();
  for (const auto& r : mhg::run_selftest(seed, samples)) {
    all = all && r.passed;
    json c{{"name", r.name}, {"passed", r.passed}};
    if (!r.passed)
      c["detail"] = r.detail;
    checks.push_back(c);
  }
  out << io::dump_line(json{{"seed", seed}, {"samples", samples}, {"passed", all}, {"checks", checks}}) << '\n';
  return all ? kOk : kDomainError;
}

// --- dispatch ----------------------------------------------------------------

struct Command {
  const char* name;
  const char* help;
  std::vector<std::pair<const char*, const char*>> flags;
};

inline const std::vector<std::pair<const char*, const char*>>& context_flags()
{
  static const std::vector<std::pair<const char*, const char*>> flags{
      {"m", "modulus m >= 2"},
      {"N", "rank (optional, checked against --b)"},
      {"b", "bilinear form as a JSON matrix, e.g. [[0,1],[0,0]]"},
      {"n", "working precision"},
      {"profile", "radius profile: a rational base like 1/2, or profile JSON"},
  };
  return flags;
}

inline const std::vector<Command>& commands()
{
  static const std::vector<Command> list{
      {"dist",
       "ultrametric distance of integers (--x --y) or of group points (--g --h)",
       {{"x", "first integer"}, {"y", "second integer"}, {"chain", "chain JSON or an integer m"},
        {"g", "first point JSON"}, {"h", "second point JSON"}, {"family", "H or G (default H)"}}},
      {"mul", "group product g <> h", {{"g", "left point JSON"}, {"h", "right point JSON"}}},
      {"inv", "group inverse", {{"g", "point JSON"}}},
      {"conj", "conjugate g <> h <> g^-1", {{"g", "conjugating point JSON"}, {"h", "point JSON"}}},
      {"dilate", "dilation delta_r", {{"r", "integer scale"}, {"g", "point JSON"}}},
      {"member", "chain membership", {{"g", "point JSON"}, {"family", "H or G (default G)"}, {"j", "chain level"}}},
      {"cosets", "canonical left-coset representatives", {{"family", "H or G (default G)"}, {"level", "level"}}},
      {"haar",
       "exact Haar integral of a cylinder function",
       {{"function", "const1, indicator or table"}, {"family", "H or G (default G)"}, {"level", "function level"},
        {"table", "cylinder function JSON"}, {"at", "integration level (default: function level)"},
        {"translate", "translate the function by this point first"}, {"side", "left or right"},
        {"decimal", "also print a decimal approximation with this many digits"}}},
      {"check-normal",
       "normality (or, with --a, weak normality) in G/H_L",
       {{"family", "H or G (default G)"}, {"j", "chain level"}, {"L", "quotient level"},
        {"a", "conjugator for the weak check"}, {"depth", "search depth for the weak check (default 2j)"},
        {"jobs", "worker threads"}}},
      {"check-equiv",
       "topological equivalence of two ideal chains",
       {{"chain-a", "chain JSON or an integer m"}, {"chain-b", "chain JSON or an integer m"}, {"depth", "depth"},
        {"search-depth", "witness search bound (default 2*depth)"}}},
      {"frac",
       "rings of fractions",
       {{"ring", "Z or Z/k (default Z)"}, {"S", "multiplicative set JSON, or a generator array like [2]"},
        {"op", "add, mul, equal, member, canonical, kernel or closure"}, {"p", "fraction a/s"},
        {"q", "fraction b/t"}, {"v", "ring element"}}},
      {"selftest", "randomized property sweep", {{"seed", "RNG seed"}, {"samples", "samples per check"}}},
  };
  return list;
}

inline bool uses_context(const std::string& name)
{
  return name != "check-equiv" && name != "frac" && name != "selftest";
}

/// Runs one invocation. Output goes to `out`, diagnostics to `err`; the
/// return value is the process exit code.
inline int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Exact arithmetic on m-adic Heisenberg groups", "mhg"};
  app.require_subcommand(1);
  // Points are passed as --g and --h, so help is long-form only.
  app.set_help_flag("--help", "print help and exit");
  std::map<std::string, Inputs> inputs;
  for (const auto& cmd : commands()) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    sub->set_help_flag("--help", "print help and exit");
    Inputs& in = inputs[cmd.name];
    std::vector<std::pair<const char*, const char*>> flags = cmd.flags;
    if (uses_context(cmd.name))
      flags.insert(flags.end(), context_flags().begin(), context_flags().end());
    if (std::string(cmd.name) == "dist")
      flags.emplace_back("m", "modulus m >= 2");
    flags.emplace_back("format", std::string(cmd.name) == "cosets" ? "csv (default) or json" : "json");
    flags.emplace_back("file", "JSON object supplying flag values");
    flags.emplace_back("config", "JSON config with default flag values (else $MHG_CONFIG)");
    std::set<std::string> seen;
    for (const auto& [key, help] : flags) {
      if (seen.insert(key).second)
        in.bind(*sub, key, help);
    }
  }

  std::vector<const char*> argv{"mhg"};
  for (const auto& a : args)
    argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    if (!app.get_subcommands().empty())
      err << "run 'mhg " << app.get_subcommands().front()->get_name() << " --help' for the flag list\n";
    return kUsageError;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  Inputs& in = inputs[name];
  try {
    in.load_sources();
    if (name == "selftest") {
      detail::require_json(in);
      return run_selftest(in, out);
    }
    if (name == "cosets") {
      run_cosets(in, out);
      return kOk;
    }
    detail::require_json(in);
    json result = name == "dist"           ? run_dist(in)
                  : name == "mul"          ? run_mul(in)
                  : name == "inv"          ? run_inv(in)
                  : name == "conj"         ? run_conj(in)
                  : name == "dilate"       ? run_dilate(in)
                  : name == "member"       ? run_member(in)
                  : name == "haar"         ? run_haar(in)
                  : name == "check-normal" ? run_check_normal(in)
                  : name == "check-equiv"  ? run_check_equiv(in)
                                           : run_frac(in);
    out << io::dump_line(result) << '\n';
    return kOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kDomainError;
  }
}

}  // namespace mhg::cli
