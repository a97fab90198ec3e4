#pragma once

#include <json.hpp>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "kclose/kclose.hpp"

namespace kclose::cli {

using nlohmann::ordered_json;

enum ExitCode { kPass = 0, kMismatch = 1, kConfig = 2, kCeiling = 3 };

struct Ceilings {
  long enumeration = 2000000;
  long shells = 200000;
};

/// Every knob of a run. e absent means the field F_q((t)); present means a characteristic 0 field.
struct RunConfig {
  int p = 2;
  int f = 1;
  std::optional<int> e;
  int d = 1;
  int r = 2;
  int l = 1;
  std::optional<int> m;
  int N = 6;
  uint64_t seed = 1;
  int lo = 0;
  std::optional<int> hi;
  int h = 1;
  int k = 2;
  int samples = 100;
  int pairs = 50;
  long pi_order = 1;
  long pi_exp = 0;
  bool diagnostic = false;
  Ceilings ceilings;
  std::string out;
  std::string format = "json";
};

inline ordered_json to_json(const RunConfig& c) {
  ordered_json j;
  j["p"] = c.p;
  j["f"] = c.f;
  j["e"] = c.e ? ordered_json(*c.e) : ordered_json(nullptr);
  j["d"] = c.d;
  j["r"] = c.r;
  j["l"] = c.l;
  j["m"] = c.m ? ordered_json(*c.m) : ordered_json(nullptr);
  j["N"] = c.N;
  j["seed"] = c.seed;
  j["lo"] = c.lo;
  j["hi"] = c.hi ? ordered_json(*c.hi) : ordered_json(nullptr);
  j["h"] = c.h;
  j["k"] = c.k;
  j["samples"] = c.samples;
  j["pairs"] = c.pairs;
  j["pi_order"] = c.pi_order;
  j["pi_exp"] = c.pi_exp;
  j["diagnostic"] = c.diagnostic;
  j["ceilings"] = {{"enumeration", c.ceilings.enumeration}, {"shells", c.ceilings.shells}};
  j["out"] = c.out;
  j["format"] = c.format;
  return j;
}

namespace detail {
template <class T>
void read_opt(const nlohmann::json& j, const char* name, std::optional<T>& v) {
  if (!j.contains(name)) return;
  if (j.at(name).is_null()) v.reset();
  else v = j.at(name).get<T>();
}
template <class T>
void read(const nlohmann::json& j, const char* name, T& v) {
  if (j.contains(name)) v = j.at(name).get<T>();
}
}  // namespace detail

/// Overlays the keys present in j onto c. Unknown keys are a configuration error.
inline void apply_json(const nlohmann::json& j, RunConfig& c) {
  static const std::set<std::string> known = {"p",    "f",  "e",       "d",       "r",        "l",
                                              "m",    "N",  "seed",    "lo",      "hi",       "h",
                                              "k",    "samples",       "pairs",   "pi_order", "pi_exp",
                                              "diagnostic", "ceilings", "out",    "format"};
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");
  try {
    detail::read(j, "p", c.p);
    detail::read(j, "f", c.f);
    detail::read_opt(j, "e", c.e);
    detail::read(j, "d", c.d);
    detail::read(j, "r", c.r);
    detail::read(j, "l", c.l);
    detail::read_opt(j, "m", c.m);
    detail::read(j, "N", c.N);
    detail::read(j, "seed", c.seed);
    detail::read(j, "lo", c.lo);
    detail::read_opt(j, "hi", c.hi);
    detail::read(j, "h", c.h);
    detail::read(j, "k", c.k);
    detail::read(j, "samples", c.samples);
    detail::read(j, "pairs", c.pairs);
    detail::read(j, "pi_order", c.pi_order);
    detail::read(j, "pi_exp", c.pi_exp);
    detail::read(j, "diagnostic", c.diagnostic);
    if (j.contains("ceilings")) {
      detail::read(j.at("ceilings"), "enumeration", c.ceilings.enumeration);
      detail::read(j.at("ceilings"), "shells", c.ceilings.shells);
    }
    detail::read(j, "out", c.out);
    detail::read(j, "format", c.format);
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError(std::string("bad config value: ") + ex.what());
  }
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError("config file " + path + " is not valid JSON: " + ex.what());
  }
  RunConfig c;
  apply_json(j, c);
  return c;
}

inline FieldSpec field_of(const RunConfig& c) {
  return c.e ? make_local_field(0, c.p, c.f, c.e, c.N) : make_local_field(c.p, c.p, c.f, {}, c.N);
}

inline void validate(const RunConfig& c) {
  field_of(c);
  if (c.d < 1) throw ConfigError("d must be >= 1");
  if (c.r < 1) throw ConfigError("r must be >= 1");
  if (c.l < 1) throw ConfigError("l must be >= 1");
  if (c.m && *c.m < 1) throw ConfigError("m must be >= 1");
  if (c.samples < 0 || c.pairs < 0) throw ConfigError("sample counts must be >= 0");
  if (c.k < 0) throw ConfigError("k must be >= 0");
  if (c.pi_order < 1) throw ConfigError("pi_order must be >= 1");
  if (c.ceilings.enumeration < 1 || c.ceilings.shells < 1) throw ConfigError("ceilings must be positive");
  if (c.format != "json" && c.format != "text") throw ConfigError("format must be json or text");
}

/// The partner of the other characteristic: F_q((t)) pairs with e = max(m, N), a characteristic 0 field with F_q((t)).
inline ProximityTriple partner(const RunConfig& c, int m) {
  const FieldSpec s = field_of(c);
  const FieldSpec L = s.equal_char() ? make_local_field(0, c.p, c.f, std::max(m, c.N), c.N)
                                     : make_local_field(c.p, c.p, c.f, {}, c.N);
  return make_proximity(LocalField::make(s), LocalField::make(L), m);
}

// ---- serialization ---------------------------------------------------------------

inline ordered_json to_json(const ProximityReport& r) {
  return {{"name", r.name},   {"k", r.k},           {"m", r.m},           {"formula", r.formula},
          {"seed", r.seed},   {"samples", r.samples}, {"passed", r.passed}, {"failures", r.failures},
          {"ok", r.ok()}};
}

inline ordered_json to_json(const SuiteReport& r) {
  ordered_json j = {{"suite", r.name},         {"params", r.params},     {"checks", r.checks},
                    {"failures", r.failures}, {"warnings", r.warnings}, {"passed", r.ok()}};
  if (!r.details.empty()) {
    j["details"] = ordered_json::array();
    for (const auto& x : r.details) j["details"].push_back(to_json(x));
  }
  return j;
}

inline ordered_json to_json(const EpsilonResult& r) {
  return {{"character", r.character},
          {"niv", r.niv},
          {"niv_D", r.niv_D},
          {"d", r.d},
          {"level_used", r.level_used},
          {"conductor", r.conductor},
          {"epsilon_constant", r.constant.str()},
          {"epsilon_prime_num", ZetaRational::poly_str(r.eps_prime.num())},
          {"epsilon_prime_den", ZetaRational::poly_str(r.eps_prime.den())},
          {"stable", r.stable},
          {"conductor_identity", r.identity_Kl_level},
          {"conductor_identity_PD", r.identity_PD_level}};
}

inline ordered_json to_json(const EpsilonTransferReport& r) {
  ordered_json rows = ordered_json::array();
  for (const auto& c : r.rows)
    rows.push_back({{"source", to_json(c.source)},
                    {"target", to_json(c.target)},
                    {"eps_prime_equal", c.eps_prime_equal},
                    {"eps_equal", c.eps_equal},
                    {"passed", c.ok()}});
  return {{"suite", "epsilon"}, {"params", r.params}, {"l", r.l}, {"rows", rows}, {"passed", r.passed()}};
}

// ---- commands --------------------------------------------------------------------

struct Outcome {
  ordered_json results = ordered_json::array();
  std::vector<std::string> text;
  bool passed = true;
};

inline void add(Outcome& o, const SuiteReport& r) {
  o.results.push_back(to_json(r));
  o.passed = o.passed && r.ok();
  std::ostringstream s;
  s << (r.ok() ? "PASS " : "FAIL ") << r.name << "  " << r.params << "  checks=" << r.checks;
  for (const auto& w : r.warnings) s << "\n  warning: " << w;
  for (const auto& f : r.failures) s << "\n  " << f;
  o.text.push_back(s.str());
}

inline int hi_or(const RunConfig& c, int dflt) { return c.hi.value_or(dflt); }

inline void cmd_volume(const RunConfig& c, Outcome& o) {
  add(o, volume_suite(field_of(c), c.d, c.r, c.l, c.lo, hi_or(c, 2), c.ceilings.enumeration));
}

inline void cmd_cartan(const RunConfig& c, Outcome& o) {
  const FieldSpec s = field_of(c);
  add(o, cartan_suite(s, c.d, c.r, c.lo, hi_or(c, 2), c.samples, c.seed));
  if (c.r >= 2) {
    std::vector<int> a(c.r, c.lo);
    a.back() = c.lo + 1;
    add(o, partition_suite(s, c.d, c.r, c.l, a, c.ceilings.enumeration));
  }
}

inline void cmd_hecke(const RunConfig& c, Outcome& o) {
  add(o, hecke_suite(field_of(c), c.d, c.r, c.l, c.lo, hi_or(c, 2), std::min(c.samples, 10), c.seed,
                     c.ceilings.enumeration));
}

inline void cmd_transfer(const RunConfig& c, Outcome& o) {
  const int hi = hi_or(c, 1);
  const int m = c.m.value_or(c.l + ceil_div(2 * std::max(hi - c.lo, 0), c.d));
  const TransferContext ctx(partner(c, m), c.d, c.h, c.r, c.l, c.d * c.N, c.ceilings.enumeration);
  add(o, transfer_suite(ctx, c.lo, hi, c.diagnostic));
}

inline void cmd_proximity(const RunConfig& c, Outcome& o) {
  const FieldSpec s = field_of(c);
  add(o, proximity_suite(s, ProximityOptions{c.k, c.samples, 3, c.seed}));
  add(o, reduced_suite(s, c.d, c.r, c.samples, c.pairs, c.seed));
  add(o, lambda_suite(s, std::min(c.m.value_or(2), c.N), std::max(c.d, 2)));
  add(o, hensel_suite(s, c.d, std::min(c.m.value_or(2), c.N)));
}

inline void cmd_epsilon(const RunConfig& c, Outcome& o) {
  const int m = c.m.value_or(c.N);
  const EpsilonTransferReport rep = epsilon_transfer_check(partner(c, m), c.d, c.h, c.l, c.pi_order, c.pi_exp,
                                                           ZetaOptions{0, c.ceilings.shells});
  o.results.push_back(to_json(rep));
  o.passed = o.passed && rep.passed();
  std::ostringstream s;
  s << (rep.passed() ? "PASS " : "FAIL ") << "epsilon  " << rep.params << "\n";
  s << std::left << std::setw(14) << "  character" << std::setw(5) << "niv" << std::setw(7) << "niv_D" << std::setw(6)
    << "m" << std::setw(9) << "m=niv+n-1" << "  " << std::setw(7) << "equal" << "epsilon constant";
  for (const auto& row : rep.rows) {
    const auto& x = row.source;
    s << "\n  " << std::setw(12) << x.character << std::setw(5) << x.niv << std::setw(7) << x.niv_D << std::setw(6)
      << x.conductor << std::setw(9) << (x.identity_Kl_level ? "yes" : "no") << "  " << std::setw(7)
      << (row.ok() ? "yes" : "no") << x.constant.str();
  }
  o.text.push_back(s.str());
}

inline std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

struct RunResult {
  int code = kPass;
  ordered_json report;
  std::string text;
};

/// Runs one subcommand (or "all") and builds the report. Errors map to exit codes.
inline RunResult run(const std::string& command, const RunConfig& c, const std::string& timestamp = utc_timestamp()) {
  RunResult res;
  Outcome o;
  std::string error;
  try {
    validate(c);
    const bool all = command == "all";
    bool known = all;
    auto step = [&](const char* name, void (*fn)(const RunConfig&, Outcome&)) {
      if (all || command == name) {
        known = true;
        fn(c, o);
      }
    };
    step("volume", cmd_volume);
    step("cartan", cmd_cartan);
    step("hecke", cmd_hecke);
    step("transfer", cmd_transfer);
    step("proximity", cmd_proximity);
    step("epsilon", cmd_epsilon);
    if (!known) throw ConfigError("unknown command '" + command + "'");
    res.code = o.passed ? kPass : kMismatch;
  } catch (const ConfigError& ex) {
    res.code = kConfig, error = std::string("configuration error: ") + ex.what();
  } catch (const PrecisionError& ex) {
    res.code = kConfig, error = std::string("precision error: ") + ex.what();
  } catch (const CeilingExceeded& ex) {
    res.code = kCeiling, error = std::string("ceiling exceeded: ") + ex.what();
  } catch (const MathError& ex) {
    res.code = kMismatch, error = std::string("mathematical error: ") + ex.what();
  }
  res.report = {{"tool", "kclose"},   {"version", kVersion},  {"command", command},
                {"timestamp", timestamp}, {"config", to_json(c)}, {"results", o.results},
                {"exit_code", res.code},  {"passed", res.code == kPass}};
  if (!error.empty()) {
    res.report["error"] = error;
    o.text.push_back(error);
  }
  std::ostringstream s;
  s << "kclose " << kVersion << " " << command << "\n";
  for (const auto& t : o.text) s << t << "\n";
  s << (res.code == kPass ? "passed" : "failed") << " (exit " << res.code << ")\n";
  res.text = s.str();
  return res;
}

}  // namespace kclose::cli
