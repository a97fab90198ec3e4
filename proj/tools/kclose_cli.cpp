#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "cli.hpp"

using namespace kclose::cli;

namespace {

struct Flags {
  std::optional<int> p, f, e, d, r, l, m, N, lo, hi, h, k, samples, pairs;
  std::optional<uint64_t> seed;
  std::optional<long> pi_order, pi_exp, enumeration, shells;
  std::optional<std::string> out, format;
  bool diagnostic = false;
  bool char_p = false;
  std::string config;
};

template <class T>
void over(const std::optional<T>& flag, T& v) {
  if (flag) v = *flag;
}

RunConfig resolve(const Flags& fl) {
  RunConfig c = fl.config.empty() ? RunConfig{} : load_config(fl.config);
  over(fl.p, c.p);
  over(fl.f, c.f);
  if (fl.e) c.e = fl.e;
  if (fl.char_p) c.e.reset();
  over(fl.d, c.d);
  over(fl.r, c.r);
  over(fl.l, c.l);
  if (fl.m) c.m = fl.m;
  over(fl.N, c.N);
  over(fl.seed, c.seed);
  over(fl.lo, c.lo);
  if (fl.hi) c.hi = fl.hi;
  over(fl.h, c.h);
  over(fl.k, c.k);
  over(fl.samples, c.samples);
  over(fl.pairs, c.pairs);
  over(fl.pi_order, c.pi_order);
  over(fl.pi_exp, c.pi_exp);
  over(fl.enumeration, c.ceilings.enumeration);
  over(fl.shells, c.ceilings.shells);
  over(fl.out, c.out);
  over(fl.format, c.format);
  if (fl.diagnostic) c.diagnostic = true;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact verification of close local fields, GL_r(D) Hecke algebras and epsilon factors"};
  app.set_version_flag("--version", std::string(kclose::kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  Flags fl;
  app.add_option("--config", fl.config, "JSON config file; flags override its values");
  app.add_option("-p,--p", fl.p, "residue characteristic");
  app.add_option("-f,--f", fl.f, "residue degree");
  app.add_option("-e,--e", fl.e, "ramification index of a characteristic 0 field (omit for F_q((t)))");
  app.add_flag("--char-p", fl.char_p, "force F_q((t)) even if the config sets e");
  app.add_option("-d,--d", fl.d, "degree of the division algebra");
  app.add_option("-r,--r", fl.r, "matrix rank");
  app.add_option("-l,--l", fl.l, "level of the congruence subgroup");
  app.add_option("-m,--m", fl.m, "closeness level");
  app.add_option("-N,--N", fl.N, "precision in P_F units");
  app.add_option("--seed", fl.seed, "sampling seed");
  app.add_option("--lo", fl.lo, "smallest exponent in sweeps");
  app.add_option("--hi", fl.hi, "largest exponent in sweeps");
  app.add_option("--hasse", fl.h, "Hasse invariant numerator h");
  app.add_option("-k,--k", fl.k, "proximity target level");
  app.add_option("--samples", fl.samples, "samples per sampled check");
  app.add_option("--pairs", fl.pairs, "sampled pairs for multiplicativity checks");
  app.add_option("--pi-order", fl.pi_order, "order of chi(pi) as a root of unity");
  app.add_option("--pi-exp", fl.pi_exp, "chi(pi) = zeta_{pi-order}^{pi-exp}");
  app.add_option("--enumeration-ceiling", fl.enumeration, "maximum cosets or group elements enumerated");
  app.add_option("--shell-ceiling", fl.shells, "maximum units averaged per zeta shell");
  app.add_flag("--diagnostic", fl.diagnostic, "allow transfer runs below the Kazhdan bound");
  app.add_option("-o,--out", fl.out, "write the report here instead of stdout");
  app.add_option("--format", fl.format, "json or text")->check(CLI::IsMember({"json", "text"}));

  for (const char* name : {"volume", "cartan", "hecke", "transfer", "proximity", "epsilon", "all"})
    app.add_subcommand(name);
  app.get_subcommand("volume")->description("index oracle against the volume formula");
  app.get_subcommand("cartan")->description("Cartan decomposition roundtrip and double coset partition");
  app.get_subcommand("hecke")->description("h(A)*h(A') = h(AA'), unit and associativity");
  app.get_subcommand("transfer")->description("Hecke algebra transfer across close fields");
  app.get_subcommand("proximity")->description("proximity bounds, reduced structures, closeness and Hensel checks");
  app.get_subcommand("epsilon")->description("rank 1 epsilon factors and their transfer");
  app.get_subcommand("all")->description("every command above");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    const int rc = app.exit(ex);
    return rc == 0 ? 0 : kConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  RunConfig cfg;
  try {
    cfg = resolve(fl);
  } catch (const kclose::ConfigError& ex) {
    std::cerr << "configuration error: " << ex.what() << "\n";
    return kConfig;
  }
  const RunResult res = run(command, cfg);
  const std::string body = cfg.format == "text" ? res.text : res.report.dump(2) + "\n";
  if (cfg.out.empty()) {
    std::cout << body;
  } else {
    std::ofstream out(cfg.out);
    if (!out) {
      std::cerr << "cannot write " << cfg.out << "\n";
      return kConfig;
    }
    out << body;
    std::cerr << res.text;
  }
  return res.code;
}
