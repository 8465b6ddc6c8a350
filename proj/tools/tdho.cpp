// tdho: time-dependent harmonic oscillator toolkit.
//
//   tdho figure1     --grid 0.05:1.0:0.005 --out fig1.csv
//   tdho verify      --family linear-mass --n 60 --trusted-block 16
//   tdho family      --family condi --m0 1 --omega0 1 --eps 1e-3 --t-end 1.5 --out condi.csv
//   tdho equivalence --family linear-mass --t 0.5 --n-list 40,60,80 --out eq.csv
//
// Any option may also come from an INI file given by --config; a section
// named after a subcommand sets that subcommand's options.

#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

void add_family_options(CLI::App* cmd, tdho::cli::FamilyParams& fp) {
  cmd->add_option("--family", fp.family,
                  "linear-mass | constant | exact-adiabatic | condi | condi-g | tabulated")
      ->capture_default_str();
  cmd->add_option("--profile", fp.profile_path, "CSV with columns t,m,omega (tabulated family)");
  cmd->add_option("--m0", fp.m0, "mass scale")->capture_default_str();
  cmd->add_option("--mu", fp.mu, "mass growth rate")->capture_default_str();
  cmd->add_option("--omega0", fp.omega0, "frequency")->capture_default_str();
  cmd->add_option("--Omega0", fp.Omega0, "target Omega' m' of the generalized solvable family")
      ->capture_default_str();
  cmd->add_option("--eps", fp.eps, "domain start of the solvable families")->capture_default_str();
  cmd->add_option("--t-end", fp.t_end, "domain end");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace tdho::cli;
  CLI::App app{"Transformation chain and exact solutions of time-dependent harmonic oscillators"};
  app.set_version_flag("--version", std::string(kVersion));
  app.set_config("--config", "", "INI configuration file");
  app.config_formatter(std::make_shared<CLI::ConfigINI>());
  app.require_subcommand(1);

  Figure1Config fig;
  auto* figure1 = app.add_subcommand("figure1", "Omega'^2(t') of the linear-mass oscillator");
  figure1->add_option("--m0", fig.m0)->capture_default_str();
  figure1->add_option("--mu", fig.mu)->capture_default_str();
  figure1->add_option("--omega0", fig.omega0)->capture_default_str();
  figure1->add_option("--grid", fig.grid, "t' grid a:b:step")->capture_default_str();
  figure1->add_option("--sing-tol", fig.sing_tol)->capture_default_str();
  figure1->add_option("--out", fig.out)->capture_default_str();
  figure1->add_flag("!--no-script", fig.script, "skip the gnuplot script");

  VerifyConfig ver;
  double ver_t = std::numeric_limits<double>::quiet_NaN();
  auto* verify = app.add_subcommand("verify", "run the verification suites");
  add_family_options(verify, ver.family);
  verify->add_option("--n", ver.N, "Fock truncation")->capture_default_str();
  verify->add_option("--trusted-block", ver.K)->capture_default_str();
  verify->add_option("--t", ver_t, "time of the factorization check");
  verify->add_option("--step-tol", ver.step_tol)->capture_default_str();

  FamilyConfig fam;
  auto* family = app.add_subcommand("family", "tabulate a solvable family");
  add_family_options(family, fam.family);
  family->add_option("--samples", fam.samples)->capture_default_str();
  family->add_option("--out", fam.out)->capture_default_str();

  EquivalenceConfig eq;
  auto* equivalence = app.add_subcommand("equivalence", "factorization defects against N");
  add_family_options(equivalence, eq.family);
  equivalence->add_option("--t", eq.t)->capture_default_str();
  equivalence->add_option("--n-list", eq.n_list)->capture_default_str();
  equivalence->add_option("--trusted-block", eq.K)->capture_default_str();
  equivalence->add_option("--step-tol", eq.step_tol)->capture_default_str();
  equivalence->add_flag("--allow-cross-segment", eq.allow_cross_segment);
  equivalence->add_option("--out", eq.out)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  if (*figure1) return cmd_figure1(fig, std::cout);
  if (*verify) {
    if (!std::isnan(ver_t)) ver.t = ver_t;
    return cmd_verify(ver, std::cout);
  }
  if (*family) return cmd_family(fam, std::cout);
  if (*equivalence) return cmd_equivalence(eq, std::cout);
  return kConfigError;
}
