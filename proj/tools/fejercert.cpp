#include "fejercert/cli.hpp"
#include "fejercert/errors.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

using namespace fejercert;

int main(int argc, char** argv) {
  CLI::App app{"Rates of metastability for Fejér monotone iterations: compute, simulate, verify."};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir = ".";
  std::uint64_t steps = 100;
  bool include_adversarial = false;
  Overrides o;

  auto add_common = [&](CLI::App* sub, bool needs_scenario) {
    auto* opt = sub->add_option("--scenario", scenario_path, needs_scenario ? "scenario JSON file" : "scenario directory");
    if (needs_scenario) opt->required()->check(CLI::ExistingFile);
    sub->add_option("--cap", o.cap, "witness search cap");
    sub->add_option("--tau", o.tau, "numerical tolerance");
    sub->add_option("--g", o.g, "counter function as a modulus JSON, e.g. '{\"kind\":\"affine\",\"a\":1,\"b\":1}'");
    sub->add_option("--k", o.k, "error index k");
  };

  auto* rate = app.add_subcommand("rate", "print the certificate of the scenario's theorem");
  add_common(rate, true);
  auto* simulate = app.add_subcommand("simulate", "write the trajectory as CSV with a JSON sidecar");
  add_common(simulate, true);
  simulate->add_option("--steps", steps, "number of steps");
  simulate->add_option("--out", out_dir, "output directory");
  auto* verify = app.add_subcommand("verify", "check the certificate against the trajectory");
  add_common(verify, true);
  auto* suite = app.add_subcommand("suite", "verify every scenario in a directory");
  add_common(suite, false);
  suite->add_option("--out", out_dir, "output directory for the summary");
  suite->add_flag("--include-adversarial", include_adversarial, "also run scenarios under adversarial/");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (suite->parsed()) {
      SuiteOptions so;
      if (!scenario_path.empty()) {
        so.dir = scenario_path;
      } else if (const char* env = std::getenv(kScenarioDirEnv)) {
        so.dir = env;
      } else {
        so.dir = "scenarios";
      }
      so.out_dir = out_dir;
      so.include_adversarial = include_adversarial;
      so.overrides = o;
      return cmd_suite(so, std::cout);
    }
    Scenario s = apply_overrides(Scenario::load(scenario_path), o);
    if (rate->parsed()) return cmd_rate(s, std::cout);
    if (simulate->parsed()) return cmd_simulate(s, steps, out_dir, std::cout);
    return cmd_verify(s, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << json{{"error", "config"}, {"pointer", e.pointer()}, {"message", e.what()}}.dump() << "\n";
  } catch (const CapExceeded& e) {
    std::cerr << json{{"error", "cap_exceeded"}, {"message", e.what()}}.dump() << "\n";
    return kExitInexact;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "runtime"}, {"message", e.what()}}.dump() << "\n";
  }
  return kExitError;
}
