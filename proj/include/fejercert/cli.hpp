#pragma once

#include "fejercert/scenario.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fejercert {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInexact = 2;
inline constexpr int kExitViolation = 3;
inline constexpr int kExitInconclusive = 4;

inline constexpr const char* kScenarioDirEnv = "FEJERCERT_SCENARIOS";

int exit_code(Status s);

// Command-line overrides. They are written into the scenario JSON and parsed again.
struct Overrides {
  std::optional<std::uint64_t> cap;
  std::optional<double> tau;
  std::optional<std::string> g;  // a modulus as JSON text
  std::optional<std::string> k;

  bool empty() const { return !cap && !tau && !g && !k; }
};

Scenario apply_overrides(const Scenario& s, const Overrides& o);

// Certificate JSON on `out`; exit 2 when the bound is only a lower bound.
int cmd_rate(const Scenario& s, std::ostream& out);

// `n,x_0..x_{d-1},residual_k0` rows for n = 0..steps; the residual is taken at the scenario's k.
std::string simulate_csv(ScenarioRunner& runner, std::uint64_t steps);
int cmd_simulate(const Scenario& s, std::uint64_t steps, const std::filesystem::path& out_dir, std::ostream& out);

int cmd_verify(const Scenario& s, std::ostream& out);

struct SuiteOptions {
  std::filesystem::path dir;
  std::filesystem::path out_dir = ".";
  bool include_adversarial = false;
  Overrides overrides;
};

struct SuiteRow {
  std::string scenario;
  std::string file;
  std::string theorem;
  Nat k;
  json g;
  std::optional<Nat> bound;
  bool bound_exact = true;
  std::optional<Nat> witness;
  Status status = Status::Verified;
  std::string error;

  json to_json() const;
};

// *.json directly under `dir`, plus dir/adversarial when requested; sorted.
std::vector<std::filesystem::path> list_scenarios(const std::filesystem::path& dir, bool include_adversarial);
// Every (k, g) of the scenario's sweep, or its own (k, g) when there is none.
std::vector<SuiteRow> run_sweep(const Scenario& s, const std::string& file);
std::vector<SuiteRow> run_suite(const SuiteOptions& o);
int cmd_suite(const SuiteOptions& o, std::ostream& out);

}  // namespace fejercert
