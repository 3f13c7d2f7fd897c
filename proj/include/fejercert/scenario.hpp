#pragma once

#include "fejercert/checker.hpp"
#include "fejercert/iterations.hpp"
#include "fejercert/rates.hpp"
#include "fejercert/schemes.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace fejercert {

enum class SchemeTag {
  PicardNe,
  PicardFne,
  MannSpc,
  Ishikawa,
  CondE,
  Ppa,
  QuasiMann,
  MonotoneSequence,
};

std::string to_string(SchemeTag s);
SchemeTag scheme_from_string(const std::string& s, const std::string& pointer);

struct ScenarioCaps {
  std::uint64_t search = 10'000;
  std::uint64_t max_window = 2'000'000;
  EvalLimits eval;

  json to_json() const;
  static ScenarioCaps from_json(const json& j, const std::string& pointer);
};

struct CheckerSettings {
  double tau = kDefaultTau;
  std::uint64_t seed = 1;
  std::uint64_t fejer_trials = 1000;
  std::uint64_t property_pairs = 1000;
  std::uint64_t closedness_trials = 1000;
  std::uint64_t rate_window = 100;
  std::optional<double> sample_radius;

  json to_json() const;
  static CheckerSettings from_json(const json& j, const std::string& pointer);
};

// x_n = limit − gap_n with gap nonincreasing and nonnegative.
struct MonotoneSequence {
  Rational limit;
  SequenceSpec gap;

  double at(std::uint64_t n) const;
  json to_json() const;
  static MonotoneSequence from_json(const json& j, const std::string& pointer);
};

struct Scenario {
  std::string name;
  SchemeTag scheme = SchemeTag::PicardNe;
  std::size_t dim = 1;
  std::optional<Operator> op;
  std::optional<QuadraticResolvent> resolvent;
  std::optional<MonotoneSequence> sequence;
  std::optional<Domain> domain;
  Point x0;
  std::optional<Point> direction;
  SchemeParams params;
  Nat k = 0;
  Modulus g = Modulus::affine(1, 1);
  std::optional<Modulus> gamma;
  std::optional<Modulus> phi;
  std::optional<Modulus> xi;
  std::optional<LiminfBound> phi_hat;
  std::optional<FejerModulus> chi;
  std::optional<GHModuli> gh;
  std::optional<std::string> theorem;
  ScenarioCaps caps;
  CheckerSettings checker;
  std::vector<Nat> sweep_k;
  std::vector<Modulus> sweep_g;

  json to_json() const;
  static Scenario from_json(const json& j);
  static Scenario parse(const std::string& text);
  static Scenario load(const std::filesystem::path& path);
};

// Theorems a scheme can certify; the first is the default.
std::vector<std::string> theorems_for(SchemeTag s);
std::string theorem_of(const Scenario& s);
// The conclusion also asserts x_i ∈ AF_k across the window.
bool theorem_requires_membership(const std::string& theorem);

// Resolved objects of a scenario: trajectory, family and moduli.
class ScenarioRunner {
 public:
  explicit ScenarioRunner(Scenario s);

  const Scenario& scenario() const { return s_; }
  Trajectory& trajectory() { return traj_; }
  const ApproximationFamily& family() const { return family_; }
  const Domain& domain() const { return domain_; }
  const Point& center() const { return center_; }
  FejerModulus chi() const;
  GHModuli gh() const;
  Modulus gamma() const;
  Modulus phi() const;
  std::optional<ClosednessModuli> closed() const;
  RateInputs rate_inputs(const Nat& k, const Modulus& g) const;

  Certificate certificate(const Nat& k, const Modulus& g) const;
  Certificate certificate() const { return certificate(s_.k, s_.g); }

  // Checks independent of (k, g): declared operator properties, Fejér modulus, closedness.
  const std::vector<json>& static_checks();
  Verdict verify(const Nat& k, const Modulus& g);
  Verdict verify() { return verify(s_.k, s_.g); }

 private:
  Verdict run_static_checks();

  Scenario s_;
  Point center_;
  Domain domain_;
  Trajectory traj_;
  ApproximationFamily family_;
  std::optional<Verdict> static_verdict_;
  std::vector<json> static_checks_;
};

}  // namespace fejercert
