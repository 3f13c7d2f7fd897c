#include "fejercert/cli.hpp"
#include "fejercert/errors.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace fejercert;

namespace {

const std::filesystem::path kScenarios = FEJERCERT_SCENARIO_DIR;

const char* kMinimalPicard =
    R"({"scheme":"picard_ne","dim":1,"operator":{"kind":"scale","a":0.5},"x0":[1],"k":1,"g":{"kind":"affine","a":1,"b":1}})";

std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("fejercert_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

std::string read(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

std::string pointer_of(const std::string& text) {
  try {
    Scenario::parse(text);
  } catch (const ConfigError& e) {
    return e.pointer();
  }
  return "<parsed>";
}

json spc_config(const std::string& lambda) {
  json j = json::parse(read(kScenarios / "mann_spc.json"));
  j["params"]["lambda"] = lambda;
  return j;
}

}  // namespace

TEST(Parse, MinimalPicard) {
  Scenario s = Scenario::parse(kMinimalPicard);
  EXPECT_EQ(s.scheme, SchemeTag::PicardNe);
  EXPECT_EQ(s.dim, 1u);
  EXPECT_EQ(s.k, 1);
  EXPECT_EQ(s.g(Nat(3)), 4);
  EXPECT_EQ(theorem_of(s), "sigma");
}

TEST(Parse, Errors) {
  EXPECT_EQ(pointer_of(spc_config("1/5").dump()), "/params/lambda");
  EXPECT_EQ(pointer_of(spc_config("1").dump()), "/params/lambda");
  EXPECT_EQ(pointer_of(spc_config("3/5").dump()), "<parsed>");

  json ish = json::parse(read(kScenarios / "ishikawa.json"));
  ish["params"].erase("theta");
  ish["params"].erase("lambda");
  ish["params"]["lambda_seq"] = {{"kind", "harmonic"}, {"a", "1/4"}, {"c", "1/4"}};
  EXPECT_EQ(pointer_of(ish.dump()), "/params/theta");

  json bad = json::parse(kMinimalPicard);
  bad["colour"] = "red";
  EXPECT_EQ(pointer_of(bad.dump()), "/colour");
  bad = json::parse(kMinimalPicard);
  bad["g"] = {{"kind", "affine"}, {"b", 1}};
  EXPECT_EQ(pointer_of(bad.dump()), "/g/a");
  bad = json::parse(kMinimalPicard);
  bad["theorem"] = "omega";
  EXPECT_EQ(pointer_of(bad.dump()), "/theorem");
  EXPECT_EQ(pointer_of("{not json"), "");
}

TEST(Parse, RoundTripOfShippedScenarios) {
  std::vector<std::filesystem::path> files = list_scenarios(kScenarios, true);
  ASSERT_GE(files.size(), 8u);
  for (const auto& f : files) {
    Scenario s = Scenario::load(f);
    const std::string printed = s.to_json().dump();
    EXPECT_EQ(Scenario::parse(printed).to_json().dump(), printed) << f;
  }
}

TEST(Rate, Examples) {
  std::ostringstream out;
  EXPECT_EQ(cmd_rate(Scenario::load(kScenarios / "monotone_sequence.json"), out), kExitOk);
  EXPECT_EQ(json::parse(out.str())["bound"], "4");

  json pic = json::parse(kMinimalPicard);
  pic["k"] = 0;
  pic["gamma"] = {{"kind", "affine"}, {"a", 1}, {"b", 1}};
  pic["domain"] = {{"kind", "ball"}, {"center", {0}}, {"radius", 1}};
  out.str("");
  EXPECT_EQ(cmd_rate(Scenario::from_json(pic), out), kExitOk);
  EXPECT_EQ(json::parse(out.str())["bound"], "340");

  json ppa = json::parse(read(kScenarios / "ppa.json"));
  ppa["theorem"] = "apfp";
  ppa["k"] = 0;
  out.str("");
  EXPECT_EQ(cmd_rate(Scenario::from_json(ppa), out), kExitOk);
  EXPECT_EQ(json::parse(out.str())["bound"], "80");
}

TEST(Rate, HugeBoundIsInexact) {
  json pic = json::parse(kMinimalPicard);
  pic["k"] = 50;
  pic["g"] = {{"kind", "pow"}, {"arg", {{"kind", "affine"}, {"a", 1}, {"b", 1}}}, {"p", 4}};
  std::ostringstream out;
  EXPECT_EQ(cmd_rate(Scenario::from_json(pic), out), kExitInexact);
}

TEST(Simulate, Rows) {
  const auto dir = temp_dir("simulate");
  std::ostringstream out;
  EXPECT_EQ(cmd_simulate(Scenario::parse(kMinimalPicard), 4, dir, out), kExitOk);
  auto rows = lines(read(dir / "picard_ne.csv"));
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0], "n,x_0,residual_k0");
  const double expect[] = {1, 0.5, 0.25, 0.125, 0.0625};
  for (int n = 0; n <= 4; ++n) {
    std::istringstream is(rows[n + 1]);
    std::string idx, x;
    std::getline(is, idx, ',');
    std::getline(is, x, ',');
    EXPECT_EQ(std::stoi(idx), n);
    EXPECT_DOUBLE_EQ(std::stod(x), expect[n]);
  }
  json sidecar = json::parse(read(dir / "picard_ne.json"));
  EXPECT_EQ(sidecar["steps"], 4);
  EXPECT_EQ(sidecar["csv"], "picard_ne.csv");
}

TEST(Simulate, PpaAndConstantMann) {
  Scenario ppa = Scenario::load(kScenarios / "ppa.json");
  json j = ppa.to_json();
  j["x0"] = {1, 1};
  j["domain"]["radius"] = 2;
  ScenarioRunner r(Scenario::from_json(j));
  auto rows = lines(simulate_csv(r, 3));
  ASSERT_EQ(rows.size(), 5u);
  const double expect[] = {1, 0.5, 0.25, 0.125};
  for (int n = 0; n <= 3; ++n) {
    std::istringstream is(rows[n + 1]);
    std::string idx, x0, x1;
    std::getline(is, idx, ',');
    std::getline(is, x0, ',');
    std::getline(is, x1, ',');
    EXPECT_DOUBLE_EQ(std::stod(x0), expect[n]);
    EXPECT_DOUBLE_EQ(std::stod(x1), expect[n]);
  }

  // identity operator through the quasi-Mann scheme with no perturbation
  json q = json::parse(read(kScenarios / "quasi_mann.json"));
  q["operator"]["a"] = 1;
  q["params"]["eps_seq"] = {{"kind", "constant"}, {"value", 0}};
  ScenarioRunner rq(Scenario::from_json(q));
  auto qrows = lines(simulate_csv(rq, 5));
  for (std::size_t i = 2; i < qrows.size(); ++i)
    EXPECT_EQ(qrows[i].substr(qrows[i].find(',')), qrows[1].substr(qrows[1].find(',')));
}

TEST(Simulate, Deterministic) {
  for (const char* name : {"mann_spc.json", "ishikawa.json", "quasi_mann.json", "cond_e.json"}) {
    Scenario s = Scenario::load(kScenarios / name);
    const auto a = temp_dir("det_a"), b = temp_dir("det_b");
    std::ostringstream out;
    cmd_simulate(s, 300, a, out);
    cmd_simulate(s, 300, b, out);
    EXPECT_EQ(read(a / (s.name + ".csv")), read(b / (s.name + ".csv"))) << name;
  }
}

TEST(Verify, ExitCodes) {
  std::ostringstream out;
  EXPECT_EQ(cmd_verify(Scenario::load(kScenarios / "monotone_sequence.json"), out), kExitOk);
  json v = json::parse(out.str());
  EXPECT_EQ(v["witness"]["N"], "0");
  EXPECT_EQ(v["bound"], "4");

  out.str("");
  EXPECT_EQ(cmd_verify(Scenario::load(kScenarios / "adversarial" / "picard_chi_zero.json"), out), kExitViolation);

  Overrides o;
  o.k = "5";
  o.cap = 1;
  out.str("");
  EXPECT_EQ(cmd_verify(apply_overrides(Scenario::load(kScenarios / "monotone_sequence.json"), o), out),
            kExitInconclusive);
  EXPECT_EQ(json::parse(out.str())["status"], "witness_found_beyond_cap_none");
}

TEST(Overrides, ReenterParser) {
  Scenario s = Scenario::load(kScenarios / "picard_ne.json");
  Overrides o;
  o.g = R"({"kind":"const","c":7})";
  o.tau = 1e-6;
  Scenario t = apply_overrides(s, o);
  EXPECT_EQ(t.g(Nat(100)), 7);
  EXPECT_DOUBLE_EQ(t.checker.tau, 1e-6);
  o.g = "{oops";
  EXPECT_THROW(apply_overrides(s, o), ConfigError);
  o.g = R"({"kind":"nope"})";
  EXPECT_THROW(apply_overrides(s, o), ConfigError);
}

TEST(Suite, ShippedAllVerified) {
  SuiteOptions o;
  o.dir = kScenarios;
  o.out_dir = temp_dir("suite");
  std::ostringstream out;
  EXPECT_EQ(cmd_suite(o, out), kExitOk) << out.str();
  json summary = json::parse(read(o.out_dir / "suite_summary.json"));
  EXPECT_EQ(summary["total"], summary["verified"]);
  EXPECT_EQ(lines(read(o.out_dir / "suite_summary.csv")).size(), summary["total"].get<std::size_t>() + 1);
}

TEST(Suite, AdversarialFails) {
  SuiteOptions o;
  o.dir = kScenarios;
  o.out_dir = temp_dir("suite_adv");
  o.include_adversarial = true;
  std::ostringstream out;
  EXPECT_EQ(cmd_suite(o, out), kExitViolation);
}

TEST(Suite, EmptyDirectory) {
  SuiteOptions o;
  o.dir = temp_dir("empty");
  std::ostringstream out;
  try {
    cmd_suite(o, out);
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("no scenarios"), std::string::npos);
  }
}
