#include "fejercert/cli.hpp"

#include "fejercert/errors.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace fejercert {

namespace {

std::string number(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

// Compact label for the suite table; the JSON summary keeps the full expression.
std::string g_label(const json& g) {
  const std::string kind = g.value("kind", "");
  if (kind == "const") return g.at("c").get<std::string>();
  if (kind == "identity") return "n";
  if (kind == "affine") {
    const std::string a = g.at("a").get<std::string>(), b = g.at("b").get<std::string>();
    std::string out = a == "0" ? "" : (a == "1" ? "n" : a + "n");
    if (b != "0") out += (out.empty() ? "" : "+") + b;
    return out.empty() ? "0" : out;
  }
  json bare = g;
  bare.erase("monotone");
  return bare.dump();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::string short_nat(const Nat& n) {
  std::string d = to_decimal(n);
  return d.size() <= 40 ? d : approx_string(n);
}

}  // namespace

int exit_code(Status s) {
  switch (s) {
    case Status::Verified: return kExitOk;
    case Status::Inconclusive: return kExitInconclusive;
    case Status::ModulusViolation:
    case Status::PropertyViolation: return kExitViolation;
  }
  return kExitError;
}

Scenario apply_overrides(const Scenario& s, const Overrides& o) {
  if (o.empty()) return s;
  json j = s.to_json();
  if (o.cap) j["caps"]["search"] = *o.cap;
  if (o.tau) j["checker"]["tau"] = *o.tau;
  if (o.k) j["k"] = *o.k;
  if (o.g) {
    try {
      j["g"] = json::parse(*o.g);
    } catch (const json::parse_error& e) {
      throw ConfigError("/g", std::string("--g is not valid JSON: ") + e.what());
    }
  }
  return Scenario::from_json(j);
}

int cmd_rate(const Scenario& s, std::ostream& out) {
  ScenarioRunner runner(s);
  Certificate c = runner.certificate();
  json j = c.to_json();
  j["scenario"] = s.name;
  j["k"] = nat_to_json(s.k);
  j["g"] = s.g.to_json();
  out << j.dump(2) << "\n";
  return c.exact ? kExitOk : kExitInexact;
}

std::string simulate_csv(ScenarioRunner& runner, std::uint64_t steps) {
  Trajectory& traj = runner.trajectory();
  const std::size_t d = runner.scenario().dim;
  std::ostringstream os;
  os << "n";
  for (std::size_t i = 0; i < d; ++i) os << ",x_" << i;
  os << ",residual_k0\n";
  for (std::uint64_t n = 0; n <= steps; ++n) {
    const Point x = traj.at(n);
    os << n;
    for (Eigen::Index i = 0; i < x.size(); ++i) os << "," << number(x[i]);
    os << "," << number(runner.family().residual(x, runner.scenario().k)) << "\n";
  }
  return os.str();
}

int cmd_simulate(const Scenario& s, std::uint64_t steps, const std::filesystem::path& out_dir, std::ostream& out) {
  if (steps > 50'000'000) throw ConfigError("", "--steps exceeds the memory budget (50000000)");
  ScenarioRunner runner(s);
  std::filesystem::create_directories(out_dir);
  const auto csv = out_dir / (s.name + ".csv");
  const auto sidecar = out_dir / (s.name + ".json");
  write_file(csv, simulate_csv(runner, steps));
  json meta = {{"scenario", s.to_json()},
               {"steps", steps},
               {"csv", csv.filename().string()},
               {"residual_k", nat_to_json(s.k)},
               {"family", runner.family().name()}};
  write_file(sidecar, meta.dump(2) + "\n");
  out << csv.string() << "\n" << sidecar.string() << "\n";
  return kExitOk;
}

int cmd_verify(const Scenario& s, std::ostream& out) {
  ScenarioRunner runner(s);
  Verdict v = runner.verify();
  out << v.to_json().dump(2) << "\n";
  return exit_code(v.status);
}

json SuiteRow::to_json() const {
  json j = {{"scenario", scenario}, {"file", file},   {"theorem", theorem},
            {"k", nat_to_json(k)},  {"g", g},         {"status", to_string(status)}};
  j["bound"] = bound ? nat_to_json(*bound) : json(nullptr);
  j["bound_exact"] = bound_exact;
  j["witness"] = witness ? nat_to_json(*witness) : json(nullptr);
  if (!error.empty()) j["error"] = error;
  return j;
}

std::vector<std::filesystem::path> list_scenarios(const std::filesystem::path& dir, bool include_adversarial) {
  if (!std::filesystem::is_directory(dir)) throw std::runtime_error("scenario directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  auto collect = [&](const std::filesystem::path& d) {
    if (!std::filesystem::is_directory(d)) return;
    for (const auto& e : std::filesystem::directory_iterator(d))
      if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  };
  collect(dir);
  if (include_adversarial) collect(dir / "adversarial");
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<SuiteRow> run_sweep(const Scenario& s, const std::string& file) {
  ScenarioRunner runner(s);
  std::vector<Nat> ks = s.sweep_k.empty() ? std::vector<Nat>{s.k} : s.sweep_k;
  std::vector<Modulus> gs = s.sweep_g.empty() ? std::vector<Modulus>{s.g} : s.sweep_g;
  std::vector<SuiteRow> rows;
  for (const Nat& k : ks) {
    for (const Modulus& g : gs) {
      SuiteRow r;
      r.scenario = s.name;
      r.file = file;
      r.theorem = theorem_of(s);
      r.k = k;
      r.g = g.to_json();
      Verdict v = runner.verify(k, g);
      r.status = v.status;
      r.bound = v.bound;
      r.bound_exact = v.bound_exact;
      if (v.witness) r.witness = v.witness->N;
      rows.push_back(std::move(r));
    }
  }
  return rows;
}

std::vector<SuiteRow> run_suite(const SuiteOptions& o) {
  const auto files = list_scenarios(o.dir, o.include_adversarial);
  if (files.empty()) throw std::runtime_error("no scenarios in " + o.dir.string());
  std::vector<std::future<std::vector<SuiteRow>>> jobs;
  for (const auto& f : files) {
    jobs.push_back(std::async(std::launch::async, [f, &o] {
      const std::string file = f.filename().string();
      try {
        return run_sweep(apply_overrides(Scenario::load(f), o.overrides), file);
      } catch (const std::exception& e) {
        SuiteRow r;
        r.scenario = f.stem().string();
        r.file = file;
        r.status = Status::Inconclusive;
        r.error = e.what();
        return std::vector<SuiteRow>{r};
      }
    }));
  }
  std::vector<SuiteRow> rows;
  for (auto& j : jobs) {
    auto part = j.get();
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

int cmd_suite(const SuiteOptions& o, std::ostream& out) {
  const auto rows = run_suite(o);
  json arr = json::array();
  std::ostringstream csv;
  csv << "scenario,theorem,k,g,bound,witness,status\n";
  std::size_t verified = 0;
  bool violation = false;
  for (const auto& r : rows) {
    arr.push_back(r.to_json());
    csv << csv_field(r.scenario) << "," << r.theorem << "," << to_decimal(r.k) << "," << csv_field(r.g.dump()) << ","
        << (r.bound ? short_nat(*r.bound) : "") << "," << (r.witness ? to_decimal(*r.witness) : "") << ","
        << to_string(r.status) << "\n";
    if (r.status == Status::Verified) ++verified;
    if (exit_code(r.status) == kExitViolation) violation = true;
  }
  std::filesystem::create_directories(o.out_dir);
  write_file(o.out_dir / "suite_summary.json",
             json{{"rows", arr}, {"total", rows.size()}, {"verified", verified}}.dump(2) + "\n");
  write_file(o.out_dir / "suite_summary.csv", csv.str());

  out << std::left << std::setw(22) << "scenario" << std::setw(12) << "theorem" << std::setw(4) << "k" << std::setw(10)
      << "g" << std::setw(34) << "bound" << std::setw(9) << "witness" << "status\n";
  for (const auto& r : rows) {
    out << std::setw(21) << r.scenario << ' ' << std::setw(11) << r.theorem << ' ' << std::setw(3) << to_decimal(r.k)
        << ' ' << std::setw(9) << g_label(r.g) << ' ' << std::setw(33) << (r.bound ? short_nat(*r.bound) : "-") << ' '
        << std::setw(8) << (r.witness ? to_decimal(*r.witness) : "-") << ' ' << to_string(r.status);
    if (!r.error.empty()) out << " (" << r.error << ")";
    out << "\n";
  }
  out << verified << "/" << rows.size() << " verified\n";
  if (verified == rows.size()) return kExitOk;
  return violation ? kExitViolation : kExitInconclusive;
}

}  // namespace fejercert
