#include "fejercert/scenario.hpp"

#include "fejercert/errors.hpp"
#include "fejercert/total_boundedness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace fejercert {

namespace {

struct SchemeName {
  SchemeTag tag;
  const char* name;
};

constexpr SchemeName kSchemes[] = {
    {SchemeTag::PicardNe, "picard_ne"},   {SchemeTag::PicardFne, "picard_fne"},
    {SchemeTag::MannSpc, "mann_spc"},     {SchemeTag::Ishikawa, "ishikawa"},
    {SchemeTag::CondE, "cond_e"},         {SchemeTag::Ppa, "ppa"},
    {SchemeTag::QuasiMann, "quasi_mann"}, {SchemeTag::MonotoneSequence, "monotone_sequence"},
};

bool has_operator(SchemeTag s) {
  return s != SchemeTag::Ppa && s != SchemeTag::MonotoneSequence;
}

std::uint64_t u64_field(const json& j, const char* key, const std::string& pointer, std::uint64_t fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw ConfigError(pointer + "/" + key, "expected a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

double real_field(const json& j, const char* key, const std::string& pointer, double fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number() || !std::isfinite(v.get<double>())) throw ConfigError(pointer + "/" + key, "expected a number");
  return v.get<double>();
}

void reject_unknown(const json& j, const std::vector<std::string>& known, const std::string& pointer) {
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError(pointer + "/" + key, "unknown field");
    }
  }
}

std::optional<SequenceSpec> lambda_sequence(const SchemeParams& p) {
  if (p.lambda_seq) return p.lambda_seq;
  if (p.lambda) return SequenceSpec::constant(*p.lambda);
  return std::nullopt;
}

SequenceSpec require_lambda(const SchemeParams& p) {
  auto lam = lambda_sequence(p);
  if (!lam) throw ConfigError("/params/lambda", "required by this scheme");
  return *lam;
}

// Runs a moduli builder for its range checks, mapping errors to the params pointer.
template <class F>
void check_params(F&& f) {
  try {
    f();
  } catch (const RangeError& e) {
    throw ConfigError("/params/" + e.field(), e.what());
  }
}

void validate(const Scenario& s) {
  if (has_operator(s.scheme) && !s.op) throw ConfigError("/operator", "required by " + to_string(s.scheme));
  if (!has_operator(s.scheme) && s.op) throw ConfigError("/operator", "not used by " + to_string(s.scheme));
  if (s.scheme == SchemeTag::Ppa && !s.resolvent) throw ConfigError("/resolvent", "required by ppa");
  if (s.scheme == SchemeTag::MonotoneSequence && !s.sequence) {
    throw ConfigError("/sequence", "required by monotone_sequence");
  }
  const SchemeParams& p = s.params;
  switch (s.scheme) {
    case SchemeTag::PicardNe:
      break;
    case SchemeTag::PicardFne:
      if (!p.b) throw ConfigError("/params/b", "required by picard_fne");
      if (!p.lambda) throw ConfigError("/params/lambda", "required by picard_fne");
      check_params([&] { fne_constant(*p.b, *p.lambda); });
      break;
    case SchemeTag::MannSpc:
      check_params([&] { spc_moduli(p); });
      break;
    case SchemeTag::Ishikawa:
      require_lambda(p);
      if (!p.s_seq) throw ConfigError("/params/s_seq", "required by ishikawa");
      if (!p.b) throw ConfigError("/params/b", "required by ishikawa");
      check_params([&] { ishikawa_phi(p); });
      break;
    case SchemeTag::CondE:
      check_params([&] { cond_e_moduli(p); });
      break;
    case SchemeTag::Ppa:
      check_params([&] { ppa_moduli(p); });
      break;
    case SchemeTag::QuasiMann: {
      SequenceSpec lam = require_lambda(p);
      if (!lam.all_in(0, 1, false, false)) throw ConfigError("/params/lambda", "must lie in [0,1]");
      if (!p.eps_seq) throw ConfigError("/params/eps_seq", "required by quasi_mann");
      if (!p.eps_seq->all_in(0, 1'000'000, false, false)) throw ConfigError("/params/eps_seq", "must be nonnegative");
      if (!s.xi) throw ConfigError("/xi", "required by quasi_mann");
      if (!s.phi_hat) throw ConfigError("/phi_hat", "required by quasi_mann");
      if (!s.domain) throw ConfigError("/domain", "required by quasi_mann");
      break;
    }
    case SchemeTag::MonotoneSequence:
      if (s.dim != 1) throw ConfigError("/dim", "monotone_sequence is one-dimensional");
      break;
  }
  if (s.theorem) {
    auto allowed = theorems_for(s.scheme);
    if (std::find(allowed.begin(), allowed.end(), *s.theorem) == allowed.end()) {
      throw ConfigError("/theorem", "'" + *s.theorem + "' does not apply to " + to_string(s.scheme));
    }
  }
}

Point scenario_center(const Scenario& s) {
  if (s.op) {
    auto p = s.op->fixed_point();
    if (!p) throw ConfigError("/operator/fixed_point", "no fixed point is known for this operator");
    return *p;
  }
  if (s.resolvent) {
    auto z = s.resolvent->zero();
    if (!z) throw ConfigError("/resolvent", "the operator has no zero");
    return *z;
  }
  Point c(1);
  c[0] = to_double(s.sequence->limit);
  return c;
}

// Without an explicit domain: the ball around the center through x0, which
// every Fejér sequence stays in.
Domain scenario_domain(const Scenario& s, const Point& center) {
  if (s.domain) return *s.domain;
  if (s.sequence) {
    Point mid = (s.x0 + center) / 2;
    double r = std::abs(center[0] - s.x0[0]) / 2;
    return Domain::ball(mid, r > 0 ? r : 1.0);
  }
  double r = (s.x0 - center).norm();
  return Domain::ball(center, r > 0 ? r : 1.0);
}

Point direction_of(const Scenario& s) {
  if (s.direction) return *s.direction;
  Point e = Point::Zero(static_cast<Eigen::Index>(s.dim));
  e[0] = 1.0;
  return e;
}

Trajectory scenario_trajectory(const Scenario& s) {
  const SchemeParams& p = s.params;
  switch (s.scheme) {
    case SchemeTag::PicardNe:
    case SchemeTag::PicardFne:
      return picard(*s.op, s.x0);
    case SchemeTag::MannSpc:
    case SchemeTag::CondE:
      return mann(*s.op, s.x0, require_lambda(p));
    case SchemeTag::Ishikawa:
      return ishikawa(*s.op, s.x0, require_lambda(p), *p.s_seq);
    case SchemeTag::Ppa:
      return ppa(*s.resolvent, s.x0, *p.gamma_seq);
    case SchemeTag::QuasiMann:
      return perturbed_mann(*s.op, s.x0, require_lambda(p), *p.eps_seq, direction_of(s));
    case SchemeTag::MonotoneSequence: {
      MonotoneSequence seq = *s.sequence;
      return Trajectory::closed_form("monotone_sequence", [seq](std::uint64_t n) {
        Point x(1);
        x[0] = seq.at(n);
        return x;
      });
    }
  }
  throw ConfigError("/scheme", "unhandled scheme");
}

ApproximationFamily scenario_family(const Scenario& s) {
  if (s.op) return fixed_point_family(*s.op);
  if (s.resolvent) return ppa_family(*s.resolvent, *s.params.gamma_seq);
  MonotoneSequence seq = *s.sequence;
  return monotone_sequence_family([seq](std::uint64_t n) { return seq.at(n); });
}

json check_summary(const std::string& name, const Verdict& v) {
  json j = {{"check", name}, {"status", to_string(v.status)}, {"trials", v.trials}};
  if (!v.violations.empty()) j["violations"] = v.violations;
  return j;
}

json property_summary(const PropertyCheck& c) {
  json j = {{"check", "property:" + c.property}, {"status", c.ok ? "verified" : "property_violation"},
            {"trials", c.trials}};
  if (!c.ok) j["violations"] = json::array({c.detail});
  return j;
}

bool is_violation(Status s) { return s == Status::ModulusViolation || s == Status::PropertyViolation; }

}  // namespace

std::string to_string(SchemeTag s) {
  for (const auto& e : kSchemes)
    if (e.tag == s) return e.name;
  return "unknown";
}

SchemeTag scheme_from_string(const std::string& s, const std::string& pointer) {
  for (const auto& e : kSchemes)
    if (s == e.name) return e.tag;
  throw ConfigError(pointer, "unknown scheme '" + s + "'");
}

json ScenarioCaps::to_json() const {
  return {{"search", search},
          {"max_window", max_window},
          {"max_steps", eval.max_steps},
          {"max_bits", eval.max_bits},
          {"majorant_cap", eval.majorant_cap}};
}

ScenarioCaps ScenarioCaps::from_json(const json& j, const std::string& pointer) {
  if (!j.is_object()) throw ConfigError(pointer, "expected an object");
  reject_unknown(j, {"search", "max_window", "max_steps", "max_bits", "majorant_cap"}, pointer);
  ScenarioCaps c;
  c.search = u64_field(j, "search", pointer, c.search);
  c.max_window = u64_field(j, "max_window", pointer, c.max_window);
  c.eval.max_steps = u64_field(j, "max_steps", pointer, c.eval.max_steps);
  const std::uint64_t bits = u64_field(j, "max_bits", pointer, c.eval.max_bits);
  if (bits < 64 || bits > (1u << 24)) throw ConfigError(pointer + "/max_bits", "must lie in [64, 2^24]");
  c.eval.max_bits = static_cast<std::uint32_t>(bits);
  c.eval.majorant_cap = u64_field(j, "majorant_cap", pointer, c.eval.majorant_cap);
  return c;
}

json CheckerSettings::to_json() const {
  json j = {{"tau", tau},
            {"seed", seed},
            {"fejer_trials", fejer_trials},
            {"property_pairs", property_pairs},
            {"closedness_trials", closedness_trials},
            {"rate_window", rate_window}};
  if (sample_radius) j["sample_radius"] = *sample_radius;
  return j;
}

CheckerSettings CheckerSettings::from_json(const json& j, const std::string& pointer) {
  if (!j.is_object()) throw ConfigError(pointer, "expected an object");
  reject_unknown(j, {"tau", "seed", "fejer_trials", "property_pairs", "closedness_trials", "rate_window", "sample_radius"},
                 pointer);
  CheckerSettings c;
  c.tau = real_field(j, "tau", pointer, c.tau);
  if (c.tau < 0) throw ConfigError(pointer + "/tau", "must be nonnegative");
  c.seed = u64_field(j, "seed", pointer, c.seed);
  c.fejer_trials = u64_field(j, "fejer_trials", pointer, c.fejer_trials);
  c.property_pairs = u64_field(j, "property_pairs", pointer, c.property_pairs);
  c.closedness_trials = u64_field(j, "closedness_trials", pointer, c.closedness_trials);
  c.rate_window = u64_field(j, "rate_window", pointer, c.rate_window);
  if (j.contains("sample_radius")) {
    c.sample_radius = real_field(j, "sample_radius", pointer, 0.0);
    if (*c.sample_radius <= 0) throw ConfigError(pointer + "/sample_radius", "must be positive");
  }
  return c;
}

double MonotoneSequence::at(std::uint64_t n) const { return to_double(limit) - gap.at(n); }

json MonotoneSequence::to_json() const { return {{"limit", rational_to_json(limit)}, {"gap", gap.to_json()}}; }

MonotoneSequence MonotoneSequence::from_json(const json& j, const std::string& pointer) {
  if (!j.is_object()) throw ConfigError(pointer, "expected an object");
  reject_unknown(j, {"limit", "gap"}, pointer);
  if (!j.contains("limit")) throw ConfigError(pointer + "/limit", "missing field");
  if (!j.contains("gap")) throw ConfigError(pointer + "/gap", "missing field");
  MonotoneSequence m{rational_from_json(j.at("limit"), pointer + "/limit"),
                     SequenceSpec::from_json(j.at("gap"), pointer + "/gap")};
  const json g = m.gap.to_json();
  const std::string kind = g.at("kind");
  bool ok = false;
  if (kind == "constant") {
    ok = m.gap.constant_value() >= 0;
  } else if (kind == "geometric") {
    Rational scale = rational_from_json(g.at("scale"), ""), ratio = rational_from_json(g.at("ratio"), "");
    ok = scale >= 0 && ratio >= 0 && ratio <= 1;
  } else if (kind == "harmonic") {
    ok = rational_from_json(g.at("a"), "") >= 0 && rational_from_json(g.at("c"), "") >= 0;
  }
  if (!ok) throw ConfigError(pointer + "/gap", "must be a nonnegative, nonincreasing constant, geometric or harmonic sequence");
  return m;
}

json Scenario::to_json() const {
  json j;
  j["name"] = name;
  j["scheme"] = to_string(scheme);
  j["dim"] = dim;
  if (op) j["operator"] = op->to_json();
  if (resolvent) j["resolvent"] = {{"Q", matrix_to_json(resolvent->Q())}, {"c", point_to_json(resolvent->c())}};
  if (sequence) j["sequence"] = sequence->to_json();
  if (domain) j["domain"] = domain->to_json();
  if (!sequence) j["x0"] = point_to_json(x0);
  if (direction) j["direction"] = point_to_json(*direction);
  j["params"] = params.to_json();
  j["k"] = nat_to_json(k);
  j["g"] = g.to_json();
  if (gamma) j["gamma"] = gamma->to_json();
  if (phi) j["phi"] = phi->to_json();
  if (xi) j["xi"] = xi->to_json();
  if (phi_hat) j["phi_hat"] = phi_hat->to_json();
  if (chi) j["chi"] = chi->to_json();
  if (gh) j["gh"] = gh->to_json();
  if (theorem) j["theorem"] = *theorem;
  j["caps"] = caps.to_json();
  j["checker"] = checker.to_json();
  if (!sweep_k.empty() || !sweep_g.empty()) {
    json ks = json::array(), gs = json::array();
    for (const auto& v : sweep_k) ks.push_back(nat_to_json(v));
    for (const auto& v : sweep_g) gs.push_back(v.to_json());
    j["sweep"] = {{"k", ks}, {"g", gs}};
  }
  return j;
}

Scenario Scenario::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("", "expected a JSON object");
  reject_unknown(j,
                 {"name", "scheme", "dim", "operator", "resolvent", "sequence", "domain", "x0", "direction", "params",
                  "k", "g", "gamma", "phi", "xi", "phi_hat", "chi", "gh", "theorem", "caps", "checker", "sweep"},
                 "");
  Scenario s;
  if (!j.contains("scheme") || !j.at("scheme").is_string()) throw ConfigError("/scheme", "expected a scheme name");
  s.scheme = scheme_from_string(j.at("scheme").get<std::string>(), "/scheme");
  if (j.contains("name")) {
    if (!j.at("name").is_string()) throw ConfigError("/name", "expected a string");
    s.name = j.at("name").get<std::string>();
  } else {
    s.name = to_string(s.scheme);
  }
  const std::uint64_t dim = u64_field(j, "dim", "", 0);
  if (!j.contains("dim") || dim < 1 || dim > 64) throw ConfigError("/dim", "expected a dimension in [1,64]");
  s.dim = static_cast<std::size_t>(dim);

  if (j.contains("operator")) s.op = Operator::from_json(j.at("operator"), s.dim, "/operator");
  if (j.contains("resolvent")) {
    const json& r = j.at("resolvent");
    if (!r.is_object() || !r.contains("Q")) throw ConfigError("/resolvent/Q", "missing field");
    reject_unknown(r, {"Q", "c"}, "/resolvent");
    Matrix Q = matrix_from_json(r.at("Q"), s.dim, "/resolvent/Q");
    Point c = r.contains("c") ? point_from_json(r.at("c"), s.dim, "/resolvent/c")
                              : Point(Point::Zero(static_cast<Eigen::Index>(s.dim)));
    try {
      s.resolvent.emplace(std::move(Q), std::move(c));
    } catch (const RangeError& e) {
      throw ConfigError("/resolvent/" + e.field(), e.what());
    }
  }
  if (j.contains("sequence")) s.sequence = MonotoneSequence::from_json(j.at("sequence"), "/sequence");
  if (j.contains("domain")) s.domain = Domain::from_json(j.at("domain"), s.dim, "/domain");
  if (s.sequence) {
    if (j.contains("x0")) throw ConfigError("/x0", "monotone_sequence starts at its first term");
    s.x0 = Point(1);
    s.x0[0] = s.sequence->at(0);
  } else {
    if (!j.contains("x0")) throw ConfigError("/x0", "missing field");
    s.x0 = point_from_json(j.at("x0"), s.dim, "/x0");
  }
  if (j.contains("direction")) {
    s.direction = point_from_json(j.at("direction"), s.dim, "/direction");
    if (s.direction->norm() == 0) throw ConfigError("/direction", "must be nonzero");
  }
  if (j.contains("params")) s.params = SchemeParams::from_json(j.at("params"), "/params");
  if (j.contains("k")) s.k = nat_from_json(j.at("k"), "/k");
  if (j.contains("g")) s.g = Modulus::from_json(j.at("g"), "/g");
  if (j.contains("gamma")) s.gamma = Modulus::from_json(j.at("gamma"), "/gamma");
  if (j.contains("phi")) s.phi = Modulus::from_json(j.at("phi"), "/phi");
  if (j.contains("xi")) s.xi = Modulus::from_json(j.at("xi"), "/xi");
  if (j.contains("phi_hat")) s.phi_hat = LiminfBound::from_json(j.at("phi_hat"), "/phi_hat");
  if (j.contains("chi")) s.chi = FejerModulus::from_json(j.at("chi"), "/chi");
  if (j.contains("gh")) s.gh = GHModuli::from_json(j.at("gh"), "/gh");
  if (j.contains("theorem")) {
    if (!j.at("theorem").is_string()) throw ConfigError("/theorem", "expected a string");
    s.theorem = j.at("theorem").get<std::string>();
  }
  if (j.contains("caps")) s.caps = ScenarioCaps::from_json(j.at("caps"), "/caps");
  if (j.contains("checker")) s.checker = CheckerSettings::from_json(j.at("checker"), "/checker");
  if (j.contains("sweep")) {
    const json& sw = j.at("sweep");
    if (!sw.is_object()) throw ConfigError("/sweep", "expected an object");
    reject_unknown(sw, {"k", "g"}, "/sweep");
    if (sw.contains("k")) {
      if (!sw.at("k").is_array()) throw ConfigError("/sweep/k", "expected an array");
      for (std::size_t i = 0; i < sw.at("k").size(); ++i)
        s.sweep_k.push_back(nat_from_json(sw.at("k")[i], "/sweep/k/" + std::to_string(i)));
    }
    if (sw.contains("g")) {
      if (!sw.at("g").is_array()) throw ConfigError("/sweep/g", "expected an array");
      for (std::size_t i = 0; i < sw.at("g").size(); ++i)
        s.sweep_g.push_back(Modulus::from_json(sw.at("g")[i], "/sweep/g/" + std::to_string(i)));
    }
  }
  validate(s);
  return s;
}

Scenario Scenario::parse(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  return from_json(j);
}

Scenario Scenario::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(e.pointer(), path.string() + ": " + e.what());
  }
}

std::vector<std::string> theorems_for(SchemeTag s) {
  switch (s) {
    case SchemeTag::PicardNe: return {"sigma", "sigma_tilde", "theta", "psi", "psi_tilde"};
    case SchemeTag::PicardFne: return {"theta_fne", "theta", "sigma", "sigma_tilde"};
    case SchemeTag::MannSpc: return {"omega_tilde", "psi"};
    case SchemeTag::Ishikawa: return {"psi_tilde", "psi", "apfp"};
    case SchemeTag::CondE: return {"omega", "psi"};
    case SchemeTag::Ppa: return {"psi_tilde", "psi", "apfp"};
    case SchemeTag::QuasiMann: return {"psi_hat"};
    case SchemeTag::MonotoneSequence: return {"psi", "omega"};
  }
  return {};
}

std::string theorem_of(const Scenario& s) { return s.theorem ? *s.theorem : theorems_for(s.scheme).front(); }

bool theorem_requires_membership(const std::string& t) {
  return t == "psi_tilde" || t == "sigma_tilde" || t == "omega" || t == "omega_tilde" || t == "theta" ||
         t == "theta_fne" || t == "apfp";
}

ScenarioRunner::ScenarioRunner(Scenario s)
    : s_(std::move(s)),
      center_(scenario_center(s_)),
      domain_(scenario_domain(s_, center_)),
      traj_(scenario_trajectory(s_)),
      family_(scenario_family(s_)) {}

FejerModulus ScenarioRunner::chi() const {
  if (s_.chi) return *s_.chi;
  switch (s_.scheme) {
    case SchemeTag::MannSpc: return spc_moduli(s_.params).chi;
    case SchemeTag::Ishikawa: return FejerModulus::ishikawa();
    case SchemeTag::CondE: return cond_e_moduli(s_.params).chi;
    case SchemeTag::Ppa: return FejerModulus::ppa();
    case SchemeTag::MonotoneSequence: return FejerModulus::sum();
    default: return FejerModulus::picard();
  }
}

GHModuli ScenarioRunner::gh() const {
  if (s_.gh) return *s_.gh;
  return s_.scheme == SchemeTag::MannSpc ? GHModuli::square() : GHModuli::identity();
}

Modulus ScenarioRunner::gamma() const {
  if (s_.gamma) return *s_.gamma;
  return tb_modulus_ball(s_.dim, rational_from_double(domain_.diameter() / 2));
}

Modulus ScenarioRunner::phi() const {
  if (s_.phi) return *s_.phi;
  const SchemeParams& p = s_.params;
  switch (s_.scheme) {
    case SchemeTag::PicardFne: return fne_rate(*p.b, *p.lambda);
    case SchemeTag::MannSpc: return spc_moduli(p).phi_pp;
    case SchemeTag::Ishikawa: return ishikawa_phi(p);
    case SchemeTag::CondE: return cond_e_moduli(p).phi;
    case SchemeTag::Ppa: return ppa_moduli(p).phi_modulus();
    case SchemeTag::QuasiMann: return s_.phi_hat->base;
    default: return Modulus::identity();
  }
}

std::optional<ClosednessModuli> ScenarioRunner::closed() const {
  switch (s_.scheme) {
    case SchemeTag::MannSpc: return spc_moduli(s_.params).closed;
    case SchemeTag::CondE: return cond_e_moduli(s_.params).closed;
    case SchemeTag::Ppa: return ppa_moduli(s_.params).closed();
    case SchemeTag::MonotoneSequence: return std::nullopt;
    default: return ClosednessModuli{};
  }
}

RateInputs ScenarioRunner::rate_inputs(const Nat& k, const Modulus& g) const {
  RateInputs in;
  in.k = k;
  in.g = g;
  in.phi = phi();
  in.chi = chi();
  in.gh = gh();
  in.gamma = gamma();
  in.closed = closed();
  in.xi = s_.xi;
  return in;
}

Certificate ScenarioRunner::certificate(const Nat& k, const Modulus& g) const {
  EvalContext ctx(s_.caps.eval);
  const std::string t = theorem_of(s_);
  const Nat cap = s_.caps.eval.majorant_cap;
  Certificate c;
  if (t == "sigma") {
    c = picard_ne_sigma(k, g, phi(), gamma(), ctx);
  } else if (t == "sigma_tilde") {
    c = picard_ne_sigma_tilde(k, g, phi(), gamma(), ctx);
  } else if (t == "theta") {
    c = picard_ne_theta(k, g, phi(), gamma(), ctx);
  } else if (t == "theta_fne") {
    c = theta_fne(k, g, gamma(), *s_.params.b, *s_.params.lambda, ctx);
  } else if (t == "psi") {
    c = psi(rate_inputs(k, g), ctx);
  } else if (t == "psi_tilde") {
    c = psi_tilde(rate_inputs(k, g), ctx);
  } else if (t == "psi_hat") {
    c = psi_hat(rate_inputs(k, g), *s_.phi_hat, ctx);
  } else if (t == "omega_tilde") {
    c = omega_tilde_certificate(k, g, psi_plus(rate_inputs(k, g), phi(), cap), phi(), ctx);
  } else if (t == "omega") {
    Functional phi_plus = s_.scheme == SchemeTag::CondE ? cond_e_phi_plus_functional(s_.params) : Functional::of_k(phi());
    c = omega_certificate(k, g, psi_plus(rate_inputs(k, g), phi(), cap), phi_plus, ctx);
  } else if (t == "apfp") {
    c.theorem = "apfp";
    c.bound = phi().eval(k, ctx);
  } else {
    throw ConfigError("/theorem", "unknown theorem '" + t + "'");
  }
  c.exact = c.exact && !ctx.saturated();
  return c;
}

Verdict ScenarioRunner::run_static_checks() {
  const CheckerSettings& cs = s_.checker;
  if (!domain_.contains(s_.x0, cs.tau)) {
    Verdict v;
    v.status = Status::PropertyViolation;
    v.violations.push_back({{"reason", "x0 lies outside the domain"}, {"x0", point_to_json(s_.x0)}});
    static_checks_.push_back(check_summary("x0_in_domain", v));
    return v;
  }
  if (s_.op) {
    for (const PropertyCheck& c : validate_declared(*s_.op, domain_, {cs.property_pairs, cs.tau, cs.seed})) {
      static_checks_.push_back(property_summary(c));
      if (!c.ok) {
        Verdict v;
        v.status = Status::PropertyViolation;
        v.trials = c.trials;
        v.violations.push_back({{"property", c.property}, {"detail", c.detail}});
        return v;
      }
    }
  }
  const AfSampler sampler(center_, domain_, cs.sample_radius.value_or(domain_.diameter()));
  FejerCheckBudget fb;
  fb.trials = cs.fejer_trials;
  fb.tau = cs.tau;
  fb.seed = cs.seed;
  const SequenceSpec* eps = s_.scheme == SchemeTag::QuasiMann ? &*s_.params.eps_seq : nullptr;
  Verdict fejer = check_fejer_modulus(traj_, chi(), gh(), family_, sampler, fb, eps);
  static_checks_.push_back(check_summary("fejer_modulus", fejer));
  if (is_violation(fejer.status)) return fejer;

  const std::string t = theorem_of(s_);
  if ((t == "psi_tilde" || t == "sigma_tilde") && closed() && cs.closedness_trials > 0) {
    ClosednessCheckBudget cb;
    cb.trials = cs.closedness_trials;
    cb.tau = cs.tau;
    cb.seed = cs.seed;
    Verdict cl = check_uniform_closedness(family_, *closed(), sampler, cb);
    static_checks_.push_back(check_summary("uniform_closedness", cl));
    if (is_violation(cl.status)) return cl;
  }
  return Verdict{};
}

const std::vector<json>& ScenarioRunner::static_checks() {
  if (!static_verdict_) static_verdict_ = run_static_checks();
  return static_checks_;
}

Verdict ScenarioRunner::verify(const Nat& k, const Modulus& g) {
  static_checks();
  const CheckerSettings& cs = s_.checker;
  const std::string t = theorem_of(s_);
  json details = {{"scenario", s_.name}, {"scheme", to_string(s_.scheme)}, {"theorem", t}, {"k", nat_to_json(k)},
                  {"g", g.to_json()}};
  std::vector<json> checks = static_checks_;
  auto finish = [&](Verdict v) {
    details["checks"] = checks;
    for (auto& [key, value] : v.details.items()) details[key] = value;
    v.details = details;
    return v;
  };
  if (is_violation(static_verdict_->status)) return finish(*static_verdict_);

  // Bounds the certificate consumes, checked on this trajectory.
  std::optional<Verdict> pre;
  std::string pre_name;
  if (t == "psi" || t == "psi_tilde" || t == "sigma" || t == "sigma_tilde" || t == "apfp") {
    pre_name = "approximate_fixed_point_bound";
    pre = check_liminf_bound(traj_, family_, LiminfBound{phi()}, static_cast<std::uint64_t>(std::min(k, Nat(20))), 0,
                             cs.tau, s_.caps.search);
  } else if (t == "theta" || t == "theta_fne" || t == "omega_tilde") {
    pre_name = "rate_of_asymptotic_regularity";
    pre = check_asymptotic_regularity(traj_, family_, phi(), k, cs.rate_window, cs.tau);
  } else if (t == "omega") {
    pre_name = "metastable_asymptotic_regularity";
    Functional phi_plus = s_.scheme == SchemeTag::CondE ? cond_e_phi_plus_functional(s_.params) : Functional::of_k(phi());
    pre = check_asymptotic_regularity(traj_, family_, phi_plus, k, g, s_.caps.search, cs.tau);
  } else if (t == "psi_hat") {
    pre_name = "liminf_bound";
    pre = check_liminf_bound(traj_, family_, *s_.phi_hat, static_cast<std::uint64_t>(std::min(k, Nat(20))), 20,
                             cs.tau, s_.caps.search);
  }
  if (pre) {
    checks.push_back(check_summary(pre_name, *pre));
    if (is_violation(pre->status)) return finish(*pre);
  }

  Certificate cert;
  try {
    cert = certificate(k, g);
  } catch (const CapExceeded& e) {
    Verdict v;
    v.status = Status::Inconclusive;
    v.details = {{"error", e.what()}};
    return finish(v);
  }
  WitnessSearch opts;
  opts.cap = s_.caps.search;
  opts.max_window = s_.caps.max_window;
  opts.tau = cs.tau;
  if (theorem_requires_membership(t)) opts.membership = &family_;
  const Modulus window = t == "apfp" ? Modulus::constant(0) : g;
  Verdict v = verify_certificate(traj_, k, window, cert, opts);
  details["certificate"] = cert.to_json();
  return finish(v);
}

}  // namespace fejercert
