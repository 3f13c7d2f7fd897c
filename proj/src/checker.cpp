#include "fejercert/checker.hpp"

#include "fejercert/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fejercert {

namespace {

constexpr std::size_t kStoredViolations = 16;
// Exact all-pairs diameters are computed up to this many points per window.
constexpr std::uint64_t kPairwiseLimit = 4096;

struct Gap {
  double value = 0.0;
  bool known = true;  // false: the window is neither clearly inside nor clearly outside ε
};

// Diameter of {x_lo..x_hi}. A center radius ρ brackets it in [ρ, 2ρ].
Gap window_gap(Trajectory& traj, std::uint64_t lo, std::uint64_t hi, double eps) {
  traj.at(hi);
  const Point& c = traj.at(lo);
  if (c.size() == 1) {
    double mn = c[0], mx = c[0];
    for (std::uint64_t i = lo; i <= hi; ++i) {
      mn = std::min(mn, traj.at(i)[0]);
      mx = std::max(mx, traj.at(i)[0]);
    }
    return {mx - mn, true};
  }
  double radius = 0.0;
  for (std::uint64_t i = lo; i <= hi; ++i) radius = std::max(radius, (traj.at(i) - c).norm());
  if (radius > eps) return {radius, true};
  if (hi - lo + 1 > kPairwiseLimit) {
    if (2 * radius <= eps) return {2 * radius, true};
    return {radius, false};
  }
  double gap = 0.0;
  for (std::uint64_t i = lo; i <= hi; ++i)
    for (std::uint64_t j = i + 1; j <= hi; ++j) gap = std::max(gap, (traj.at(i) - traj.at(j)).norm());
  return {gap, true};
}

Point random_direction(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Point u(static_cast<Eigen::Index>(dim));
  do {
    for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = normal(rng);
  } while (u.norm() == 0.0);
  return u / u.norm();
}

std::uint64_t uniform_u64(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
  return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
}

void add_violation(Verdict& v, json j) {
  if (v.violations.size() < kStoredViolations) v.violations.push_back(std::move(j));
}

}  // namespace

json Witness::to_json() const {
  json j = {{"N", nat_to_json(N)}, {"window_end", nat_to_json(window_end)}, {"max_gap", max_pairwise_gap}};
  if (max_window_residual) j["max_residual"] = *max_window_residual;
  return j;
}

std::string to_string(Status s) {
  switch (s) {
    case Status::Verified:
      return "verified";
    case Status::Inconclusive:
      return "witness_found_beyond_cap_none";
    case Status::ModulusViolation:
      return "modulus_violation";
    case Status::PropertyViolation:
      return "property_violation";
  }
  return "unknown";
}

json Verdict::to_json() const {
  json j;
  j["status"] = to_string(status);
  j["bound"] = bound ? nat_to_json(*bound) : json(nullptr);
  if (bound) j["bound_exact"] = bound_exact;
  j["witness"] = witness ? witness->to_json() : json(nullptr);
  j["trials"] = trials;
  j["violations"] = violations;
  if (!details.empty()) j["details"] = details;
  return j;
}

Witness measure_window(Trajectory& traj, const Nat& k, const Nat& N, const Modulus& g, const WitnessSearch& opts) {
  EvalContext ctx;
  const Nat len = g.eval(N, ctx);
  if (ctx.saturated() || len + 1 > opts.max_window || N > std::numeric_limits<std::uint64_t>::max() / 2)
    throw CapExceeded("window at N=" + to_decimal(N) + " is longer than " + std::to_string(opts.max_window));
  const std::uint64_t lo = static_cast<std::uint64_t>(N);
  const std::uint64_t hi = lo + static_cast<std::uint64_t>(len);
  Witness w;
  w.N = N;
  w.window_end = Nat(hi);
  traj.at(hi);
  double gap = 0.0;
  for (std::uint64_t i = lo; i <= hi; ++i)
    for (std::uint64_t j = i + 1; j <= hi; ++j) gap = std::max(gap, traj.distance(i, j));
  w.max_pairwise_gap = gap;
  if (opts.membership) {
    double r = 0.0;
    for (std::uint64_t i = lo; i <= hi; ++i) r = std::max(r, opts.membership->residual(traj.at(i), k));
    w.max_window_residual = r;
  }
  return w;
}

WitnessScan scan_witness(Trajectory& traj, const Nat& k, const Modulus& g, const WitnessSearch& opts) {
  WitnessScan out;
  const double eps = inverse_succ(k) + opts.tau;
  for (std::uint64_t N = 0; N <= opts.cap; ++N) {
    ++out.scanned;
    EvalContext ctx;
    const Nat len = g.eval(Nat(N), ctx);
    if (ctx.saturated() || len + 1 > opts.max_window) {
      out.overflow = true;
      if (g.monotone()) break;  // every later window is at least as long
      continue;
    }
    const std::uint64_t hi = N + static_cast<std::uint64_t>(len);
    Gap gap = window_gap(traj, N, hi, eps);
    if (!gap.known) {
      out.overflow = true;
      continue;
    }
    if (gap.value > eps) continue;
    std::optional<double> residual;
    if (opts.membership) {
      double r = 0.0;
      bool inside = true;
      for (std::uint64_t i = N; i <= hi && inside; ++i) {
        r = std::max(r, opts.membership->residual(traj.at(i), k));
        inside = opts.membership->contains(traj.at(i), k, opts.tau);
      }
      if (!inside) continue;
      residual = r;
    }
    Witness w;
    w.N = Nat(N);
    w.window_end = Nat(hi);
    w.max_pairwise_gap = gap.value;
    w.max_window_residual = residual;
    out.witness = w;
    return out;
  }
  return out;
}

std::optional<Witness> find_witness(Trajectory& traj, const Nat& k, const Modulus& g, const WitnessSearch& opts) {
  return scan_witness(traj, k, g, opts).witness;
}

Verdict verify_certificate(Trajectory& traj, const Nat& k, const Modulus& g, const Certificate& cert,
                           const WitnessSearch& opts) {
  Verdict v;
  v.bound = cert.bound;
  v.bound_exact = cert.exact;
  const Nat limit = std::min(cert.bound, Nat(opts.cap));
  WitnessSearch o = opts;
  o.cap = static_cast<std::uint64_t>(limit);
  WitnessScan scan = scan_witness(traj, k, g, o);
  v.trials = scan.scanned;
  v.details = {{"theorem", cert.theorem}, {"k", nat_to_json(k)}, {"search_cap", opts.cap},
               {"searched_to", nat_to_json(limit)}};
  if (scan.overflow) v.details["windows_skipped"] = true;
  if (scan.witness) {
    v.witness = scan.witness;
    v.status = Status::Verified;
  } else if (cert.exact && cert.bound <= opts.cap && !scan.overflow) {
    v.status = Status::ModulusViolation;
    add_violation(v, {{"reason", "no N <= bound has a window within 1/(k+1)"}, {"bound", nat_to_json(cert.bound)}});
  } else {
    v.status = Status::Inconclusive;
  }
  return v;
}

AfSampler::AfSampler(Point center, std::optional<Domain> domain, double max_radius)
    : center_(std::move(center)), domain_(std::move(domain)), max_radius_(max_radius) {
  if (!(max_radius_ >= 0)) throw RangeError("max_radius", "must be nonnegative");
}

std::optional<Point> AfSampler::sample(const ApproximationFamily& family, const Nat& k, std::mt19937_64& rng,
                                       bool boundary) const {
  auto admissible = [&](const Point& p) {
    return (!domain_ || domain_->contains(p, 0.0)) && family.contains(p, k, 0.0);
  };
  if (!admissible(center_)) return std::nullopt;
  const Point u = random_direction(static_cast<std::size_t>(center_.size()), rng);
  double lo = 0.0, hi = max_radius_;
  if (admissible(center_ + hi * u)) {
    lo = hi;
  } else {
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (admissible(center_ + mid * u) ? lo : hi) = mid;
    }
  }
  if (!boundary) {
    const double rho = std::uniform_real_distribution<double>(0.0, lo)(rng);
    Point p = center_ + rho * u;
    if (admissible(p)) return p;
  }
  return Point(center_ + lo * u);
}

Verdict check_fejer_modulus(Trajectory& traj, const FejerModulus& chi, const GHModuli& gh,
                            const ApproximationFamily& family, const AfSampler& sampler, const FejerCheckBudget& budget,
                            const SequenceSpec* eps) {
  Verdict v;
  std::mt19937_64 rng(budget.seed);
  std::uint64_t violations = 0, skipped = 0, unreachable = 0, checked = 0;
  for (std::uint64_t t = 0; t < budget.trials; ++t) {
    const std::uint64_t n = uniform_u64(rng, 0, budget.max_n);
    const std::uint64_t m = uniform_u64(rng, 0, budget.max_m);
    const std::uint64_t r = uniform_u64(rng, 0, budget.max_r);
    EvalContext ctx;
    const Nat c = chi.eval(Nat(n), Nat(m), Nat(r), ctx);
    if (ctx.saturated() || inverse_succ(c) < budget.min_target) {
      ++skipped;
      continue;
    }
    std::optional<Point> p = sampler.sample(family, c, rng, t % 2 == 0);
    if (!p) {
      ++unreachable;
      continue;
    }
    ++checked;
    double err = 0.0;
    if (eps)
      for (std::uint64_t i = n; i < n + m; ++i) err += eps->at(i);
    const double rhs = gh.G((traj.at(n) - *p).norm()) + err + 1.0 / (static_cast<double>(r) + 1.0) + budget.tau;
    for (std::uint64_t l = 0; l <= m; ++l) {
      const double lhs = gh.H((traj.at(n + l) - *p).norm());
      if (lhs < rhs) continue;
      ++violations;
      add_violation(v, {{"n", n}, {"m", m}, {"r", r}, {"l", l}, {"chi", nat_to_json(c)}, {"p", point_to_json(*p)},
                        {"lhs", lhs}, {"rhs", rhs}});
      break;
    }
  }
  v.trials = checked;
  v.details = {{"check", "fejer_modulus"}, {"violations", violations}, {"skipped", skipped},
               {"unreachable", unreachable}};
  if (violations > 0)
    v.status = Status::ModulusViolation;
  else if (unreachable > 0 || checked == 0)
    v.status = Status::Inconclusive;
  return v;
}

Verdict check_asymptotic_regularity(Trajectory& traj, const ApproximationFamily& family, const Modulus& phi_pp,
                                    const Nat& k, std::uint64_t window, double tau) {
  Verdict v;
  EvalContext ctx;
  const Nat start = phi_pp.eval(k, ctx);
  v.bound = start;
  v.bound_exact = !ctx.saturated();
  v.details = {{"check", "rate_of_asymptotic_regularity"}, {"k", nat_to_json(k)}, {"window", window}};
  if (ctx.saturated() || start > 100'000'000) {
    v.status = Status::Inconclusive;
    return v;
  }
  const std::uint64_t s = static_cast<std::uint64_t>(start);
  for (std::uint64_t n = s; n <= s + window; ++n) {
    ++v.trials;
    const double res = family.residual(traj.at(n), k);
    if (res <= inverse_succ(k) + tau) continue;
    add_violation(v, {{"n", n}, {"residual", res}, {"target", inverse_succ(k)}});
  }
  if (!v.violations.empty()) v.status = Status::ModulusViolation;
  return v;
}

Verdict check_asymptotic_regularity(Trajectory& traj, const ApproximationFamily& family, const Functional& phi_plus,
                                    const Nat& k, const Modulus& g, std::uint64_t cap, double tau) {
  Verdict v;
  EvalContext ctx;
  const Nat bound = phi_plus.eval(k, g, ctx);
  v.bound = bound;
  v.bound_exact = !ctx.saturated();
  const std::uint64_t limit = static_cast<std::uint64_t>(std::min(bound, Nat(cap)));
  v.details = {{"check", "metastable_asymptotic_regularity"}, {"k", nat_to_json(k)}, {"search_cap", cap}};
  bool overflow = false;
  for (std::uint64_t N = 0; N <= limit; ++N) {
    ++v.trials;
    EvalContext gctx;
    const Nat len = g.eval(Nat(N), gctx);
    if (gctx.saturated() || len > 2'000'000) {
      overflow = true;
      if (g.monotone()) break;
      continue;
    }
    const std::uint64_t hi = N + static_cast<std::uint64_t>(len);
    bool inside = true;
    double r = 0.0;
    for (std::uint64_t m = N; m <= hi && inside; ++m) {
      r = std::max(r, family.residual(traj.at(m), k));
      inside = family.contains(traj.at(m), k, tau);
    }
    if (!inside) continue;
    Witness w;
    w.N = Nat(N);
    w.window_end = Nat(hi);
    w.max_window_residual = r;
    v.witness = w;
    return v;
  }
  if (v.bound_exact && bound <= cap && !overflow) {
    v.status = Status::ModulusViolation;
    add_violation(v, {{"reason", "no N <= bound has its window inside AF_k"}});
  } else {
    v.status = Status::Inconclusive;
  }
  return v;
}

Verdict check_liminf_bound(Trajectory& traj, const ApproximationFamily& family, const LiminfBound& phi_hat,
                           std::uint64_t max_k, std::uint64_t max_n, double tau, std::uint64_t cap) {
  Verdict v;
  bool overflow = false;
  for (std::uint64_t k = 0; k <= max_k; ++k) {
    for (std::uint64_t n = 0; n <= max_n; ++n) {
      ++v.trials;
      EvalContext ctx;
      const Nat b = phi_hat.eval(Nat(k), Nat(n), ctx);
      const std::uint64_t hi = static_cast<std::uint64_t>(std::min(b, Nat(cap)));
      bool found = false;
      for (std::uint64_t m = n; m <= hi && !found; ++m) found = family.contains(traj.at(m), Nat(k), tau);
      if (found) continue;
      if (ctx.saturated() || b > cap) {
        overflow = true;
        continue;
      }
      add_violation(v, {{"k", k}, {"n", n}, {"bound", nat_to_json(b)}});
    }
  }
  v.details = {{"check", "liminf_bound"}, {"max_k", max_k}, {"max_n", max_n}};
  if (!v.violations.empty())
    v.status = Status::ModulusViolation;
  else if (overflow)
    v.status = Status::Inconclusive;
  return v;
}

Verdict check_uniform_closedness(const ApproximationFamily& family, const ClosednessModuli& closed,
                                 const AfSampler& sampler, const ClosednessCheckBudget& budget) {
  Verdict v;
  std::mt19937_64 rng(budget.seed);
  std::uint64_t violations = 0, unreachable = 0, outside = 0, checked = 0;
  for (std::uint64_t t = 0; t < budget.trials; ++t) {
    const Nat k(uniform_u64(rng, 0, budget.max_k));
    EvalContext ctx;
    const Nat d = closed.delta_F.eval(k, ctx);
    const Nat w = closed.omega_F.eval(k, ctx);
    std::optional<Point> q = sampler.sample(family, d, rng, t % 2 == 0);
    if (!q) {
      ++unreachable;
      continue;
    }
    double radius = inverse_succ(w);
    if (t % 3 == 0)
      radius = 0.0;
    else if (t % 3 == 1)
      radius *= std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const Point p = *q + radius * random_direction(static_cast<std::size_t>(q->size()), rng);
    if (sampler.domain() && !sampler.domain()->contains(p, 0.0)) {
      ++outside;
      continue;
    }
    ++checked;
    if (family.contains(p, k, budget.tau)) continue;
    ++violations;
    add_violation(v, {{"k", nat_to_json(k)}, {"q", point_to_json(*q)}, {"p", point_to_json(p)},
                      {"residual", family.residual(p, k)}});
  }
  v.trials = checked;
  v.details = {{"check", "uniform_closedness"}, {"violations", violations}, {"unreachable", unreachable},
               {"outside_domain", outside}};
  if (violations > 0)
    v.status = Status::ModulusViolation;
  else if (unreachable > 0 || checked == 0)
    v.status = Status::Inconclusive;
  return v;
}

}  // namespace fejercert
