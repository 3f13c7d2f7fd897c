#pragma once

#include "fejercert/iterations.hpp"
#include "fejercert/moduli.hpp"
#include "fejercert/rates.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace fejercert {

inline constexpr double kDefaultTau = 1e-9;

struct Witness {
  Nat N;
  Nat window_end;
  double max_pairwise_gap = 0.0;
  std::optional<double> max_window_residual;

  json to_json() const;
};

enum class Status {
  Verified,
  Inconclusive,  // no witness up to the search cap and the bound lies beyond it
  ModulusViolation,
  PropertyViolation,
};

std::string to_string(Status s);

struct Verdict {
  Status status = Status::Verified;
  std::optional<Witness> witness;
  std::optional<Nat> bound;
  bool bound_exact = true;
  std::uint64_t trials = 0;
  std::vector<json> violations;
  json details = json::object();

  json to_json() const;
};

struct WitnessSearch {
  std::uint64_t cap = 10'000;
  // Longest window g(N)+1 that is scanned.
  std::uint64_t max_window = 2'000'000;
  double tau = kDefaultTau;
  // Also require x_i ∈ AF_k across the window.
  const ApproximationFamily* membership = nullptr;
};

struct WitnessScan {
  std::optional<Witness> witness;
  std::uint64_t scanned = 0;  // candidates N examined
  // Some window was longer than max_window and went unexamined.
  bool overflow = false;
};

// Least N ≤ cap with d(x_i,x_j) ≤ 1/(k+1)+τ for all i,j ∈ [N, N+g(N)].
WitnessScan scan_witness(Trajectory& traj, const Nat& k, const Modulus& g, const WitnessSearch& opts);
std::optional<Witness> find_witness(Trajectory& traj, const Nat& k, const Modulus& g, const WitnessSearch& opts);

// Window diameter and, if requested, largest residual over [N, N+g(N)].
Witness measure_window(Trajectory& traj, const Nat& k, const Nat& N, const Modulus& g, const WitnessSearch& opts);

// Verified iff a witness N ≤ min(bound, cap) exists. A bound within the cap
// without a witness is a refutation; a bound beyond it is inconclusive. An
// inexact bound is a lower bound, so it never refutes.
Verdict verify_certificate(Trajectory& traj, const Nat& k, const Modulus& g, const Certificate& cert,
                           const WitnessSearch& opts);

// Draws points of AF_k near a known point of F: a random direction, bisected
// to the edge of AF_k (and of the domain, if given).
class AfSampler {
 public:
  AfSampler(Point center, std::optional<Domain> domain, double max_radius);

  // boundary: take the outermost admissible radius, else a uniform fraction of it.
  std::optional<Point> sample(const ApproximationFamily& family, const Nat& k, std::mt19937_64& rng,
                              bool boundary) const;
  const Point& center() const { return center_; }
  const std::optional<Domain>& domain() const { return domain_; }

 private:
  Point center_;
  std::optional<Domain> domain_;
  double max_radius_;
};

struct FejerCheckBudget {
  std::uint64_t trials = 1000;
  std::uint64_t max_n = 20;
  std::uint64_t max_m = 20;
  std::uint64_t max_r = 10;
  double tau = kDefaultTau;
  std::uint64_t seed = 7;
  // Targets 1/(χ+1) below this are beyond double resolution; such trials are skipped.
  double min_target = 1e-12;
};

// Samples (n,m,r) and p ∈ AF_{χ(n,m,r)}, then checks
// H(d(x_{n+l},p)) < G(d(x_n,p)) + Σ_{i=n}^{n+m−1} ε_i + 1/(r+1) + τ for all l ≤ m.
Verdict check_fejer_modulus(Trajectory& traj, const FejerModulus& chi, const GHModuli& gh,
                            const ApproximationFamily& family, const AfSampler& sampler, const FejerCheckBudget& budget,
                            const SequenceSpec* eps = nullptr);

// Rate form: residual(x_n,k) ≤ 1/(k+1)+τ for every n ∈ [Φ⁺⁺(k), Φ⁺⁺(k)+window].
Verdict check_asymptotic_regularity(Trajectory& traj, const ApproximationFamily& family, const Modulus& phi_pp,
                                    const Nat& k, std::uint64_t window = 100, double tau = kDefaultTau);
// Metastable form: some N ≤ Φ⁺(k,g) has x_m ∈ AF_k for all m ∈ [N, N+g(N)].
Verdict check_asymptotic_regularity(Trajectory& traj, const ApproximationFamily& family, const Functional& phi_plus,
                                    const Nat& k, const Modulus& g, std::uint64_t cap = 1'000'000,
                                    double tau = kDefaultTau);

// Liminf bound: for the sampled (k,n), some m ∈ [n, Φ̂(k,n)] has x_m ∈ AF_k.
// With n fixed at 0 this checks an approximate F-point bound Φ(k) = Φ̂(k,0).
Verdict check_liminf_bound(Trajectory& traj, const ApproximationFamily& family, const LiminfBound& phi_hat,
                           std::uint64_t max_k, std::uint64_t max_n, double tau = kDefaultTau,
                           std::uint64_t cap = 1'000'000);

struct ClosednessCheckBudget {
  std::uint64_t trials = 1000;
  std::uint64_t max_k = 10;
  double tau = kDefaultTau;
  std::uint64_t seed = 11;
};

// q ∈ AF_{δ_F(k)}, ‖p−q‖ ≤ 1/(ω_F(k)+1) ⟹ p ∈ AF_k.
Verdict check_uniform_closedness(const ApproximationFamily& family, const ClosednessModuli& closed,
                                 const AfSampler& sampler, const ClosednessCheckBudget& budget);

}  // namespace fejercert
