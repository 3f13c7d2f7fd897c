#pragma once

#include "fejercert/approximation.hpp"
#include "fejercert/modulus.hpp"
#include "fejercert/sequence.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace fejercert {

using Matrix = Eigen::MatrixXd;

json point_to_json(const Point& p);
Point point_from_json(const json& j, std::size_t dim, const std::string& pointer);
json matrix_to_json(const Matrix& M);
Matrix matrix_from_json(const json& j, std::size_t dim, const std::string& pointer);

// Closed ball or box in ℝᵈ.
class Domain {
 public:
  enum class Kind { Ball, Box };

  static Domain ball(Point center, double radius);
  static Domain box(Point lo, Point hi);

  Kind kind() const { return kind_; }
  std::size_t dim() const { return static_cast<std::size_t>(center_.size()); }
  bool contains(const Point& p, double tau) const;
  double diameter() const;
  // Largest ‖x‖ over the domain.
  double norm_bound() const;
  Point sample(std::mt19937_64& rng) const;
  // Vertices of a box, or the 2d axis extremes of a ball.
  std::vector<Point> extreme_points() const;

  json to_json() const;
  static Domain from_json(const json& j, std::size_t dim, const std::string& pointer);

 private:
  Kind kind_ = Kind::Ball;
  Point center_;
  double radius_ = 0.0;
  Point lo_, hi_;
};

struct DeclaredProperties {
  bool nonexpansive = false;
  std::optional<Rational> firmly_lambda;
  std::optional<Rational> spc_kappa;
  std::optional<Rational> condition_e_mu;
  std::optional<SequenceSpec> asymptotic_kn;

  json to_json() const;
  static DeclaredProperties from_json(const json& j, const std::string& pointer);
};

class Operator {
 public:
  enum class Kind {
    Scale,                // x ↦ a·x
    Affine,               // x ↦ A x + c
    ProjectBox,
    ProjectBall,
    ProxQuadratic,        // (I+γQ)⁻¹(x−γc)
    SpcFromNonexpansive,  // (N − κ·Id)/(1−κ)
    Reflection,           // x ↦ center − a(x − center)
    Piecewise1d,          // affine pieces on intervals of ℝ
  };

  struct Piece {
    double lo = 0.0, hi = 0.0;
    bool lo_open = false, hi_open = false;
    double a = 0.0, c = 0.0;
  };

  static Operator scale(std::size_t dim, double a);
  static Operator affine(Matrix A, Point c);
  static Operator project_box(Point lo, Point hi);
  static Operator project_ball(Point center, double radius);
  static Operator prox_quadratic(Matrix Q, Point c, double gamma);
  static Operator spc_from_nonexpansive(const Operator& inner, const Rational& kappa);
  static Operator reflection(Point center, double a);
  static Operator piecewise1d(std::vector<Piece> pieces);

  Point apply(const Point& x) const;
  Point operator()(const Point& x) const { return apply(x); }
  // Tⁿx
  Point power(const Point& x, std::uint64_t n) const;

  Kind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  const DeclaredProperties& declared() const { return declared_; }
  Operator& declare(DeclaredProperties d);
  // A fixed point, computed from the data or given in the scenario.
  std::optional<Point> fixed_point() const;
  Operator& set_fixed_point(Point p);
  // Points where the map is discontinuous or kinked (1-D piece ends).
  std::vector<Point> special_points() const;

  json to_json() const;
  static Operator from_json(const json& j, std::size_t dim, const std::string& pointer);

 private:
  Kind kind_ = Kind::Scale;
  std::size_t dim_ = 1;
  double a_ = 0.0;
  Matrix A_;
  Point c_, lo_, hi_;
  double gamma_ = 0.0;
  Rational kappa_;
  std::shared_ptr<const Operator> inner_;
  std::vector<Piece> pieces_;
  Eigen::LLT<Matrix> llt_;
  DeclaredProperties declared_;
  std::optional<Point> fixed_override_;
};

struct PropertyCheck {
  std::string property;
  bool ok = true;
  std::uint64_t trials = 0;
  std::string detail;  // first violation

  json to_json() const;
};

struct ValidationBudget {
  std::uint64_t pairs = 1000;
  double tau = 1e-9;
  std::uint64_t seed = 1;
};

PropertyCheck validate_nonexpansive(const Operator& T, const Domain& C, const ValidationBudget& budget);
PropertyCheck validate_firmly_nonexpansive(const Operator& T, const Rational& lambda, const Domain& C,
                                           const ValidationBudget& budget);
PropertyCheck validate_spc(const Operator& T, const Rational& kappa, const Domain& C, const ValidationBudget& budget);
PropertyCheck validate_condition_e(const Operator& T, const Rational& mu, const Domain& C,
                                   const ValidationBudget& budget);
PropertyCheck validate_asymptotically_nonexpansive(const Operator& T, const SequenceSpec& kn, const Domain& C,
                                                   const ValidationBudget& budget, std::uint64_t max_power = 50);
PropertyCheck validate_self_map(const Operator& T, const Domain& C, const ValidationBudget& budget);
// Every declared property plus the self-map check.
std::vector<PropertyCheck> validate_declared(const Operator& T, const Domain& C, const ValidationBudget& budget);

// Resolvent of A = ∇f for f(x) = ½xᵀQx + cᵀx.
class QuadraticResolvent {
 public:
  QuadraticResolvent(Matrix Q, Point c);
  Point apply(double gamma, const Point& x) const;
  // A zero of A (minimizer of f), if one exists.
  std::optional<Point> zero() const;
  std::size_t dim() const { return static_cast<std::size_t>(c_.size()); }
  const Matrix& Q() const { return Q_; }
  const Point& c() const { return c_; }

 private:
  Matrix Q_;
  Point c_;
};

// A lazily generated sequence in ℝᵈ with Euclidean metric.
class Trajectory {
 public:
  using Step = std::function<Point(std::uint64_t n, const Point& xn)>;
  using Closed = std::function<Point(std::uint64_t n)>;

  Trajectory(std::string scheme, Point x0, Step step);
  static Trajectory closed_form(std::string scheme, Closed f);

  // The reference is invalidated by a later at() with a larger index.
  const Point& at(std::uint64_t n);
  double distance(std::uint64_t i, std::uint64_t j);
  std::size_t dim();
  std::uint64_t materialized() const { return cache_.size(); }
  const std::string& scheme() const { return scheme_; }

 private:
  std::string scheme_;
  Step step_;
  Closed closed_;
  std::vector<Point> cache_;
};

Trajectory picard(const Operator& T, const Point& x0);
Trajectory mann(const Operator& T, const Point& x0, const SequenceSpec& lambda);
Trajectory ishikawa(const Operator& T, const Point& x0, const SequenceSpec& lambda, const SequenceSpec& s);
Trajectory ppa(const QuadraticResolvent& J, const Point& x0, const SequenceSpec& gamma);
// x_{n+1} = (1−λ_n)x_n + λ_n Tⁿx_n
Trajectory mann_asymptotic(const Operator& T, const Point& x0, const SequenceSpec& lambda);
// x_{n+1} = (1−λ_n)x_n + λ_n T x_n + ε_n·e with a fixed unit vector e
Trajectory perturbed_mann(const Operator& T, const Point& x0, const SequenceSpec& lambda, const SequenceSpec& eps,
                          const Point& direction);

// u_n = (x_n − x_{n+1})/γ_n
Point ppa_u(Trajectory& traj, const SequenceSpec& gamma, std::uint64_t n);

ApproximationFamily fixed_point_family(const Operator& T);
// residual(p,k) = max_{i≤k} ‖p − J_{γ_i}p‖ = ‖p − J_{m_k}p‖, since ‖p − J_γp‖ is nondecreasing in γ.
ApproximationFamily ppa_family(const QuadraticResolvent& J, const SequenceSpec& gamma);
// AF_k = {p : x_k ≤ p} for a nondecreasing real sequence; residual 0 inside, +∞ outside.
ApproximationFamily monotone_sequence_family(std::function<double(std::uint64_t)> x);

}  // namespace fejercert
